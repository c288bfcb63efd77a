pub mod grouptype;
pub mod lattice;
pub mod counting;
pub mod criteria;
pub mod hilbert;
pub mod lp;
pub mod pipeline;
pub mod series;
pub mod triangulate;
