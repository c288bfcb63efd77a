//! Lattice triangulations of point configurations: placing seeds, validity
//! and basicness, f- and h-vectors, circuits and bistellar flips, coherence
//! through an exact LP, GKZ vectors and flip-graph exploration.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouptype::{self, PointLabel, QuotientType, TypeError};
use crate::lattice::{self, IntMatrix};
use crate::lp::{self, LpStatus, Strict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("points must all have dimension {0}")]
    Dimension(usize),
    #[error("duplicate point {0}")]
    DuplicatePoint(usize),
    #[error("points do not affinely span their ambient space")]
    Degenerate,
    #[error("simplex {0:?} is not a full-dimensional simplex of the configuration")]
    BadSimplex(Vec<usize>),
    #[error("circuit {0:?} is not supported on the triangulation")]
    Unsupported(Vec<usize>),
    #[error("point {0} is not a non-vertex point used by the triangulation")]
    UnusedPoint(usize),
    #[error("no flip path found within {0} nodes")]
    NotConnected(usize),
}

/// Lattice points in `Z^d` with the normalized volume of their convex hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfig {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    /// Empty unless the configuration comes from a junior simplex.
    pub labels: Vec<PointLabel>,
    pub volume: u64,
}

impl PointConfig {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self, TriangError> {
        let dim = points.first().map_or(0, |p| p.len());
        if points.iter().any(|p| p.len() != dim) {
            return Err(TriangError::Dimension(dim));
        }
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p.clone()) {
                return Err(TriangError::DuplicatePoint(i));
            }
        }
        if points.len() < dim + 1 {
            return Err(TriangError::Degenerate);
        }
        let mut cfg = PointConfig { dim, points, labels: Vec::new(), volume: 0 };
        let order: Vec<usize> = (0..cfg.len()).collect();
        let seed = placing_simplices(&cfg, &order).ok_or(TriangError::Degenerate)?;
        cfg.volume = seed.iter().map(|s| simplex_volume(&cfg, s)).sum();
        Ok(cfg)
    }

    /// Standardized junior configuration of a Gorenstein type.
    pub fn from_junior(t: &QuotientType) -> Result<Self, TriangError> {
        if !t.is_gorenstein() {
            return Err(TypeError::NotGorenstein.into());
        }
        let jc = grouptype::junior_config(t)?;
        let st = lattice::standardize_junior(&jc, t);
        let mut cfg = PointConfig::new(st.points)?;
        debug_assert_eq!(cfg.volume, st.volume);
        cfg.labels = jc.labels;
        Ok(cfg)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangulation {
    /// Sorted list of sorted index tuples.
    pub simplices: Vec<Vec<usize>>,
    pub volumes: Vec<u64>,
}

impl Triangulation {
    pub fn new(cfg: &PointConfig, simplices: Vec<Vec<usize>>) -> Result<Self, TriangError> {
        let mut simplices: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        simplices.sort();
        for s in &simplices {
            let ok = s.len() == cfg.dim + 1 && s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&i| i < cfg.len());
            if !ok || simplex_volume(cfg, s) == 0 {
                return Err(TriangError::BadSimplex(s.clone()));
            }
        }
        Ok(Self::from_sorted(cfg, simplices))
    }

    fn from_sorted(cfg: &PointConfig, simplices: Vec<Vec<usize>>) -> Self {
        let volumes = simplices.iter().map(|s| simplex_volume(cfg, s)).collect();
        Triangulation { simplices, volumes }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn total_volume(&self) -> u64 {
        self.volumes.iter().sum()
    }

    pub fn used_points(&self) -> BTreeSet<usize> {
        self.simplices.iter().flatten().copied().collect()
    }

    /// Every configuration point is a vertex.
    pub fn is_maximal(&self, cfg: &PointConfig) -> bool {
        self.used_points().len() == cfg.len()
    }
}

fn det_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(a[k][k])?;
                let y = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = x.checked_sub(y)? / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Determinant of the difference vectors `p_i − p_0` of `d+1` points.
fn orient(cfg: &PointConfig, idx: &[usize]) -> i128 {
    let p0 = &cfg.points[idx[0]];
    let rows: Vec<Vec<i128>> =
        idx[1..].iter().map(|&i| cfg.points[i].iter().zip(p0).map(|(&a, &b)| (a - b) as i128).collect()).collect();
    det_i128(rows.clone()).unwrap_or_else(|| {
        IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<Vec<i64>>>())
            .det()
            .to_i128()
            .expect("determinant fits i128")
    })
}

fn simplex_volume(cfg: &PointConfig, s: &[usize]) -> u64 {
    orient(cfg, s).unsigned_abs() as u64
}

/// Affine dependence of `d+2` points, primitive, in the order given.
fn dependence(cfg: &PointConfig, idx: &[usize]) -> Vec<i128> {
    let mut lam: Vec<i128> = (0..idx.len())
        .map(|i| {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            let d = orient(cfg, &rest);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = lam.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in lam.iter_mut() {
            *x /= g;
        }
    }
    lam
}

/// Barycentric numerators of `p` with respect to simplex `s` (sign-normalized
/// so that they sum to a positive denominator), or `None` if `p` lies outside.
fn carrier_in(cfg: &PointConfig, s: &[usize], p: usize) -> Option<Vec<usize>> {
    let mut idx = s.to_vec();
    idx.push(p);
    let mut lam = dependence(cfg, &idx);
    if lam[s.len()] > 0 {
        lam.iter_mut().for_each(|x| *x = -*x);
    }
    if lam[..s.len()].iter().any(|&x| x < 0) {
        return None;
    }
    Some(s.iter().zip(&lam).filter(|&(_, &x)| x > 0).map(|(&v, _)| v).collect())
}

fn rank_of(cfg: &PointConfig, idx: &[usize]) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let p0 = &cfg.points[idx[0]];
    let mut rows: Vec<Vec<BigRational>> = idx[1..]
        .iter()
        .map(|&i| cfg.points[i].iter().zip(p0).map(|(&a, &b)| BigRational::from_integer(BigInt::from(a - b))).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cfg.dim {
        let Some(pr) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[rank][c];
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank + 1
}

fn ridges_of(simplices: &[Vec<usize>]) -> HashMap<Vec<usize>, Vec<(usize, usize)>> {
    let mut map: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (si, s) in simplices.iter().enumerate() {
        for j in 0..s.len() {
            let mut ridge = s.clone();
            let opp = ridge.remove(j);
            map.entry(ridge).or_default().push((si, opp));
        }
    }
    map
}

fn with(ridge: &[usize], p: usize) -> Vec<usize> {
    let mut s = ridge.to_vec();
    s.push(p);
    s
}

fn placing_simplices(cfg: &PointConfig, order: &[usize]) -> Option<Vec<Vec<usize>>> {
    let d = cfg.dim;
    let mut base = Vec::new();
    for &p in order {
        if base.len() == d + 1 {
            break;
        }
        let mut cand = base.clone();
        cand.push(p);
        if rank_of(cfg, &cand) == cand.len() {
            base = cand;
        }
    }
    if base.len() < d + 1 {
        return None;
    }
    let mut simplices = vec![base.clone()];
    for &p in order {
        if base.contains(&p) {
            continue;
        }
        let ridges = ridges_of(&simplices);
        let mut added = Vec::new();
        for (ridge, owners) in &ridges {
            if owners.len() != 1 {
                continue;
            }
            let o = orient(cfg, &with(ridge, owners[0].1)).signum();
            let q = orient(cfg, &with(ridge, p)).signum();
            if q != 0 && q == -o {
                added.push(with(ridge, p));
            }
        }
        simplices.extend(added);
    }
    for s in simplices.iter_mut() {
        s.sort_unstable();
    }
    simplices.sort();
    Some(simplices)
}

/// Placing triangulation: points inside the current hull are skipped.
pub fn placing_triangulation(cfg: &PointConfig, order: &[usize]) -> Triangulation {
    let simplices = placing_simplices(cfg, order).expect("configuration spans");
    Triangulation::from_sorted(cfg, simplices)
}

fn stellar_insert(cfg: &PointConfig, simplices: &[Vec<usize>], p: usize) -> Vec<Vec<usize>> {
    let face = simplices
        .iter()
        .find_map(|s| carrier_in(cfg, s, p))
        .expect("point lies in the support of the triangulation");
    let mut out = Vec::with_capacity(simplices.len() + face.len());
    for s in simplices {
        if face.iter().all(|v| s.contains(v)) {
            for v in &face {
                let mut t: Vec<usize> = s.iter().copied().filter(|x| x != v).collect();
                t.push(p);
                t.sort_unstable();
                out.push(t);
            }
        } else {
            out.push(s.clone());
        }
    }
    out.sort();
    out
}

/// Placing triangulation followed by stellar insertion of the skipped points;
/// coherent and maximal.
pub fn fine_triangulation(cfg: &PointConfig, order: &[usize]) -> Triangulation {
    let mut simplices = placing_simplices(cfg, order).expect("configuration spans");
    let used: HashSet<usize> = simplices.iter().flatten().copied().collect();
    for &p in order {
        if !used.contains(&p) {
            simplices = stellar_insert(cfg, &simplices, p);
        }
    }
    Triangulation::from_sorted(cfg, simplices)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub valid: bool,
    pub issues: Vec<String>,
}

/// Pairwise intersection checks run only up to this many simplices.
pub const PAIRWISE_LIMIT: usize = 40;

pub fn is_valid(cfg: &PointConfig, t: &Triangulation) -> Validity {
    let mut issues = Vec::new();
    let d = cfg.dim;
    for s in &t.simplices {
        if s.len() != d + 1 || s.iter().any(|&i| i >= cfg.len()) || s.windows(2).any(|w| w[0] >= w[1]) {
            issues.push(format!("malformed simplex {s:?}"));
        } else if simplex_volume(cfg, s) == 0 {
            issues.push(format!("degenerate simplex {s:?}"));
        }
    }
    if !issues.is_empty() {
        return Validity { valid: false, issues };
    }
    if t.total_volume() != cfg.volume {
        issues.push(format!("volume {} != {}", t.total_volume(), cfg.volume));
    }
    for (ridge, owners) in ridges_of(&t.simplices) {
        match owners.as_slice() {
            [(_, a)] => {
                let o = orient(cfg, &with(&ridge, *a)).signum();
                if (0..cfg.len()).any(|x| orient(cfg, &with(&ridge, x)).signum() == -o) {
                    issues.push(format!("ridge {ridge:?} is free but interior"));
                }
            }
            [(_, a), (_, b)] => {
                let sa = orient(cfg, &with(&ridge, *a)).signum();
                let sb = orient(cfg, &with(&ridge, *b)).signum();
                if sa != -sb {
                    issues.push(format!("simplices on ridge {ridge:?} overlap"));
                }
            }
            _ => issues.push(format!("ridge {ridge:?} lies in {} simplices", owners.len())),
        }
    }
    if t.len() <= PAIRWISE_LIMIT {
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if !proper_intersection(cfg, &t.simplices[i], &t.simplices[j]) {
                    issues.push(format!("{:?} and {:?} meet improperly", t.simplices[i], t.simplices[j]));
                }
            }
        }
    }
    Validity { valid: issues.is_empty(), issues }
}

/// `conv(s1) ∩ conv(s2) = conv(s1 ∩ s2)`, decided by maximizing the weight a
/// common point puts on `s1 ∖ s2`.
pub fn proper_intersection(cfg: &PointConfig, s1: &[usize], s2: &[usize]) -> bool {
    let n1 = s1.len();
    let n = n1 + s2.len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut a = Vec::new();
    let mut row = vec![q(0); n];
    row[..n1].iter_mut().for_each(|x| *x = q(1));
    a.push(row);
    let mut row = vec![q(0); n];
    row[n1..].iter_mut().for_each(|x| *x = q(1));
    a.push(row);
    for k in 0..cfg.dim {
        let mut row: Vec<BigRational> = s1.iter().map(|&i| q(cfg.points[i][k])).collect();
        row.extend(s2.iter().map(|&j| q(-cfg.points[j][k])));
        a.push(row);
    }
    let mut b = vec![q(1), q(1)];
    b.extend((0..cfg.dim).map(|_| q(0)));
    let c: Vec<BigRational> = (0..n).map(|i| if i < n1 && !s2.contains(&s1[i]) { q(-1) } else { q(0) }).collect();
    let sol = lp::minimize(&c, &a, &b);
    match sol.status {
        LpStatus::Infeasible => true,
        LpStatus::Optimal => sol.value.is_zero(),
        LpStatus::Unbounded => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basicness {
    pub is_basic: bool,
    /// Simplices of normalized volume greater than one.
    pub nonunimodular: Vec<Vec<usize>>,
}

pub fn basicness(t: &Triangulation) -> Basicness {
    let nonunimodular: Vec<Vec<usize>> =
        t.simplices.iter().zip(&t.volumes).filter(|&(_, &v)| v != 1).map(|(s, _)| s.clone()).collect();
    Basicness { is_basic: nonunimodular.is_empty(), nonunimodular }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FhVectors {
    /// `f_{−1}, f_0, …, f_d`.
    pub f: Vec<u64>,
    /// `h_0, …, h_{d+1}`.
    pub h: Vec<i64>,
}

pub fn fh_vectors(t: &Triangulation) -> FhVectors {
    let Some(first) = t.simplices.first() else {
        return FhVectors { f: vec![1], h: vec![1] };
    };
    let n = first.len();
    let mut faces: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); n + 1];
    for s in &t.simplices {
        for mask in 1u32..(1 << n) {
            let face: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            faces[face.len()].insert(face);
        }
    }
    let mut f = vec![1u64];
    f.extend(faces[1..].iter().map(|x| x.len() as u64));
    let h = (0..=n)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let c = crate::counting::binomial((n - i) as i64, (k - i) as i64).to_i64().unwrap();
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * c * f[i] as i64
                })
                .sum()
        })
        .collect();
    FhVectors { f, h }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Circuit {
    pub points: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl Circuit {
    fn from_dependence(idx: &[usize], lam: &[i128]) -> Self {
        let mut pairs: Vec<(usize, i128)> = idx.iter().zip(lam).filter(|&(_, &x)| x != 0).map(|(&i, &x)| (i, x)).collect();
        pairs.sort_unstable();
        if pairs[0].1 < 0 {
            pairs.iter_mut().for_each(|p| p.1 = -p.1);
        }
        Circuit {
            points: pairs.iter().map(|p| p.0).collect(),
            positive: pairs.iter().filter(|p| p.1 > 0).map(|p| p.0).collect(),
            negative: pairs.iter().filter(|p| p.1 < 0).map(|p| p.0).collect(),
        }
    }

    pub fn side(&self, positive: bool) -> &[usize] {
        if positive {
            &self.positive
        } else {
            &self.negative
        }
    }

    /// Preserves the vertex set of any triangulation it flips.
    pub fn is_maximal_flip(&self) -> bool {
        self.positive.len() >= 2 && self.negative.len() >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flip {
    pub circuit: Circuit,
    /// Which side of the circuit the triangulation currently uses.
    pub from_positive: bool,
    pub removed: Vec<Vec<usize>>,
    pub added: Vec<Vec<usize>>,
}

fn without(c: &[usize], v: usize) -> Vec<usize> {
    c.iter().copied().filter(|&x| x != v).collect()
}

fn flip_on_side(t: &Triangulation, c: &Circuit, from_positive: bool) -> Option<Flip> {
    let mut link: Option<Vec<Vec<usize>>> = None;
    let mut removed = Vec::new();
    for &v in c.side(from_positive) {
        let cell = without(&c.points, v);
        let mut lk: Vec<Vec<usize>> = Vec::new();
        for s in &t.simplices {
            if cell.iter().all(|x| s.binary_search(x).is_ok()) {
                lk.push(s.iter().copied().filter(|x| cell.binary_search(x).is_err()).collect());
                removed.push(s.clone());
            }
        }
        if lk.is_empty() {
            return None;
        }
        lk.sort();
        match &link {
            None => link = Some(lk),
            Some(l) if *l == lk => {}
            _ => return None,
        }
    }
    let link = link?;
    let mut added = Vec::new();
    for &w in c.side(!from_positive) {
        let cell = without(&c.points, w);
        for l in &link {
            let mut s = cell.clone();
            s.extend(l);
            s.sort_unstable();
            added.push(s);
        }
    }
    removed.sort();
    added.sort();
    Some(Flip { circuit: c.clone(), from_positive, removed, added })
}

/// Flip along `c` on whichever side is supported.
pub fn flip_for(t: &Triangulation, c: &Circuit) -> Option<Flip> {
    flip_on_side(t, c, true).or_else(|| flip_on_side(t, c, false))
}

/// All supported flips. With `maximal_only`, only circuits with at least two
/// points on each side are returned; otherwise insertions of unused points
/// and removals of used ones are included.
pub fn find_flips(cfg: &PointConfig, t: &Triangulation, maximal_only: bool) -> Vec<Flip> {
    let mut seen = HashSet::new();
    let mut flips = Vec::new();
    let ridges = ridges_of(&t.simplices);
    let mut interior: Vec<(&Vec<usize>, usize, usize)> =
        ridges.iter().filter(|(_, o)| o.len() == 2).map(|(r, o)| (r, o[0].1, o[1].1)).collect();
    interior.sort();
    for (ridge, a, b) in interior {
        let mut idx = ridge.clone();
        idx.push(a);
        idx.push(b);
        let lam = dependence(cfg, &idx);
        let c = Circuit::from_dependence(&idx, &lam);
        if maximal_only && !c.is_maximal_flip() {
            continue;
        }
        if !seen.insert(c.points.clone()) {
            continue;
        }
        let from_positive = c.positive.contains(&a);
        if let Some(f) = flip_on_side(t, &c, from_positive) {
            flips.push(f);
        }
    }
    if !maximal_only {
        let used = t.used_points();
        for p in (0..cfg.len()).filter(|p| !used.contains(p)) {
            let Some(face) = t.simplices.iter().find_map(|s| carrier_in(cfg, s, p)) else { continue };
            let mut pts = face.clone();
            pts.push(p);
            pts.sort_unstable();
            let positive_is_p = pts[0] == p;
            let c = if positive_is_p {
                Circuit { points: pts, positive: vec![p], negative: face }
            } else {
                Circuit { points: pts, positive: face, negative: vec![p] }
            };
            if seen.insert(c.points.clone()) {
                if let Some(f) = flip_on_side(t, &c, positive_is_p) {
                    flips.push(f);
                }
            }
        }
    }
    flips
}

pub fn apply(cfg: &PointConfig, t: &Triangulation, f: &Flip) -> Triangulation {
    let removed: HashSet<&Vec<usize>> = f.removed.iter().collect();
    let mut simplices: Vec<Vec<usize>> = t.simplices.iter().filter(|s| !removed.contains(s)).cloned().collect();
    simplices.extend(f.added.iter().cloned());
    simplices.sort();
    Triangulation::from_sorted(cfg, simplices)
}

/// Flip `t` along `c`; applying the same circuit twice returns `t`.
pub fn apply_flip(cfg: &PointConfig, t: &Triangulation, c: &Circuit) -> Result<Triangulation, TriangError> {
    let f = flip_for(t, c).ok_or_else(|| TriangError::Unsupported(c.points.clone()))?;
    Ok(apply(cfg, t, &f))
}

fn row_of(cfg: &PointConfig, idx: &[usize], lam: &[i128], below: usize) -> Vec<BigInt> {
    let pos = idx.iter().position(|&x| x == below).unwrap();
    let flip = lam[pos] > 0;
    let mut row = vec![BigInt::zero(); cfg.len()];
    for (&i, &x) in idx.iter().zip(lam) {
        row[i] += BigInt::from(if flip { -x } else { x });
    }
    row
}

/// Rows `ρ` with `ρ·w > 0` iff `w` lifts `t` strictly upper convex: one per
/// interior ridge and one per unused point.
fn folding_rows(cfg: &PointConfig, t: &Triangulation) -> Vec<Vec<BigInt>> {
    let ridges = ridges_of(&t.simplices);
    let mut keys: Vec<&Vec<usize>> = ridges.keys().collect();
    keys.sort();
    let mut rows = Vec::new();
    for ridge in keys {
        let o = &ridges[ridge];
        if o.len() != 2 {
            continue;
        }
        let (a, b) = (o[0].1, o[1].1);
        let idx = with(&with(ridge, a), b);
        rows.push(row_of(cfg, &idx, &dependence(cfg, &idx), b));
    }
    let used = t.used_points();
    for p in (0..cfg.len()).filter(|p| !used.contains(p)) {
        if let Some(s) = t.simplices.iter().find(|s| carrier_in(cfg, s, p).is_some()) {
            let idx = with(s, p);
            rows.push(row_of(cfg, &idx, &dependence(cfg, &idx), p));
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coherence {
    pub coherent: bool,
    /// Heights `w` with every point off a simplex lifted strictly below the
    /// affine span of the lifted simplex.
    #[serde(with = "crate::counting::int_opt_vec")]
    pub heights: Option<Vec<BigInt>>,
}

pub fn is_coherent(cfg: &PointConfig, t: &Triangulation) -> Coherence {
    let rows = folding_rows(cfg, t);
    match lp::strict_feasibility(&rows, cfg.len()) {
        Strict::Feasible(w) => {
            let den = w.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let w: Vec<BigInt> = w.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
            Coherence { coherent: true, heights: Some(w) }
        }
        Strict::Infeasible(_) => Coherence { coherent: false, heights: None },
    }
}

/// Global check of a height certificate: for every simplex `s` and every
/// point `p ∉ s`, `w_p` is strictly below the affine interpolation of `w` on `s`.
pub fn verify_heights(cfg: &PointConfig, t: &Triangulation, w: &[BigInt]) -> bool {
    if w.len() != cfg.len() {
        return false;
    }
    t.simplices.iter().all(|s| {
        (0..cfg.len()).filter(|p| s.binary_search(p).is_err()).all(|p| {
            let idx = with(s, p);
            let row = row_of(cfg, &idx, &dependence(cfg, &idx), p);
            let v: BigInt = row.iter().zip(w).map(|(a, x)| a * x).sum();
            v.is_positive()
        })
    })
}

/// Per point, the summed normalized volume of incident simplices.
pub fn gkz_vector(cfg: &PointConfig, t: &Triangulation) -> Vec<u64> {
    let mut v = vec![0u64; cfg.len()];
    for (s, &vol) in t.simplices.iter().zip(&t.volumes) {
        for &i in s {
            v[i] += vol;
        }
    }
    v
}

/// Number of maximal simplices containing a used non-vertex point.
pub fn star_euler(cfg: &PointConfig, t: &Triangulation, p: usize) -> Result<usize, TriangError> {
    let is_vertex = cfg.labels.get(p).is_some_and(|l| matches!(l.kind, grouptype::PointKind::Vertex(_)));
    let n = t.simplices.iter().filter(|s| s.binary_search(&p).is_ok()).count();
    if is_vertex || n == 0 {
        return Err(TriangError::UnusedPoint(p));
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    Maximal,
    Coherent,
    Basic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreOptions {
    /// Restrict to flips preserving the vertex set and seed with maximal
    /// triangulations.
    pub maximal_only: bool,
    /// Also expand non-coherent nodes.
    pub expand_noncoherent: bool,
    pub node_budget: usize,
    /// Extra seeds from shuffled placing orders.
    pub seed_orders: usize,
    pub rng_seed: u64,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions { maximal_only: true, expand_noncoherent: false, node_budget: 100_000, seed_orders: 0, rng_seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploredNode {
    pub triangulation: Triangulation,
    pub coherent: bool,
    pub basic: bool,
    pub maximal: bool,
    pub gkz: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exploration {
    pub nodes: Vec<ExploredNode>,
    pub edges: Vec<(usize, usize)>,
    /// False when the node budget stopped the search.
    pub complete: bool,
    pub options: ExploreOptions,
    pub notes: Vec<String>,
}

impl Exploration {
    pub fn select(&self, filters: &[Filter]) -> Vec<&ExploredNode> {
        self.nodes
            .iter()
            .filter(|n| {
                filters.iter().all(|f| match f {
                    Filter::Maximal => n.maximal,
                    Filter::Coherent => n.coherent,
                    Filter::Basic => n.basic,
                })
            })
            .collect()
    }

    pub fn count(&self, filters: &[Filter]) -> usize {
        self.select(filters).len()
    }

    /// Facet counts with multiplicities among the selected nodes.
    pub fn facet_histogram(&self, filters: &[Filter]) -> Vec<(usize, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for n in self.select(filters) {
            *h.entry(n.triangulation.len()).or_insert(0) += 1;
        }
        h.into_iter().collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flips {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if n.basic { "box" } else { "ellipse" };
            let style = if n.coherent { "solid" } else { "dashed" };
            s += &format!("  t{i} [label=\"{i}:{}\", shape={shape}, style={style}];\n", n.triangulation.len());
        }
        for (a, b) in &self.edges {
            s += &format!("  t{a} -- t{b};\n");
        }
        s + "}\n"
    }
}

fn analyze(cfg: &PointConfig, t: Triangulation) -> ExploredNode {
    let coherent = is_coherent(cfg, &t).coherent;
    ExploredNode {
        basic: basicness(&t).is_basic,
        maximal: t.is_maximal(cfg),
        gkz: gkz_vector(cfg, &t),
        coherent,
        triangulation: t,
    }
}

fn seeds(cfg: &PointConfig, opts: &ExploreOptions) -> Vec<Triangulation> {
    let mut orders = vec![(0..cfg.len()).collect::<Vec<usize>>()];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    for _ in 0..opts.seed_orders {
        let mut o: Vec<usize> = (0..cfg.len()).collect();
        o.shuffle(&mut rng);
        orders.push(o);
    }
    orders
        .iter()
        .map(|o| if opts.maximal_only { fine_triangulation(cfg, o) } else { placing_triangulation(cfg, o) })
        .collect()
}

/// Breadth-first search of the flip graph from placing seeds. Frontier nodes
/// are expanded in parallel and merged in a fixed order, so the output does
/// not depend on scheduling.
pub fn explore(cfg: &PointConfig, opts: &ExploreOptions) -> Exploration {
    let mut index: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
    let mut nodes: Vec<ExploredNode> = Vec::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut complete = true;
    let mut frontier = Vec::new();
    let mut fresh = Vec::new();
    for t in seeds(cfg, opts) {
        if !index.contains_key(&t.simplices) {
            index.insert(t.simplices.clone(), index.len());
            fresh.push(t);
        }
    }
    loop {
        let analyzed: Vec<ExploredNode> = fresh.into_par_iter().map(|t| analyze(cfg, t)).collect();
        for n in analyzed {
            frontier.push(nodes.len());
            nodes.push(n);
        }
        if frontier.is_empty() {
            break;
        }
        let expansions: Vec<(usize, Vec<Triangulation>)> = frontier
            .par_iter()
            .filter(|&&i| opts.expand_noncoherent || nodes[i].coherent)
            .map(|&i| {
                let t = &nodes[i].triangulation;
                (i, find_flips(cfg, t, opts.maximal_only).iter().map(|f| apply(cfg, t, f)).collect())
            })
            .collect();
        frontier.clear();
        fresh = Vec::new();
        'outer: for (i, ts) in expansions {
            for t in ts {
                let j = match index.get(&t.simplices) {
                    Some(&j) => j,
                    None => {
                        if index.len() >= opts.node_budget {
                            complete = false;
                            break 'outer;
                        }
                        let j = index.len();
                        index.insert(t.simplices.clone(), j);
                        fresh.push(t);
                        j
                    }
                };
                edges.insert((i.min(j), i.max(j)));
            }
        }
        if !complete {
            let analyzed: Vec<ExploredNode> = fresh.into_par_iter().map(|t| analyze(cfg, t)).collect();
            nodes.extend(analyzed);
            break;
        }
    }
    let mut notes = Vec::new();
    if !opts.expand_noncoherent {
        notes.push("only coherent nodes were expanded; non-coherent nodes are boundary neighbours".into());
    }
    notes.push("flip-connectivity is guaranteed for coherent triangulations only".into());
    canonicalize(nodes, edges, complete, opts.clone(), notes)
}

fn canonicalize(nodes: Vec<ExploredNode>, edges: BTreeSet<(usize, usize)>, complete: bool, options: ExploreOptions, notes: Vec<String>) -> Exploration {
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[a].triangulation.simplices.cmp(&nodes[b].triangulation.simplices));
    let mut rank = vec![0; nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut slots: Vec<Option<ExploredNode>> = nodes.into_iter().map(Some).collect();
    let nodes = order.iter().map(|&o| slots[o].take().unwrap()).collect();
    let mut edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (rank[a], rank[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    Exploration { nodes, edges, complete, options, notes }
}

type Step = (Vec<Vec<usize>>, Circuit);

/// A shortest flip sequence from `a` to `b`, passing through coherent
/// triangulations only when `coherent_only` is set.
pub fn flop_path(
    cfg: &PointConfig,
    a: &Triangulation,
    b: &Triangulation,
    coherent_only: bool,
    budget: usize,
) -> Result<Vec<Circuit>, TriangError> {
    if a.simplices == b.simplices {
        return Ok(Vec::new());
    }
    let maximal_only = a.is_maximal(cfg) && b.is_maximal(cfg);
    let mut parent: HashMap<Vec<Vec<usize>>, Option<Step>> = HashMap::new();
    parent.insert(a.simplices.clone(), None);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(t) = queue.pop_front() {
        for f in find_flips(cfg, &t, maximal_only) {
            let u = apply(cfg, &t, &f);
            if parent.contains_key(&u.simplices) {
                continue;
            }
            if coherent_only && u.simplices != b.simplices && !is_coherent(cfg, &u).coherent {
                continue;
            }
            parent.insert(u.simplices.clone(), Some((t.simplices.clone(), f.circuit.clone())));
            if u.simplices == b.simplices {
                let mut path = Vec::new();
                let mut cur = u.simplices;
                while let Some(Some((prev, c))) = parent.get(&cur) {
                    path.push(c.clone());
                    cur = prev.clone();
                }
                path.reverse();
                return Ok(path);
            }
            if parent.len() >= budget {
                return Err(TriangError::NotConnected(budget));
            }
            queue.push_back(u);
        }
    }
    Err(TriangError::NotConnected(parent.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptype::parse_type;

    fn square() -> PointConfig {
        PointConfig::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn trivial_simplex() {
        let cfg = PointConfig::new(vec![vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(cfg.volume, 6);
        let t = placing_triangulation(&cfg, &[0, 1, 2]);
        assert_eq!(t.simplices, vec![vec![0, 1, 2]]);
        assert!(find_flips(&cfg, &t, true).is_empty());
        assert!(!basicness(&t).is_basic);
        assert_eq!(gkz_vector(&cfg, &t), vec![6, 6, 6]);
        let fh = fh_vectors(&t);
        assert_eq!(fh.f, vec![1, 3, 3, 1]);
        assert_eq!(fh.h, vec![1, 0, 0, 0]);
    }

    #[test]
    fn segment_with_midpoint() {
        let t = parse_type("1/2(1,1)").unwrap();
        let cfg = PointConfig::from_junior(&t).unwrap();
        assert_eq!((cfg.dim, cfg.len(), cfg.volume), (1, 3, 2));
        let tri = fine_triangulation(&cfg, &[0, 1, 2]);
        assert_eq!(tri.len(), 2);
        assert!(basicness(&tri).is_basic);
        let fh = fh_vectors(&tri);
        assert_eq!((fh.f, fh.h), (vec![1, 3, 2], vec![1, 1, 0]));
    }

    #[test]
    fn square_flip() {
        let cfg = square();
        let t = placing_triangulation(&cfg, &[0, 1, 2, 3]);
        assert!(is_valid(&cfg, &t).valid);
        let flips = find_flips(&cfg, &t, true);
        assert_eq!(flips.len(), 1);
        let c = flips[0].circuit.clone();
        let u = apply_flip(&cfg, &t, &c).unwrap();
        assert_ne!(u, t);
        assert!(is_valid(&cfg, &u).valid);
        assert_eq!(apply_flip(&cfg, &u, &c).unwrap(), t);
        let (g1, g2) = (gkz_vector(&cfg, &t), gkz_vector(&cfg, &u));
        let diff: Vec<i64> = (0..4).map(|i| g1[i] as i64 - g2[i] as i64).collect();
        assert!(diff == vec![1, -1, -1, 1] || diff == vec![-1, 1, 1, -1]);
        assert_eq!(flop_path(&cfg, &t, &u, true, 100).unwrap(), vec![c]);
        assert!(flop_path(&cfg, &t, &t, true, 100).unwrap().is_empty());
    }

    #[test]
    fn overlapping_simplices_invalid() {
        let cfg = square();
        let t = Triangulation::new(&cfg, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert!(!is_valid(&cfg, &t).valid);
        assert!(!proper_intersection(&cfg, &[0, 1, 2], &[0, 1, 3]));
        assert!(proper_intersection(&cfg, &[0, 1, 2], &[1, 2, 3]));
    }

    #[test]
    fn star_of_center() {
        let cfg = PointConfig::new(vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1]]).unwrap();
        let t = Triangulation::new(&cfg, vec![vec![0, 1, 4], vec![1, 3, 4], vec![2, 3, 4], vec![0, 2, 4]]).unwrap();
        assert!(is_valid(&cfg, &t).valid);
        assert_eq!(star_euler(&cfg, &t, 4).unwrap(), 4);
        // removing the centre is the only non-maximal flip besides none
        let flips = find_flips(&cfg, &t, false);
        assert!(flips.iter().any(|f| f.circuit.points.contains(&4)));
        assert!(find_flips(&cfg, &t, true).is_empty());
    }

    #[test]
    fn pinwheel_not_coherent() {
        let cfg = PointConfig::new(vec![vec![4, 0], vec![0, 4], vec![0, 0], vec![2, 1], vec![1, 2], vec![1, 1]]).unwrap();
        let (a, b) = ([0, 1, 2], [3, 4, 5]);
        let mut found = 0;
        for twist in [false, true] {
            let mut s = vec![b.to_vec()];
            for i in 0..3 {
                let j = (i + 1) % 3;
                let x = if twist { b[j] } else { b[i] };
                s.push(vec![a[i], a[j], x]);
                s.push(vec![if twist { a[i] } else { a[j] }, b[i], b[j]]);
            }
            let Ok(t) = Triangulation::new(&cfg, s) else { continue };
            if is_valid(&cfg, &t).valid {
                found += 1;
                assert!(!is_coherent(&cfg, &t).coherent);
            }
        }
        assert!(found >= 1);
    }

    #[test]
    fn census_1_12() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        let cfg = PointConfig::from_junior(&t).unwrap();
        assert_eq!(cfg.volume, 12);
        let seed = fine_triangulation(&cfg, &(0..cfg.len()).collect::<Vec<_>>());
        assert!(is_valid(&cfg, &seed).valid);
        let coh = is_coherent(&cfg, &seed);
        assert!(coh.coherent);
        assert!(verify_heights(&cfg, &seed, coh.heights.as_ref().unwrap()));
        let ex = explore(&cfg, &ExploreOptions::default());
        assert!(ex.complete);
        let f = [Filter::Coherent, Filter::Maximal];
        assert_eq!(ex.count(&f), 13);
        assert_eq!(ex.facet_histogram(&f), vec![(9, 1), (10, 3), (11, 4), (12, 5)]);
        assert_eq!(ex.count(&[Filter::Coherent, Filter::Maximal, Filter::Basic]), 5);
        let gkz: HashSet<&Vec<u64>> = ex.select(&f).iter().map(|n| &n.gkz).collect();
        assert_eq!(gkz.len(), 13);
    }
}
