mod common;

use common::props::{self, cyclic_type};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn flip_involution(c in cyclic_type(3..=4, 30), seed in any::<u64>()) {
        props::flip_involution(&c, seed)?;
    }

    #[test]
    fn volume_conservation(c in cyclic_type(3..=4, 30), seed in any::<u64>()) {
        props::volume_conservation(&c, seed)?;
    }

    #[test]
    fn age_plus_inverse_age_is_height(c in cyclic_type(2..=6, 60)) {
        props::age_height(&c)?;
    }

    #[test]
    fn ping_pong(c in cyclic_type(3..=6, 60)) {
        props::ping_pong(&c)?;
    }

    #[test]
    fn ehrhart_reciprocity(c in cyclic_type(3..=5, 60)) {
        props::reciprocity(&c)?;
    }
}
