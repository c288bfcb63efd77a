use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crepant_lab::counting;
use crepant_lab::grouptype::{self, QuotientType};
use crepant_lab::triangulate::{self, Triangulation};

use super::{interior_count, quotient, random_triangulation, residues, simplex_volume};

pub type Cyclic = (u64, Vec<u64>);

fn is_msc(l: u64, w: &[u64]) -> bool {
    (0..w.len()).all(|i| w.iter().enumerate().filter(|&(j, _)| j != i).fold(l, |g, (_, &x)| g.gcd(&x)) == 1)
}

/// Gorenstein cyclic msc types with `r ∈ rs` and `l ≤ lmax`.
pub fn cyclic_type(rs: std::ops::RangeInclusive<usize>, lmax: u64) -> impl Strategy<Value = Cyclic> {
    (rs, 2..=lmax)
        .prop_flat_map(|(r, l)| (Just(l), proptest::collection::vec(1..l, r - 1)))
        .prop_filter_map("not Gorenstein msc", |(l, mut w)| {
            let last = (l - w.iter().sum::<u64>() % l) % l;
            if last == 0 {
                return None;
            }
            w.push(last);
            is_msc(l, &w).then_some((l, w))
        })
}

fn parse(c: &Cyclic) -> QuotientType {
    quotient(std::slice::from_ref(c))
}

/// Flipping twice along the same circuit restores the triangulation.
pub fn flip_involution(c: &Cyclic, seed: u64) -> Result<(), TestCaseError> {
    let t = parse(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cfg, tri) = random_triangulation(&mut rng, &t);
    for f in triangulate::find_flips(&cfg, &tri, false) {
        let once = triangulate::apply(&cfg, &tri, &f);
        prop_assert!(triangulate::is_valid(&cfg, &once).valid);
        let twice = triangulate::apply_flip(&cfg, &once, &f.circuit).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&twice.simplices, &tri.simplices);
    }
    Ok(())
}

fn volume(points: &[Vec<i64>], t: &Triangulation) -> BigInt {
    t.simplices.iter().map(|s| simplex_volume(points, s)).sum()
}

/// Flips keep the total normalized volume equal to `l`.
pub fn volume_conservation(c: &Cyclic, seed: u64) -> Result<(), TestCaseError> {
    let t = parse(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cfg, tri) = random_triangulation(&mut rng, &t);
    let l = BigInt::from(c.0);
    prop_assert_eq!(&volume(&cfg.points, &tri), &l);
    for f in triangulate::find_flips(&cfg, &tri, false) {
        let removed: BigInt = f.removed.iter().map(|s| simplex_volume(&cfg.points, s)).sum();
        let added: BigInt = f.added.iter().map(|s| simplex_volume(&cfg.points, s)).sum();
        prop_assert_eq!(&removed, &added);
        let next = triangulate::apply(&cfg, &tri, &f);
        prop_assert_eq!(&volume(&cfg.points, &next), &l);
        prop_assert_eq!(next.total_volume(), c.0);
    }
    Ok(())
}

/// `ht(g) = age(g) + age(g⁻¹)` on every element.
pub fn age_height(c: &Cyclic) -> Result<(), TestCaseError> {
    let t = parse(c);
    for g in grouptype::enumerate_elements(&t).unwrap() {
        let inv = grouptype::inverse(&t, &g);
        prop_assert_eq!(g.age() + inv.age(), g.height());
        let oracle: u64 = g.delta.iter().zip(&inv.delta).map(|(a, b)| (a + b) / g.exp).sum();
        prop_assert_eq!(oracle, g.height() as u64);
    }
    Ok(())
}

/// Inversion maps the age-`i` elements of support `ν` onto the age-`#ν − i` ones.
pub fn ping_pong(c: &Cyclic) -> Result<(), TestCaseError> {
    let t = parse(c);
    let (exp, set) = residues(std::slice::from_ref(c));
    let bc = counting::b_counts(&t).unwrap();
    let r = c.1.len();
    for k in 1..=r as u32 {
        for i in 1..k {
            prop_assert_eq!(bc.get(i, k), bc.get(k - i, k));
            let class = |age: u32| -> BTreeSet<Vec<u64>> {
                set.iter()
                    .filter(|d| d.iter().filter(|&&x| x != 0).count() as u32 == k && (d.iter().sum::<u64>() / exp) as u32 == age)
                    .cloned()
                    .collect()
            };
            let image: BTreeSet<Vec<u64>> = class(i).iter().map(|d| d.iter().map(|&x| (exp - x) % exp).collect()).collect();
            prop_assert_eq!(&image, &class(k - i));
            prop_assert_eq!(image.len() as u64, bc.get(i, k));
        }
    }
    Ok(())
}

/// `(−1)^{r−1} Ehr(−ν)` counts interior points of the `ν`-th dilate.
pub fn reciprocity(c: &Cyclic) -> Result<(), TestCaseError> {
    let t = parse(c);
    let r = c.1.len();
    let (exp, set) = residues(std::slice::from_ref(c));
    let e = counting::ehrhart_poly(&t).unwrap();
    for nu in 1..=3u64 {
        let oracle = interior_count(exp, &set, r, nu);
        let mut at = e.polynomial_at(-(nu as i64));
        if r.is_multiple_of(2) {
            at = -at;
        }
        prop_assert_eq!(&at, &BigRational::from_integer(oracle.clone()));
        prop_assert_eq!(&e.interior_count(nu as i64), &oracle);
    }
    Ok(())
}
