//! Hilbert basis of the positive orthant with respect to `N_G`, and the
//! Hilbert-basis existence test.
//!
//! Every point of `σ_0 ∩ N_G` is a point of the half-open unit cube plus a
//! non-negative integer combination of the `e_i`. So if `n = p + q` with `p`,
//! `q` nonzero, some candidate `c` (a cube point or an `e_i`) has `c ≤ n`
//! componentwise and `n − c` nonzero in `σ_0 ∩ N_G`. Testing reducibility
//! against candidates alone is therefore enough; the cost is `O(l²·r)`.
//! Membership for general cones is co-NP-complete; the orthant case is easy.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::grouptype::{self, GroupElement, QuotientType, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertElement {
    /// Numerators over `exp`.
    pub numer: Vec<u64>,
    pub age: u32,
    pub is_vertex: bool,
    pub is_junior: bool,
    /// Factor index tuple for non-vertex elements.
    pub index: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    pub exp: u64,
    pub elements: Vec<HilbertElement>,
}

impl HilbertBasis {
    pub fn contains(&self, numer: &[u64]) -> bool {
        self.elements.iter().any(|e| e.numer == numer)
    }
}

pub fn hilbert_basis(t: &QuotientType) -> Result<HilbertBasis, TypeError> {
    let elements = grouptype::enumerate_elements(t)?;
    Ok(hilbert_basis_from(t, &elements))
}

pub fn hilbert_basis_from(t: &QuotientType, elements: &[GroupElement]) -> HilbertBasis {
    let r = t.r();
    let exp = t.exponent();
    let residues: HashSet<&[u64]> = elements.iter().map(|g| g.delta.as_slice()).collect();
    let mut candidates: Vec<(Vec<u64>, Option<&GroupElement>)> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = exp;
            (v, None)
        })
        .collect();
    candidates.extend(elements.iter().filter(|g| !g.is_identity()).map(|g| (g.delta.clone(), Some(g))));

    let in_cone = |v: &[u64]| -> bool {
        if v.iter().all(|&x| x == 0) {
            return false;
        }
        let res: Vec<u64> = v.iter().map(|x| x % exp).collect();
        residues.contains(res.as_slice())
    };

    let reducible = |n: &[u64]| -> bool {
        candidates.iter().any(|(c, _)| {
            if c.as_slice() == n || c.iter().zip(n).any(|(a, b)| a > b) {
                return false;
            }
            let diff: Vec<u64> = n.iter().zip(c).map(|(a, b)| a - b).collect();
            in_cone(&diff)
        })
    };

    let elements = candidates
        .iter()
        .filter(|(n, _)| !reducible(n))
        .map(|(n, g)| {
            let level: u64 = n.iter().sum();
            HilbertElement {
                numer: n.clone(),
                age: (level / exp) as u32,
                is_vertex: g.is_none(),
                is_junior: g.is_some() && level == exp,
                index: g.map(|g| g.index.clone()),
            }
        })
        .collect();
    HilbertBasis { exp, elements }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstCriterion {
    pub pass: bool,
    /// Basis elements of age at least two.
    pub witnesses: Vec<HilbertElement>,
    pub basis: HilbertBasis,
}

/// Passes iff every Hilbert-basis element is a vertex or a junior point.
pub fn first_criterion(t: &QuotientType) -> Result<FirstCriterion, TypeError> {
    if !t.is_gorenstein() {
        return Err(TypeError::NotGorenstein);
    }
    let basis = hilbert_basis(t)?;
    Ok(first_criterion_from(basis))
}

pub fn first_criterion_from(basis: HilbertBasis) -> FirstCriterion {
    let witnesses: Vec<HilbertElement> = basis.elements.iter().filter(|e| e.age >= 2).cloned().collect();
    FirstCriterion { pass: witnesses.is_empty(), witnesses, basis }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptype::parse_type;

    #[test]
    fn a1_surface() {
        let b = hilbert_basis(&parse_type("1/2(1,1)").unwrap()).unwrap();
        let v: Vec<Vec<u64>> = b.elements.iter().map(|e| e.numer.clone()).collect();
        assert_eq!(v, vec![vec![2, 0], vec![0, 2], vec![1, 1]]);
    }

    #[test]
    fn seven_fold_example() {
        let t = parse_type("1/7(1,1,2,3)").unwrap();
        let fc = first_criterion(&t).unwrap();
        assert!(!fc.pass);
        assert!(fc.basis.contains(&[1, 1, 2, 3]));
        // (2,2,4,6)/7 is twice (1,1,2,3)/7
        assert!(!fc.basis.contains(&[2, 2, 4, 6]));
        let w: Vec<Vec<u64>> = fc.witnesses.iter().map(|e| e.numer.clone()).collect();
        assert_eq!(w, vec![vec![3, 3, 6, 2], vec![4, 4, 1, 5], vec![5, 5, 3, 1]]);
    }

    #[test]
    fn nine_fold_example() {
        let fc = first_criterion(&parse_type("1/9(1,2,3,3)").unwrap()).unwrap();
        assert!(!fc.pass);
        assert!(fc.basis.contains(&[5, 1, 6, 6]));
    }

    #[test]
    fn gp_passes() {
        assert!(first_criterion(&parse_type("1/15(1,2,4,8)").unwrap()).unwrap().pass);
        assert!(first_criterion(&parse_type("1/39(1,5,8,25)").unwrap()).unwrap().pass);
    }
}
