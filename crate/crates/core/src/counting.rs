//! Lattice-point counting on dilations of the junior simplex: Ehrhart data,
//! h*-vectors, Dedekind sums, the Mordell–Pommersheim count for `r = 4`, and
//! counts of elements by age, height and support.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouptype::{self, GroupElement, QuotientType, TypeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("type is not Gorenstein")]
    NotGorenstein,
    #[error("gcd({p}, {q}) != 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("formula needs a cyclic type with r = 4")]
    NotCyclicR4,
    #[error("formula needs an msc type")]
    NotMsc,
    #[error("formula disagrees with enumeration: {0}")]
    Inconsistent(String),
    #[error("face enumeration limited to r <= {0}")]
    TooManyFaces(usize),
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `#(ν·𝔰_G ∩ N_G)` from the ages of the group elements.
pub fn ehrhart_eval(t: &QuotientType, nu: u64) -> Result<BigInt, CountError> {
    if !t.is_gorenstein() {
        return Err(CountError::NotGorenstein);
    }
    let elements = grouptype::enumerate_elements(t)?;
    Ok(ehrhart_eval_from(t.r(), &elements, nu))
}

pub fn ehrhart_eval_from(r: usize, elements: &[GroupElement], nu: u64) -> BigInt {
    let r = r as i64;
    let mut by_age: BTreeMap<i64, i64> = BTreeMap::new();
    for g in elements {
        *by_age.entry(g.age() as i64).or_insert(0) += 1;
    }
    by_age.iter().map(|(&a, &c)| binomial(nu as i64 - a + r - 1, r - 1) * c).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhrhartData {
    /// `a_0..a_{r−1}` as reduced fractions `"p/q"`.
    #[serde(with = "rational_vec")]
    pub coefficients: Vec<BigRational>,
    /// `Ehr(ν)` for `ν = 0..r−1`.
    #[serde(with = "int_vec")]
    pub evaluations: Vec<BigInt>,
    #[serde(with = "int_vec")]
    pub hstar: Vec<BigInt>,
}

impl EhrhartData {
    /// Value of the Ehrhart polynomial at any integer, negative allowed.
    pub fn polynomial_at(&self, x: i64) -> BigRational {
        let x = BigRational::from_integer(x.into());
        let mut acc = BigRational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// Interior count of `ν·𝔰_G` by reciprocity.
    pub fn interior_count(&self, nu: i64) -> BigInt {
        let d = self.coefficients.len() as i64 - 1;
        let v = self.polynomial_at(-nu);
        let v = if d % 2 == 0 { v } else { -v };
        assert!(v.is_integer());
        v.to_integer()
    }
}

pub fn ehrhart_poly(t: &QuotientType) -> Result<EhrhartData, CountError> {
    if !t.is_gorenstein() {
        return Err(CountError::NotGorenstein);
    }
    let elements = grouptype::enumerate_elements(t)?;
    Ok(ehrhart_poly_from(t.r(), &elements))
}

pub fn ehrhart_poly_from(r: usize, elements: &[GroupElement]) -> EhrhartData {
    let evaluations: Vec<BigInt> = (0..r as u64).map(|nu| ehrhart_eval_from(r, elements, nu)).collect();
    let coefficients = interpolate(&evaluations);
    let hstar = hstar_from_coefficients(&coefficients);
    EhrhartData { coefficients, evaluations, hstar }
}

/// Coefficients of the polynomial of degree `< n` through `(k, ys[k])`.
pub fn interpolate(ys: &[BigInt]) -> Vec<BigRational> {
    let n = ys.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (k, y) in ys.iter().enumerate() {
        // Lagrange basis polynomial for node k.
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for m in 0..n {
            if m == k {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * BigRational::from_integer(BigInt::from(m));
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(k as i64 - m as i64));
        }
        let scale = BigRational::from_integer(y.clone()) / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &scale;
        }
    }
    coeffs
}

/// `h*_i = Σ_j (Σ_{κ≤i} (−1)^κ C(d+1,κ)(i−κ)^j) a_j` with `d = deg`.
pub fn hstar_from_coefficients(a: &[BigRational]) -> Vec<BigInt> {
    let d = a.len() as i64 - 1;
    (0..=d)
        .map(|i| {
            let mut h = BigRational::zero();
            for (j, aj) in a.iter().enumerate() {
                let mut s = BigInt::zero();
                for kappa in 0..=i {
                    let term = binomial(d + 1, kappa) * BigInt::from(i - kappa).pow(j as u32);
                    if kappa % 2 == 0 {
                        s += term;
                    } else {
                        s -= term;
                    }
                }
                h += aj * BigRational::from_integer(s);
            }
            assert!(h.is_integer(), "h* entry must be an integer");
            h.to_integer()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDims {
    /// `dim H^{2i}` for `i = 0..r−1`.
    pub dims: Vec<u64>,
    pub euler: u64,
}

pub fn cohomology_dims(t: &QuotientType) -> Result<CohomologyDims, CountError> {
    let e = ehrhart_poly(t)?;
    let dims: Vec<u64> = e.hstar.iter().map(|h| h.to_u64().expect("nonnegative")).collect();
    Ok(CohomologyDims { euler: dims.iter().sum(), dims })
}

/// Closed form for `G(r;k)`: `Σ_j (−1)^j C(r,j) C(k(i−j)+r−1, r−1)`.
pub fn hypersurface_cohomology(r: u64, k: u64) -> Vec<BigInt> {
    let r = r as i64;
    let k = k as i64;
    (0..r)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let v = binomial(r, j) * binomial(k * (i - j) + r - 1, r - 1);
                    if j % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .sum()
        })
        .collect()
}

/// `DS(p,q) = Σ_{j=1}^{q−1} ((j/q))((pj/q))`.
pub fn dedekind_sum(p: i64, q: i64) -> Result<BigRational, CountError> {
    if q < 1 || p.gcd(&q) != 1 {
        return Err(CountError::NotCoprime { p, q });
    }
    let mut s = BigInt::zero();
    for j in 1..q {
        let pj = (p as i128 * j as i128).rem_euclid(q as i128) as i64;
        s += BigInt::from(2 * j - q) * BigInt::from(2 * pj - q);
    }
    Ok(BigRational::new(s, BigInt::from(4) * BigInt::from(q) * BigInt::from(q)))
}

/// `1/4 − DS(p,q)`.
pub fn dedekind_measure(p: i64, q: i64) -> Result<BigRational, CountError> {
    Ok(BigRational::new(1.into(), 4.into()) - dedekind_sum(p, q)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTerm {
    /// Edge `conv(e_i, e_j)`, zero-based.
    pub edge: (usize, usize),
    pub p: i64,
    pub q: i64,
    /// `gcd(α_i', α_j', l)`, the lattice length of the edge.
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpCount {
    pub count: u64,
    #[serde(with = "rational_vec")]
    pub a: Vec<BigRational>,
    pub edges: Vec<EdgeTerm>,
}

/// Mordell–Pommersheim count of `𝔰_G ∩ N_G` for cyclic msc `r = 4` types.
pub fn mp_count_r4(t: &QuotientType) -> Result<MpCount, CountError> {
    mp_count_r4_shifted(t, 0)
}

/// As `mp_count_r4`, with each `γ_i` replaced by `γ_i + shift·l/gcd(α_i,l)`.
pub fn mp_count_r4_shifted(t: &QuotientType, shift: i64) -> Result<MpCount, CountError> {
    let Some(w) = t.cyclic_weights().filter(|w| w.len() == 4) else {
        return Err(CountError::NotCyclicR4);
    };
    if !t.is_gorenstein() {
        return Err(CountError::NotGorenstein);
    }
    if w.contains(&0) {
        return Err(CountError::NotMsc);
    }
    let l = t.order() as i64;
    let alpha: Vec<i64> = w.iter().map(|&x| x as i64).collect();
    let g: Vec<i64> = alpha.iter().map(|a| a.gcd(&l)).collect();
    let gamma: Vec<i64> = alpha
        .iter()
        .zip(&g)
        .map(|(&a, &gi)| {
            let eg = a.extended_gcd(&l);
            debug_assert_eq!(eg.gcd, gi);
            eg.x + shift * (l / gi)
        })
        .collect();
    let mut a1 = BigRational::from_integer(g.iter().map(|x| BigInt::from(x * x)).sum()) / BigRational::from_integer((12 * l).into());
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&m| m != i && m != j).collect();
            let (ip, jp) = (rest[0], rest[1]);
            let gij = alpha[ip].gcd(&alpha[jp]).gcd(&l);
            let q = l * gij / (g[ip] * g[jp]);
            let p = ((-(gamma[ip] as i128) * (alpha[jp] / g[jp]) as i128).rem_euclid(q as i128)) as i64;
            let measure = if q == 1 { BigRational::new(1.into(), 4.into()) } else { dedekind_measure(p, q)? };
            a1 += measure * BigRational::from_integer(gij.into());
            edges.push(EdgeTerm { edge: (i, j), p, q, length: gij as u64 });
        }
    }
    let a2 = BigRational::new(g.iter().sum::<i64>().into(), 4.into());
    let a3 = BigRational::new(l.into(), 6.into());
    let total = BigRational::one() + &a1 + &a2 + &a3;
    if !total.is_integer() {
        return Err(CountError::Inconsistent(format!("non-integral count {total}")));
    }
    let count = total.to_integer().to_u64().ok_or_else(|| CountError::Inconsistent("negative count".into()))?;
    Ok(MpCount { count, a: vec![BigRational::one(), a1, a2, a3], edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportCount {
    pub support: Vec<usize>,
    /// Counts for ages `1..=k−1`, `k = |support|`.
    pub by_age: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BCounts {
    /// `(age, height, count)` over non-identity elements.
    pub by_age_height: Vec<(u32, u32, u64)>,
    pub by_support: Vec<SupportCount>,
    /// Whether the gcd formulas were evaluated (cyclic msc types).
    pub gcd_checked: bool,
}

impl BCounts {
    pub fn get(&self, age: u32, height: u32) -> u64 {
        self.by_age_height.iter().find(|&&(a, h, _)| a == age && h == height).map_or(0, |&(_, _, c)| c)
    }

    /// `#𝔅(age, |ν|; ν)`.
    pub fn get_support(&self, age: u32, support: &[usize]) -> u64 {
        self.by_support
            .iter()
            .find(|s| s.support == support)
            .and_then(|s| s.by_age.get(age as usize - 1).copied())
            .unwrap_or(0)
    }
}

pub fn b_counts(t: &QuotientType) -> Result<BCounts, CountError> {
    if !t.is_gorenstein() {
        return Err(CountError::NotGorenstein);
    }
    let elements = grouptype::enumerate_elements(t)?;
    b_counts_from(t, &elements)
}

pub fn b_counts_from(t: &QuotientType, elements: &[GroupElement]) -> Result<BCounts, CountError> {
    let by_age_height = grouptype::age_height_counts(elements).into_iter().map(|((a, h), c)| (a, h, c)).collect();
    let mut supports: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
    for g in elements.iter().filter(|g| !g.is_identity()) {
        let s = g.support();
        let k = s.len();
        let entry = supports.entry(s).or_insert_with(|| vec![0; k.saturating_sub(1)]);
        entry[g.age() as usize - 1] += 1;
    }
    let by_support: Vec<SupportCount> = supports.into_iter().map(|(support, by_age)| SupportCount { support, by_age }).collect();
    let msc = (0..t.r()).all(|i| elements.iter().any(|g| g.delta[i] != 0));
    let gcd_checked = t.is_cyclic() && msc;
    if gcd_checked {
        check_gcd_formulas(t, &by_support)?;
    }
    Ok(BCounts { by_age_height, by_support, gcd_checked })
}

fn gcd_all(values: impl IntoIterator<Item = u64>, l: u64) -> u64 {
    values.into_iter().fold(l, |g, x| g.gcd(&x))
}

/// Number of elements whose support is exactly `nu`, by inclusion–exclusion
/// over the subgroups fixing the complementary coordinates.
pub fn support_count_formula(alpha: &[u64], l: u64, nu: &[usize]) -> i64 {
    let k = nu.len();
    let mut total = 0i64;
    for mask in 0u32..(1 << k) {
        let kept: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| nu[b]).collect();
        let killed = (0..alpha.len()).filter(|i| !kept.contains(i)).map(|i| alpha[i]);
        let f = gcd_all(killed, l) as i64 - 1;
        if (k - kept.len()).is_multiple_of(2) {
            total += f;
        } else {
            total -= f;
        }
    }
    total
}

/// The subset-sum gcd expression `gcd(α_ν', l) − 1 − Σ_ρ (gcd(α_ν', α_ρ, l) − 1)`
/// over `ρ ⊂ ν` with `1 ≤ |ρ| ≤ k−2`. Exact for `k ≤ 3`.
pub fn support_count_subset_sum(alpha: &[u64], l: u64, nu: &[usize]) -> i64 {
    let k = nu.len();
    let complement: Vec<u64> = (0..alpha.len()).filter(|i| !nu.contains(i)).map(|i| alpha[i]).collect();
    let mut v = gcd_all(complement.iter().copied(), l) as i64 - 1;
    for mask in 1u32..(1 << k) {
        let size = mask.count_ones() as usize;
        if size > k.saturating_sub(2) {
            continue;
        }
        let rho = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| alpha[nu[b]]);
        v -= gcd_all(complement.iter().copied().chain(rho), l) as i64 - 1;
    }
    v
}

fn check_gcd_formulas(t: &QuotientType, by_support: &[SupportCount]) -> Result<(), CountError> {
    let alpha = t.cyclic_weights().expect("cyclic");
    let l = t.order();
    let r = t.r();
    for mask in 1u32..(1 << r) {
        let nu: Vec<usize> = (0..r).filter(|b| mask & (1 << b) != 0).collect();
        let enumerated: u64 = by_support.iter().find(|s| s.support == nu).map_or(0, |s| s.by_age.iter().sum());
        let formula = support_count_formula(alpha, l, &nu);
        if formula != enumerated as i64 {
            return Err(CountError::Inconsistent(format!("support {nu:?}: formula {formula}, enumerated {enumerated}")));
        }
        if nu.len() <= 3 {
            let literal = support_count_subset_sum(alpha, l, &nu);
            if literal != enumerated as i64 {
                return Err(CountError::Inconsistent(format!("support {nu:?}: subset sum {literal}, enumerated {enumerated}")));
            }
        }
    }
    if r == 4 {
        for i in 0..4 {
            for j in i + 1..4 {
                let rest: Vec<u64> = (0..4).filter(|&m| m != i && m != j).map(|m| alpha[m]).collect();
                let expected = gcd_all(rest, l) - 1;
                let got = by_support.iter().find(|s| s.support == [i, j]).map_or(0, |s| s.by_age[0]);
                if got != expected {
                    return Err(CountError::Inconsistent(format!("edge ({i},{j}): {got} != {expected}")));
                }
            }
        }
        for out in 0..4 {
            let nu: Vec<usize> = (0..4).filter(|&m| m != out).collect();
            let a4 = alpha[out];
            let s: u64 = nu.iter().map(|&j| gcd_all([a4, alpha[j]], l)).sum();
            let twice = a4.gcd(&l) as i64 - s as i64 + 2;
            let got = by_support.iter().find(|x| x.support == nu).map_or(0, |x| x.by_age[0]);
            if twice != 2 * got as i64 {
                return Err(CountError::Inconsistent(format!("facet {nu:?}: {got} juniors, formula {}/2", twice)));
            }
        }
    }
    Ok(())
}

/// Junior points in the relative interior of each face of `𝔰_G`, keyed by the
/// face's vertex set; includes the simplex itself.
pub fn face_interior_counts(t: &QuotientType) -> Result<BTreeMap<Vec<usize>, u64>, CountError> {
    const MAX_R: usize = 16;
    if !t.is_gorenstein() {
        return Err(CountError::NotGorenstein);
    }
    let r = t.r();
    if r > MAX_R {
        return Err(CountError::TooManyFaces(MAX_R));
    }
    let elements = grouptype::enumerate_elements(t)?;
    let mut m: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for mask in 1u32..(1 << r) {
        m.insert((0..r).filter(|b| mask & (1 << b) != 0).collect(), 0);
    }
    for g in elements.iter().filter(|g| !g.is_identity() && g.age() == 1) {
        *m.get_mut(&g.support()).expect("support is a face") += 1;
    }
    Ok(m)
}

pub(crate) mod rational_vec {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|s| s.parse::<BigRational>().map_err(D::Error::custom)).collect()
    }
}

pub(crate) mod int_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|s| s.parse::<BigInt>().map_err(D::Error::custom)).collect()
    }
}

pub(crate) mod int_opt_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|v| v.iter().map(|s| s.parse::<BigInt>().map_err(D::Error::custom)).collect()).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptype::parse_type;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ehrhart_values() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        assert_eq!(ehrhart_eval(&t, 0).unwrap(), BigInt::from(1));
        assert_eq!(ehrhart_eval(&t, 1).unwrap(), BigInt::from(9));
        assert_eq!(ehrhart_eval(&t, 2).unwrap(), BigInt::from(35));
    }

    #[test]
    fn ehrhart_polynomial() {
        let e = ehrhart_poly(&parse_type("1/12(1,2,3,6)").unwrap()).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(3, 1), q(3, 1), q(2, 1)]);
        assert_eq!(e.hstar, ints(&[1, 5, 5, 1]));
        let h = ehrhart_poly(&parse_type("1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)").unwrap()).unwrap();
        assert_eq!(h.hstar, ints(&[1, 6, 1, 0]));
    }

    #[test]
    fn cohomology() {
        let c = cohomology_dims(&parse_type("1/12(1,2,3,6)").unwrap()).unwrap();
        assert_eq!((c.dims, c.euler), (vec![1, 5, 5, 1], 12));
        assert_eq!(hypersurface_cohomology(4, 2), ints(&[1, 6, 1, 0]));
    }

    #[test]
    fn dedekind_sums() {
        assert_eq!(dedekind_sum(1, 1).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum(1, 2).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(2, 4), Err(CountError::NotCoprime { p: 2, q: 4 }));
        assert_eq!(dedekind_sum(-1, 3).unwrap(), q(-1, 18));
    }

    #[test]
    fn mordell_pommersheim() {
        for (s, n) in [("1/12(2,2,3,5)", 7), ("1/7(1,1,2,3)", 5), ("1/9(1,2,3,3)", 7), ("1/12(1,2,3,6)", 9)] {
            let t = parse_type(s).unwrap();
            assert_eq!(mp_count_r4(&t).unwrap().count, n, "{s}");
        }
        assert_eq!(mp_count_r4(&parse_type("1/6(1,2,3,0)").unwrap()), Err(CountError::NotMsc));
        assert_eq!(mp_count_r4(&parse_type("1/6(1,2,3)").unwrap()), Err(CountError::NotCyclicR4));
    }

    #[test]
    fn b_count_sets() {
        let b = b_counts(&parse_type("1/12(1,2,3,6)").unwrap()).unwrap();
        assert!(b.gcd_checked);
        assert_eq!((b.get(1, 2), b.get(1, 3), b.get(1, 4)), (3, 1, 1));
        assert_eq!(b.get_support(1, &[0, 1]), 2);
        assert_eq!(b.get_support(1, &[0, 2]), 1);
        let b = b_counts(&parse_type("1/12(2,2,3,5)").unwrap()).unwrap();
        assert_eq!(b.get(1, 2), 1);
        let b = b_counts(&parse_type("1/15(1,2,4,8)").unwrap()).unwrap();
        assert!(b.by_age_height.iter().all(|&(_, h, _)| h == 4));
    }

    #[test]
    fn subset_sum_form_fails_beyond_three() {
        // 1/12(1,2,3,6) has six elements of height 4
        let alpha = [1, 2, 3, 6];
        assert_eq!(support_count_formula(&alpha, 12, &[0, 1, 2, 3]), 6);
        assert_ne!(support_count_subset_sum(&alpha, 12, &[0, 1, 2, 3]), 6);
    }

    #[test]
    fn face_counts() {
        let f = face_interior_counts(&parse_type("1/12(1,2,3,6)").unwrap()).unwrap();
        assert_eq!(f[&vec![0, 1]], 2);
        assert_eq!(f[&vec![0]], 0);
        let f = face_interior_counts(&parse_type("1/9(1,2,3,3)").unwrap()).unwrap();
        assert_eq!(f[&vec![0, 1, 2]], 0);
    }

    #[test]
    fn reciprocity_small() {
        let e = ehrhart_poly(&parse_type("1/12(1,2,3,6)").unwrap()).unwrap();
        assert_eq!(e.interior_count(1), BigInt::from(1));
    }
}
