#![allow(dead_code)]

pub mod props;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crepant_lab::counting;
use crepant_lab::grouptype::{self, parse_type, QuotientType};
use crepant_lab::triangulate::{self, PointConfig, Triangulation};

/// Residue vectors of the group generated by `1/q(w)` factors, over the lcm of the orders.
pub fn residues(factors: &[(u64, Vec<u64>)]) -> (u64, BTreeSet<Vec<u64>>) {
    let exp = factors.iter().fold(1u64, |a, (q, _)| a.lcm(q));
    let r = factors[0].1.len();
    let mut set = BTreeSet::from([vec![0u64; r]]);
    for (q, w) in factors {
        let scale = exp / q;
        let mut next = BTreeSet::new();
        for base in &set {
            for j in 0..*q {
                next.insert(base.iter().zip(w).map(|(&b, &x)| (b + j * x * scale) % exp).collect());
            }
        }
        set = next;
    }
    (exp, set)
}

pub fn type_string(factors: &[(u64, Vec<u64>)]) -> String {
    factors
        .iter()
        .map(|(q, w)| format!("1/{q}({})", w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("x")
}

/// Gorenstein weights of length `r` for `1/l`, all nonzero.
pub fn gorenstein_weights(rng: &mut ChaCha8Rng, r: usize, l: u64) -> Option<Vec<u64>> {
    let mut w: Vec<u64> = (0..r - 1).map(|_| rng.gen_range(1..l)).collect();
    let last = (l - w.iter().sum::<u64>() % l) % l;
    if last == 0 {
        return None;
    }
    w.push(last);
    Some(w)
}

/// Gorenstein cyclic msc type: every `r−1` weights are coprime to `l`.
pub fn random_cyclic(rng: &mut ChaCha8Rng, r: usize, lmax: u64) -> (u64, Vec<u64>) {
    loop {
        let l = rng.gen_range(2..=lmax);
        let Some(w) = gorenstein_weights(rng, r, l) else { continue };
        if w.iter().fold(l, |g, &x| g.gcd(&x)) != 1 {
            continue;
        }
        let msc = (0..r).all(|i| w.iter().enumerate().filter(|&(j, _)| j != i).fold(l, |g, (_, &x)| g.gcd(&x)) == 1);
        if msc {
            return (l, w);
        }
    }
}

/// Age histogram `(#age 0, #age 1, …)` by direct summation.
pub fn age_histogram(exp: u64, set: &BTreeSet<Vec<u64>>, r: usize) -> Vec<u64> {
    let mut h = vec![0u64; r];
    for d in set {
        let s: u64 = d.iter().sum();
        assert_eq!(s % exp, 0);
        h[(s / exp) as usize] += 1;
    }
    h
}

/// Junior simplex points `{x ∈ N_G : Σx = 1, x ≥ 0}` by brute force.
pub fn junior_count(exp: u64, set: &BTreeSet<Vec<u64>>, r: usize) -> u64 {
    r as u64 + set.iter().filter(|d| d.iter().sum::<u64>() == exp).count() as u64
}

/// Interior lattice points of the `nu`-th dilate.
pub fn interior_count(exp: u64, set: &BTreeSet<Vec<u64>>, r: usize, nu: u64) -> BigInt {
    let mut total = BigInt::from(0);
    for d in set {
        let age = d.iter().sum::<u64>() / exp;
        let zeros = d.iter().filter(|&&x| x == 0).count() as u64;
        if nu >= age + zeros {
            total += counting::binomial((nu - age - zeros) as i64 + r as i64 - 1, r as i64 - 1);
        }
    }
    total
}

pub fn quotient(factors: &[(u64, Vec<u64>)]) -> QuotientType {
    parse_type(&type_string(factors)).unwrap()
}

/// Random fine triangulation of a junior configuration.
pub fn random_triangulation(rng: &mut ChaCha8Rng, t: &QuotientType) -> (PointConfig, Triangulation) {
    let cfg = PointConfig::from_junior(t).unwrap();
    let mut order: Vec<usize> = (0..cfg.len()).collect();
    order[..].shuffle(rng);
    let tri = triangulate::fine_triangulation(&cfg, &order);
    (cfg, tri)
}

pub fn age_sum_matches_height(t: &QuotientType) -> bool {
    let el = grouptype::enumerate_elements(t).unwrap();
    el.iter().all(|g| {
        let inv = grouptype::inverse(t, g);
        g.age() + inv.age() == g.height()
    })
}

/// Bareiss determinant.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    &a[n - 1][n - 1] * sign
}

/// Normalized volume of a full-dimensional lattice simplex.
pub fn simplex_volume(points: &[Vec<i64>], s: &[usize]) -> BigInt {
    let o = &points[s[0]];
    let m: Vec<Vec<BigInt>> = s[1..].iter().map(|&i| points[i].iter().zip(o).map(|(a, b)| BigInt::from(a - b)).collect()).collect();
    det(&m).abs()
}

/// Barycentric coordinates of `p` with respect to the simplex `s`.
pub fn barycentric(points: &[Vec<i64>], s: &[usize], p: &[i64]) -> Vec<BigRational> {
    let d = points[0].len();
    let n = d + 1;
    // columns are the homogenized vertices
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|row| {
            let mut r: Vec<BigRational> = s
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(if row == d { 1 } else { points[v][row] })))
                .collect();
            r.push(BigRational::from_integer(BigInt::from(if row == d { 1 } else { p[row] })));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero()).expect("degenerate simplex");
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = &*x - p * &f;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n].clone()).collect()
}

/// Every point off a simplex has height strictly below the interpolation over that simplex.
pub fn heights_certify(points: &[Vec<i64>], simplices: &[Vec<usize>], w: &[BigInt]) -> bool {
    simplices.iter().all(|s| {
        (0..points.len()).filter(|p| !s.contains(p)).all(|p| {
            let lam = barycentric(points, s, &points[p]);
            let interp: BigRational = lam.iter().zip(s).map(|(l, &v)| l * BigRational::from_integer(w[v].clone())).sum();
            BigRational::from_integer(w[p].clone()) < interp
        })
    })
}

/// Regular continued fraction of `p/q`.
pub fn regular_cf(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while q != 0 {
        out.push(p.div_euclid(q));
        (p, q) = (q, p.rem_euclid(q));
    }
    out
}
