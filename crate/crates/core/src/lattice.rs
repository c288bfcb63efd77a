//! Exact integer lattice algebra: Hermite normal form, determinants,
//! membership in `N_G`, and the standardization of the junior simplex.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouptype::{self, GroupElement, JuniorConfig, QuotientType, TypeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("singular system")]
    Singular,
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    /// Matrix with the given vectors as columns, each of length `rows`.
    pub fn from_columns<T: Into<BigInt> + Copy>(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum()).collect()
    }

    /// Leading `rows × n` block of columns.
    pub fn leading_columns(&self, n: usize) -> IntMatrix {
        let mut m = Self::zeros(self.rows, n);
        for i in 0..self.rows {
            for j in 0..n {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    /// `col[dst] += f · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Replace columns `(a, b)` by `(x·a + y·b, u·a + v·b)`.
    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

/// Column-style Hermite normal form: returns `(h, u)` with `h = a·u`, `u`
/// unimodular, `h = [H | 0]` where `H` is lower triangular with positive
/// diagonal and `0 ≤ h[i][j] < h[i][i]` for `j < i`.
pub fn hnf(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix), LatticeError> {
    let m = a.rows;
    let n = a.cols;
    if m > n {
        return Err(LatticeError::RankDeficient);
    }
    let mut h = a.clone();
    let mut u = IntMatrix::identity(n);
    for i in 0..m {
        for j in i + 1..n {
            if h[(i, j)].is_zero() {
                continue;
            }
            let p = h[(i, i)].clone();
            let q = h[(i, j)].clone();
            let eg = p.extended_gcd(&q);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let pg = &p / &g;
            let qg = &q / &g;
            // [x  -q/g; y  p/g] has determinant 1.
            h.combine_cols(i, j, &x, &y, &-&qg, &pg);
            u.combine_cols(i, j, &x, &y, &-&qg, &pg);
        }
        if h[(i, i)].is_zero() {
            return Err(LatticeError::RankDeficient);
        }
        if h[(i, i)].is_negative() {
            h.negate_col(i);
            u.negate_col(i);
        }
        let d = h[(i, i)].clone();
        for j in 0..i {
            let f = h[(i, j)].div_floor(&d);
            if !f.is_zero() {
                let nf = -f;
                h.add_col(j, i, &nf);
                u.add_col(j, i, &nf);
            }
        }
    }
    Ok((h, u))
}

/// Square basis of the lattice spanned by the columns of `a`.
pub fn hnf_basis(a: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let (h, _) = hnf(a)?;
    Ok(h.leading_columns(a.rows))
}

/// Unimodular `u` with `v·u = (g, 0, …, 0)`, `g = gcd(v) > 0`.
pub fn row_reducer(v: &[BigInt]) -> Result<(BigInt, IntMatrix), LatticeError> {
    let row = IntMatrix { rows: 1, cols: v.len(), data: v.to_vec() };
    let (h, u) = hnf(&row)?;
    Ok((h[(0, 0)].clone(), u))
}

/// Solve `a·x = b` exactly for square nonsingular `a`.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigRational>, LatticeError> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(LatticeError::Shape("solve needs a square system".into()));
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(a[(i, j)].clone())).collect();
            row.push(BigRational::from_integer(b[i].clone()));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).ok_or(LatticeError::Singular)?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &piv;
        }
        let pivot = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// A lattice given by a rational basis with common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub basis: IntMatrix,
    pub denominator: BigInt,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    /// `|det(basis)| / denominator^rank`.
    pub fn determinant(&self) -> BigRational {
        BigRational::new(self.basis.det().abs(), self.denominator.pow(self.rank() as u32))
    }
}

/// `N_G` as a lattice basis with denominator `exp_G`.
pub fn group_lattice(t: &QuotientType) -> LatticeBasis {
    let r = t.r();
    let e = t.exponent() as i64;
    let mut cols: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| if i == j { e } else { 0 }).collect()).collect();
    cols.extend(t.generators().iter().map(|g| g.iter().map(|&x| x as i64).collect()));
    let basis = hnf_basis(&IntMatrix::from_columns(r, &cols)).expect("full rank");
    LatticeBasis { basis, denominator: BigInt::from(e) }
}

/// Membership test for `N_G` against a precomputed residue table.
#[derive(Debug, Clone)]
pub struct Membership {
    exp: u64,
    residues: HashSet<Vec<u64>>,
}

impl Membership {
    pub fn new(t: &QuotientType, elements: &[GroupElement]) -> Self {
        Membership { exp: t.exponent(), residues: elements.iter().map(|g| g.delta.clone()).collect() }
    }

    pub fn build(t: &QuotientType) -> Result<Self, TypeError> {
        Ok(Self::new(t, &grouptype::enumerate_elements(t)?))
    }

    /// Is `numer / denom` in `N_G`?
    pub fn contains(&self, numer: &[i64], denom: u64) -> bool {
        let mut res = Vec::with_capacity(numer.len());
        for &x in numer {
            let scaled = x as i128 * self.exp as i128;
            if scaled % denom as i128 != 0 {
                return false;
            }
            res.push((scaled / denom as i128).rem_euclid(self.exp as i128) as u64);
        }
        self.residues.contains(&res)
    }

    /// Membership for numerators already over `exp_G`.
    pub fn contains_scaled(&self, numer: &[i64]) -> bool {
        let res: Vec<u64> = numer.iter().map(|&x| x.rem_euclid(self.exp as i64) as u64).collect();
        self.residues.contains(&res)
    }
}

/// Is the rational vector `numer / denom` a point of `N_G`?
pub fn lattice_member(numer: &[i64], denom: u64, t: &QuotientType) -> Result<bool, TypeError> {
    Ok(Membership::build(t)?.contains(numer, denom))
}

/// Integer coordinates of the junior points in a rank `r−1` lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Standardized {
    pub points: Vec<Vec<i64>>,
    /// Normalized volume of the image of the full simplex.
    pub volume: u64,
}

/// Affine bijection from `aff(𝔰_G) ∩ N_G` onto `Z^{r−1}`: translate by `−e_1`,
/// express in an HNF basis of `exp_G·N_G`, then split off the level direction
/// with a unimodular column reduction.
pub fn standardize_junior(cfg: &JuniorConfig, t: &QuotientType) -> Standardized {
    let r = t.r();
    let b = group_lattice(t).basis;
    let ones = vec![BigInt::one(); r];
    let level: Vec<BigInt> = (0..r).map(|j| (0..r).map(|i| &ones[i] * &b[(i, j)]).sum()).collect();
    let (_, u) = row_reducer(&level).expect("nonzero level form");
    let origin = &cfg.points[0];
    let points: Vec<Vec<i64>> = cfg
        .points
        .iter()
        .map(|p| {
            let y: Vec<BigInt> = p.iter().zip(origin).map(|(&a, &o)| BigInt::from(a as i64 - o as i64)).collect();
            let c = solve(&b, &y).expect("basis is nonsingular");
            let c: Vec<BigInt> = c.into_iter().map(|x| integral(&x)).collect();
            let z = solve(&u, &c).expect("unimodular");
            debug_assert!(z[0].is_zero());
            z[1..].iter().map(|x| integral(x).to_i64().expect("coordinate fits i64")).collect()
        })
        .collect();
    let d = r - 1;
    let rows: Vec<Vec<i64>> = (1..r).map(|i| (0..d).map(|k| points[i][k] - points[0][k]).collect()).collect();
    let volume = if d == 0 { 1 } else { IntMatrix::from_rows(&rows).det().abs().to_u64().expect("volume fits") };
    Standardized { points, volume }
}

fn integral(x: &BigRational) -> BigInt {
    assert!(x.is_integer(), "expected a lattice point, got {x}");
    x.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptype::{junior_config, parse_type};

    fn big(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn check_hnf(a: &IntMatrix) {
        let (h, u) = hnf(a).unwrap();
        assert_eq!(a.mul(&u), h);
        assert_eq!(u.det().abs(), BigInt::one());
        for i in 0..h.rows() {
            assert!(h[(i, i)].is_positive());
            for j in i + 1..h.cols() {
                assert!(h[(i, j)].is_zero());
            }
            for j in 0..i {
                assert!(!h[(i, j)].is_negative() && h[(i, j)] < h[(i, i)]);
            }
        }
    }

    #[test]
    fn hnf_identity() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(hnf(&i3).unwrap(), (i3.clone(), i3));
    }

    #[test]
    fn hnf_small() {
        let a = big(&[vec![2, 1], vec![0, 3]]);
        check_hnf(&a);
        let (h, _) = hnf(&a).unwrap();
        assert_eq!(h[(0, 0)], BigInt::from(1));
        assert_eq!(h[(1, 1)], BigInt::from(6));
        check_hnf(&big(&[vec![4, 6, 10], vec![3, -7, 2]]));
        check_hnf(&big(&[vec![0, 0, 5, 12], vec![1, 0, 0, 2], vec![0, 9, 3, 3]]));
    }

    #[test]
    fn hnf_rank_deficient() {
        assert_eq!(hnf(&big(&[vec![1, 2], vec![2, 4]])), Err(LatticeError::RankDeficient));
    }

    #[test]
    fn determinants() {
        assert_eq!(big(&[vec![0, 1], vec![1, 0]]).det(), BigInt::from(-1));
        assert_eq!(big(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).det(), BigInt::from(6));
    }

    #[test]
    fn group_lattice_determinant() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        assert_eq!(group_lattice(&t).determinant(), BigRational::new(1.into(), 12.into()));
        let h = parse_type("1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)").unwrap();
        assert_eq!(group_lattice(&h).determinant(), BigRational::new(1.into(), 8.into()));
    }

    #[test]
    fn membership() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        assert!(lattice_member(&[1, 2, 3, 6], 12, &t).unwrap());
        assert!(lattice_member(&[1, 0, 0, 0], 1, &t).unwrap());
        assert!(!lattice_member(&[1, 1, 1, 1], 12, &t).unwrap());
        assert!(!lattice_member(&[1, 0, 0, 0], 24, &t).unwrap());
    }

    #[test]
    fn standardization_volumes() {
        for s in ["1/12(1,2,3,6)", "1/7(1,1,2,3)", "1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)", "1/15(1,2,4,8)"] {
            let t = parse_type(s).unwrap();
            let jc = junior_config(&t).unwrap();
            let st = standardize_junior(&jc, &t);
            assert_eq!(st.points.len(), jc.len());
            assert_eq!(st.volume, t.order(), "{s}");
            let distinct: HashSet<_> = st.points.iter().collect();
            assert_eq!(distinct.len(), jc.len());
        }
    }

    #[test]
    fn standardization_of_segment() {
        let t = parse_type("1/2(1,1)").unwrap();
        let st = standardize_junior(&junior_config(&t).unwrap(), &t);
        let mut xs: Vec<i64> = st.points.iter().map(|p| p[0]).collect();
        xs.sort();
        assert_eq!(st.volume, 2);
        assert_eq!(xs.len(), 3);
        assert_eq!(xs[2] - xs[0], 2);
    }
}
