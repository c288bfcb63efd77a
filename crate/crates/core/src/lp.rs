//! Exact simplex method with Bland's rule on a fraction-free integer tableau.
//!
//! The tableau stores integers `T` together with a positive common
//! denominator `D`; the represented tableau is `T / D`. Each pivot divides
//! exactly by the previous pivot element. Arithmetic runs in checked `i128`
//! first and is redone over `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<BigRational>,
    /// Objective value when optimal; total infeasibility when infeasible.
    pub value: BigRational,
    /// Phase-one row multipliers `π` with `πᵀA ≤ 0` and `πᵀb > 0`, when infeasible.
    pub farkas: Vec<BigRational>,
    pub pivots: usize,
}

trait Exact: Clone + Sized {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn sign(&self) -> i32;
    fn nil() -> Self;
}

impl Exact for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i32 {
        i128::signum(*self) as i32
    }
    fn nil() -> Self {
        0
    }
}

impl Exact for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn nil() -> Self {
        BigInt::zero()
    }
}

struct Tableau<N> {
    /// `m` constraint rows followed by the objective row.
    rows: Vec<Vec<N>>,
    basis: Vec<usize>,
    den: N,
    cols: usize,
    pivots: usize,
}

impl<N: Exact> Tableau<N> {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let p = self.rows[r][c].clone();
        debug_assert!(p.sign() > 0);
        let pivot_row = self.rows[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                let a = x.mul(&p)?;
                let v = if f.sign() == 0 || y.sign() == 0 { a } else { a.sub(&f.mul(y)?)? };
                *x = v.div_exact(&self.den);
            }
        }
        self.den = p;
        self.basis[r] = c;
        self.pivots += 1;
        Some(())
    }

    /// Minimize the objective row over allowed columns; `Some(false)` if unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> Option<bool> {
        let m = self.m();
        loop {
            let obj = &self.rows[m];
            let Some(enter) = (0..self.cols).find(|&j| allowed[j] && obj[j].sign() < 0) else {
                return Some(true);
            };
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if self.rows[i][enter].sign() <= 0 {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let lhs = self.rows[i][self.cols].mul(&self.rows[l][enter])?;
                        let rhs = self.rows[l][self.cols].mul(&self.rows[i][enter])?;
                        let cmp = lhs.sub(&rhs)?.sign();
                        if cmp < 0 || (cmp == 0 && self.basis[i] < self.basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
            match leave {
                Some(r) => self.pivot(r, enter)?,
                None => return Some(false),
            }
        }
    }

    fn ratio(&self, x: &N) -> BigRational {
        BigRational::new(x.to_big(), self.den.to_big())
    }
}

/// Integer rows scaled from rational input.
fn integral_problem(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> (Vec<BigInt>, Vec<Vec<BigInt>>, Vec<BigInt>) {
    let scale = |v: &mut dyn Iterator<Item = &BigRational>| v.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let to_int = |x: &BigRational, s: &BigInt| (x * BigRational::from_integer(s.clone())).to_integer();
    let sc = scale(&mut c.iter());
    let ci = c.iter().map(|x| to_int(x, &sc)).collect();
    let mut ai = Vec::with_capacity(a.len());
    let mut bi = Vec::with_capacity(a.len());
    for (row, rhs) in a.iter().zip(b) {
        let s = scale(&mut row.iter().chain(std::iter::once(rhs)));
        ai.push(row.iter().map(|x| to_int(x, &s)).collect());
        bi.push(to_int(rhs, &s));
    }
    (ci, ai, bi)
}

fn solve<N: Exact>(c: &[BigInt], a: &[Vec<BigInt>], b: &[BigInt]) -> Option<LpSolution> {
    let m = a.len();
    let n = c.len();
    let cols = n + m;
    let conv = |x: &BigInt| N::from_big(x);
    let mut rows: Vec<Vec<N>> = Vec::with_capacity(m + 1);
    let mut obj: Vec<BigInt> = vec![BigInt::zero(); cols + 1];
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "constraint width");
        let neg = b[i].is_negative();
        let mut t = Vec::with_capacity(cols + 1);
        for (j, x) in row.iter().enumerate() {
            let v = if neg { -x } else { x.clone() };
            obj[j] -= &v;
            t.push(conv(&v)?);
        }
        t.extend((0..m).map(|k| if k == i { conv(&BigInt::one()) } else { Some(N::nil()) }).collect::<Option<Vec<N>>>()?);
        let rhs = b[i].abs();
        obj[cols] -= &rhs;
        t.push(conv(&rhs)?);
        rows.push(t);
    }
    rows.push(obj.iter().map(conv).collect::<Option<Vec<N>>>()?);
    let mut tab = Tableau { rows, basis: (n..cols).collect(), den: conv(&BigInt::one())?, cols, pivots: 0 };
    tab.optimize(&vec![true; cols])?;
    let infeasibility = -tab.ratio(&tab.rows[m][cols]);
    if infeasibility.is_positive() {
        let farkas = (0..m)
            .map(|i| {
                let pi = BigRational::one() - tab.ratio(&tab.rows[m][n + i]);
                if b[i].is_negative() {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        return Some(LpSolution { status: LpStatus::Infeasible, x: vec![], value: infeasibility, farkas, pivots: tab.pivots });
    }
    // Drive zero-level artificials out of the basis where possible.
    for i in 0..m {
        if tab.basis[i] < n {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| tab.rows[i][j].sign() != 0) {
            if tab.rows[i][j].sign() < 0 {
                for x in tab.rows[i].iter_mut() {
                    *x = N::nil().sub(x)?;
                }
            }
            tab.pivot(i, j)?;
        }
    }
    let cost: Vec<N> = c.iter().map(conv).collect::<Option<Vec<N>>>()?;
    let mut obj = Vec::with_capacity(cols + 1);
    for j in 0..=cols {
        let mut v = if j < n { cost[j].mul(&tab.den)? } else { N::nil() };
        for i in 0..m {
            let bj = tab.basis[i];
            if bj < n && cost[bj].sign() != 0 {
                v = v.sub(&cost[bj].mul(&tab.rows[i][j])?)?;
            }
        }
        obj.push(v);
    }
    tab.rows[m] = obj;
    let allowed: Vec<bool> = (0..cols).map(|j| j < n).collect();
    if !tab.optimize(&allowed)? {
        return Some(LpSolution { status: LpStatus::Unbounded, x: vec![], value: BigRational::zero(), farkas: vec![], pivots: tab.pivots });
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.ratio(&tab.rows[i][cols]);
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * BigRational::from_integer(ci.clone())).sum();
    Some(LpSolution { status: LpStatus::Optimal, x, value, farkas: vec![], pivots: tab.pivots })
}

fn solve_integral(c: &[BigInt], a: &[Vec<BigInt>], b: &[BigInt]) -> LpSolution {
    solve::<i128>(c, a, b).unwrap_or_else(|| solve::<BigInt>(c, a, b).expect("bigint arithmetic cannot overflow"))
}

/// Minimize `c·x` subject to `a·x = b`, `x ≥ 0`.
pub fn minimize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpSolution {
    let (ci, ai, bi) = integral_problem(c, a, b);
    let mut sol = solve_integral(&ci, &ai, &bi);
    if sol.status == LpStatus::Optimal {
        sol.value = sol.x.iter().zip(c).map(|(x, c)| x * c).sum();
    }
    sol
}

/// Outcome of searching for `w` with `A·w ≥ 1` componentwise, `w` free.
#[derive(Debug, Clone)]
pub enum Strict {
    Feasible(Vec<BigRational>),
    /// `y ≥ 0`, `yᵀA = 0`, `Σy = 1`.
    Infeasible(Vec<BigRational>),
}

/// Solve `A·w ≥ 1` through its Farkas alternative `yᵀA = 0, Σy = 1, y ≥ 0`:
/// when the alternative is infeasible its phase-one multipliers yield `w`.
pub fn strict_feasibility(a: &[Vec<BigInt>], n: usize) -> Strict {
    let m = a.len();
    if m == 0 {
        return Strict::Feasible(vec![BigRational::zero(); n]);
    }
    let mut rows: Vec<Vec<BigInt>> = (0..n).map(|k| a.iter().map(|row| row[k].clone()).collect()).collect();
    rows.push(vec![BigInt::one(); m]);
    let mut rhs = vec![BigInt::zero(); n];
    rhs.push(BigInt::one());
    let sol = solve_integral(&vec![BigInt::zero(); m], &rows, &rhs);
    match sol.status {
        LpStatus::Infeasible => {
            let pi0 = sol.farkas[n].clone();
            debug_assert!(pi0.is_positive());
            Strict::Feasible(sol.farkas[..n].iter().map(|p| -p / &pi0).collect())
        }
        _ => Strict::Infeasible(sol.x),
    }
}
