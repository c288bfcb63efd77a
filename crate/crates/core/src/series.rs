//! Singularity series with known answers: the hypersurface case, 1- and
//! 2-parameter cyclic types, and the geometric progression series, together
//! with their explicit triangulations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting;
use crate::grouptype::{self, Factor, QuotientType, TypeError};
use crate::lattice::{self, IntMatrix};
use crate::triangulate::{self, PointConfig, TriangError, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series parameters out of range: {0}")]
    Parameters(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Triang(#[from] TriangError),
    #[error("construction failed: {0}")]
    Construction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Hypersurface,
    OneParam,
    TwoParam,
    Gp,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Resolvable,
    NotResolvable,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub nu1: i64,
    pub nu2: i64,
    pub p_bar: i64,
    pub q: i64,
    pub p: i64,
    /// Partial quotients `λ_i ≥ 2` of `q/p`; empty for `p = 0`, `None` if no such expansion exists.
    pub cf: Option<Vec<i64>>,
}

/// Arithmetic of one `(a, b)` reading of a 2-parameter type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoParamTrace {
    /// Coordinates carrying the `r−2` equal weights.
    pub ones: Vec<usize>,
    pub unit: u64,
    pub a: i64,
    pub b: i64,
    pub gcd_abl: i64,
    pub t: i64,
    pub t_prime: i64,
    /// Only computed when `gcd(a,b,l) = 1`.
    pub fraction: Option<Fraction>,
    pub first_branch: bool,
    pub second_branch: bool,
    /// Second branch conditions that failed.
    pub failures: Vec<String>,
    /// Verdict recomputed with `(ν_1 + (a+r−2)/t, ν_2 + l/t)` agrees.
    pub second_solution_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    None,
    Hypersurface {
        r: u64,
        k: u64,
        cohomology: Vec<u64>,
        staircase_simplices: usize,
    },
    OneParam {
        r: u64,
        l: u64,
        unit: u64,
        residue: u64,
        divisors: u64,
        isolated: bool,
    },
    TwoParam {
        r: u64,
        l: u64,
        readings: Vec<TwoParamTrace>,
    },
    Gp {
        r: u64,
        k: u64,
        l: u64,
        unit: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMatch {
    pub kind: SeriesKind,
    pub verdict: SeriesVerdict,
    pub trace: Trace,
    pub notes: Vec<String>,
}

impl SeriesMatch {
    fn none(note: impl Into<String>) -> Self {
        SeriesMatch { kind: SeriesKind::None, verdict: SeriesVerdict::Inapplicable, trace: Trace::None, notes: vec![note.into()] }
    }

    pub fn matched(&self) -> bool {
        self.kind != SeriesKind::None
    }
}

fn mod_inverse(a: u64, l: u64) -> Option<u64> {
    let e = (a as i64).extended_gcd(&(l as i64));
    (e.gcd == 1).then(|| e.x.rem_euclid(l as i64) as u64)
}

/// `G(r;k)`: exponent `k`, order `k^{r−1}` and every generator of determinant one.
pub fn hypersurface_check(t: &QuotientType) -> SeriesMatch {
    let r = t.r() as u64;
    let k = t.exponent();
    let full = k.checked_pow(r as u32 - 1);
    let det_one = t.generators().iter().all(|g| g.iter().sum::<u64>() % k == 0);
    if !(t.is_gorenstein() && det_one && full == Some(t.order())) {
        return SeriesMatch::none("not of hypersurface type G(r;k)");
    }
    let cohomology = counting::hypersurface_cohomology(r, k).iter().map(|x| x.to_u64().expect("nonnegative")).collect();
    SeriesMatch {
        kind: SeriesKind::Hypersurface,
        verdict: SeriesVerdict::Resolvable,
        trace: Trace::Hypersurface { r, k, cohomology, staircase_simplices: k.pow(r as u32 - 1) as usize },
        notes: Vec::new(),
    }
}

/// The staircase triangulation transported to the junior configuration of `G(r;k)`.
pub fn hypersurface_witness(t: &QuotientType) -> Result<(PointConfig, Triangulation), SeriesError> {
    let Trace::Hypersurface { r, k, .. } = hypersurface_check(t).trace else {
        return Err(SeriesError::Parameters(format!("{t} is not of hypersurface type")));
    };
    let jc = grouptype::junior_config(t)?;
    let cfg = PointConfig::from_junior(t)?;
    let simplices = simplex_coordinates(r as usize - 1, k as i64)
        .into_iter()
        .map(|s| {
            s.iter()
                .map(|x| {
                    let lam: Vec<u64> = to_barycentric(x, k as i64).into_iter().map(|v| v as u64).collect();
                    jc.find(&lam).ok_or_else(|| SeriesError::Construction(format!("point {lam:?} missing")))
                })
                .collect::<Result<Vec<usize>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((cfg.clone(), Triangulation::new(&cfg, simplices)?))
}

/// `(k−x_1, x_1−x_2, …, x_{d−1}−x_d, x_d)`.
fn to_barycentric(x: &[i64], k: i64) -> Vec<i64> {
    let d = x.len();
    let mut out = Vec::with_capacity(d + 1);
    out.push(k - x.first().copied().unwrap_or(0));
    for i in 1..d {
        out.push(x[i - 1] - x[i]);
    }
    out.push(x.last().copied().unwrap_or(k));
    out
}

fn in_staircase(x: &[i64], k: i64) -> bool {
    x.first().is_none_or(|&x1| x1 <= k) && x.windows(2).all(|w| w[0] >= w[1]) && x.last().is_none_or(|&xd| xd >= 0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn staircase_points(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![0i64; d];
    loop {
        if in_staircase(&x, k) {
            out.push(x.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            x[i] += 1;
            if x[i] <= k {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Kuhn simplices `v, v+e_{π1}, v+e_{π1}+e_{π2}, …` inside `k·𝐬_d`.
fn simplex_coordinates(d: usize, k: i64) -> Vec<Vec<Vec<i64>>> {
    let perms = permutations(d);
    let mut out = Vec::new();
    for v in staircase_points(d, k) {
        for pi in &perms {
            let mut cur = v.clone();
            let mut s = vec![cur.clone()];
            for &j in pi {
                cur[j] += 1;
                s.push(cur.clone());
            }
            if s.iter().all(|p| in_staircase(p, k)) {
                out.push(s);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase {
    pub config: PointConfig,
    pub triangulation: Triangulation,
}

/// `𝐓(d;k)`: the triangulation of `k·𝐬_d` cut out by the affine `Ã_d` arrangement.
pub fn staircase_triangulation(d: usize, k: u64) -> Result<Staircase, SeriesError> {
    if d < 1 || k < 2 {
        return Err(SeriesError::Parameters(format!("need d >= 1 and k >= 2, got d = {d}, k = {k}")));
    }
    let k = k as i64;
    let points = staircase_points(d, k);
    let index: HashMap<&Vec<i64>, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let simplices: Vec<Vec<usize>> =
        simplex_coordinates(d, k).iter().map(|s| s.iter().map(|p| index[p]).collect()).collect();
    let config = PointConfig::new(points.clone())?;
    let triangulation = Triangulation::new(&config, simplices)?;
    Ok(Staircase { config, triangulation })
}

fn hvs_pair(t: &BigRational) -> BigRational {
    let a = t.abs();
    let n = a.floor().to_integer().to_i64().expect("small argument");
    (0..=n).map(|m| &a - BigRational::from_integer(m.into())).sum()
}

/// `ψ_Hvs(x) = −Σ_{0≤i<j≤d} Σ_{0≤m≤|x_j−x_i|} (|x_j−x_i| − m)` with `x_0 = 0`.
pub fn psi_hvs(x: &[BigRational]) -> BigRational {
    let mut ext = vec![BigRational::zero()];
    ext.extend(x.iter().cloned());
    let mut s = BigRational::zero();
    for i in 0..ext.len() {
        for j in i + 1..ext.len() {
            s += hvs_pair(&(&ext[j] - &ext[i]));
        }
    }
    -s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiCertificate {
    pub linear_on_cells: bool,
    pub interior_ridges: usize,
    /// Smallest drop of `ψ` below the affine extension across an interior ridge.
    pub min_ridge_gap: String,
    /// Smallest `ψ(mid) − (ψ(c_1)+ψ(c_2))/2` over barycenters of adjacent cells.
    pub min_barycenter_gap: String,
    pub strictly_convex: bool,
}

fn rational_point(p: &[i64]) -> Vec<BigRational> {
    p.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

fn barycenter(cfg: &PointConfig, s: &[usize]) -> Vec<BigRational> {
    let n = BigRational::from_integer(BigInt::from(s.len()));
    (0..cfg.dim)
        .map(|c| s.iter().map(|&i| BigRational::from_integer(cfg.points[i][c].into())).sum::<BigRational>() / &n)
        .collect()
}

/// Checks that `ψ_Hvs` is affine on each cell of `𝐓(d;k)` and strictly bends
/// downward across every interior ridge.
pub fn psi_certificate(st: &Staircase) -> PsiCertificate {
    let cfg = &st.config;
    let simplices = &st.triangulation.simplices;
    let psi_at = |i: usize| psi_hvs(&rational_point(&cfg.points[i]));
    let linear_on_cells = simplices.iter().all(|s| {
        let mean = s.iter().map(|&i| psi_at(i)).sum::<BigRational>() / BigRational::from_integer(BigInt::from(s.len()));
        psi_hvs(&barycenter(cfg, s)) == mean
    });
    let mut ridges: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (si, s) in simplices.iter().enumerate() {
        for j in 0..s.len() {
            let mut r = s.clone();
            let opp = r.remove(j);
            ridges.entry(r).or_default().push((si, opp));
        }
    }
    let mut min_ridge: Option<BigRational> = None;
    let mut min_bary: Option<BigRational> = None;
    let mut interior = 0;
    let two = BigRational::from_integer(2.into());
    for pair in ridges.values().filter(|v| v.len() == 2) {
        interior += 1;
        let (s1, _) = pair[0];
        let (s2, b) = pair[1];
        let s = &simplices[s1];
        let n = s.len();
        let mut m = IntMatrix::zeros(n, n);
        for (col, &i) in s.iter().enumerate() {
            for row in 0..cfg.dim {
                m[(row, col)] = cfg.points[i][row].into();
            }
            m[(n - 1, col)] = 1.into();
        }
        let mut rhs: Vec<BigInt> = cfg.points[b].iter().map(|&x| x.into()).collect();
        rhs.push(1.into());
        let mu = lattice::solve(&m, &rhs).expect("nonsingular simplex");
        let ext: BigRational = mu.iter().zip(s).map(|(c, &i)| c * psi_at(i)).sum();
        let gap = ext - psi_at(b);
        if min_ridge.as_ref().is_none_or(|g| &gap < g) {
            min_ridge = Some(gap);
        }
        let c1 = barycenter(cfg, &simplices[s1]);
        let c2 = barycenter(cfg, &simplices[s2]);
        let mid: Vec<BigRational> = c1.iter().zip(&c2).map(|(a, b)| (a + b) / &two).collect();
        let fd = psi_hvs(&mid) - (psi_hvs(&c1) + psi_hvs(&c2)) / &two;
        if min_bary.as_ref().is_none_or(|g| &fd < g) {
            min_bary = Some(fd);
        }
    }
    let positive = |g: &Option<BigRational>| g.as_ref().is_none_or(|g| g.is_positive());
    let show = |g: &Option<BigRational>| g.as_ref().map_or("none".to_string(), |g| g.to_string());
    PsiCertificate {
        linear_on_cells,
        interior_ridges: interior,
        strictly_convex: linear_on_cells && positive(&min_ridge) && positive(&min_bary),
        min_ridge_gap: show(&min_ridge),
        min_barycenter_gap: show(&min_bary),
    }
}

/// `1/l(1^{r−1}, l−(r−1))` after multiplying by a unit.
pub fn one_param_check(t: &QuotientType) -> SeriesMatch {
    let Some(w) = t.cyclic_weights() else {
        return SeriesMatch::none("not cyclic");
    };
    let (r, l) = (w.len() as u64, t.order());
    if r < 3 || !t.is_gorenstein() {
        return SeriesMatch::none("needs a Gorenstein cyclic type with r >= 3");
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in w {
        *counts.entry(x).or_default() += 1;
    }
    let Some((&common, _)) = counts.iter().find(|(_, &c)| c >= r - 1) else {
        return SeriesMatch::none("fewer than r-1 equal weights");
    };
    let Some(unit) = mod_inverse(common, l) else {
        return SeriesMatch::none("repeated weight is not a unit");
    };
    let rest = w.iter().map(|&x| x * unit % l).find(|&x| x != 1).unwrap_or(1);
    if (rest + r - 1) % l != 0 || rest == 0 {
        return SeriesMatch::none("normalized type is not of the form 1/l(1,...,1,l-(r-1))");
    }
    let residue = l % (r - 1);
    let resolvable = residue == 0 || residue == 1;
    SeriesMatch {
        kind: SeriesKind::OneParam,
        verdict: if resolvable { SeriesVerdict::Resolvable } else { SeriesVerdict::NotResolvable },
        trace: Trace::OneParam { r, l, unit, residue, divisors: l / (r - 1), isolated: l.gcd(&(r - 1)) == 1 },
        notes: Vec::new(),
    }
}

/// Partial quotients of `q/p`, all at least 2. `Some(vec![])` for `p = 0`.
pub fn continued_fraction_ge2(q: i64, p: i64) -> Option<Vec<i64>> {
    if p == 0 {
        return (q == 1).then(Vec::new);
    }
    let (mut a, mut b) = (q, p);
    let mut out = Vec::new();
    while b != 0 {
        out.push(a.div_euclid(b));
        (a, b) = (b, a.rem_euclid(b));
    }
    if out.len() > 1 && out.last() == Some(&1) {
        out.pop();
        *out.last_mut().unwrap() += 1;
    }
    out.iter().all(|&x| x >= 2).then_some(out)
}

fn fraction(r: i64, l: i64, a: i64, t: i64, t_prime: i64, shift: i64) -> Fraction {
    let ar = a + r - 2;
    let modulus = l / t;
    let inv = (ar / t).extended_gcd(&modulus).x.rem_euclid(modulus);
    let nu2 = if inv == 0 { modulus } else { inv } + shift * modulus;
    let nu1 = (nu2 * ar - t) / l;
    debug_assert_eq!(nu2 * ar - nu1 * l, t);
    let p_bar = (nu2 * a - nu1 * l) / t_prime;
    let q = l / (t * t_prime);
    let p = p_bar.rem_euclid(q);
    Fraction { nu1, nu2, p_bar, q, p, cf: continued_fraction_ge2(q, p) }
}

fn second_branch_failures(m: i64, t: i64, t_prime: i64, f: &Fraction) -> Vec<String> {
    let mut failures = Vec::new();
    if t.rem_euclid(m) != 1 % m || t_prime.rem_euclid(m) != 1 % m {
        failures.push(format!("t = {t}, t' = {t_prime} not both 1 mod {m}"));
    }
    let shift = (f.p - f.p_bar) / f.q;
    if shift.rem_euclid(m) != 0 {
        failures.push(format!("(p - p_bar)/q = {shift} not 0 mod {m}"));
    }
    match &f.cf {
        None => failures.push(format!("{}/{} has no continued fraction with all quotients >= 2", f.q, f.p)),
        Some(lam) => {
            let kappa = lam.len();
            for i in (2..kappa).filter(|i| i % 2 == 0) {
                if lam[i - 1].rem_euclid(m) != 0 {
                    failures.push(format!("lambda_{i} = {} not 0 mod {m}", lam[i - 1]));
                }
            }
            if kappa > 0 && kappa % 2 == 0 && lam[kappa - 1].rem_euclid(m) != 1 % m {
                failures.push(format!("lambda_{kappa} = {} not 1 mod {m}", lam[kappa - 1]));
            }
        }
    }
    failures
}

fn two_param_reading(r: i64, l: i64, a: i64, b: i64) -> TwoParamTrace {
    let m = r - 2;
    let gcd_abl = a.gcd(&b).gcd(&l);
    let t = b.gcd(&l);
    let t_prime = a.gcd(&l);
    let first_branch = gcd_abl == m;
    let (fraction, failures, second_solution_agrees) = if gcd_abl == 1 {
        let f = fraction(r, l, a, t, t_prime, 0);
        let failures = second_branch_failures(m, t, t_prime, &f);
        let alt = second_branch_failures(m, t, t_prime, &fraction(r, l, a, t, t_prime, 1));
        let agrees = failures.is_empty() == alt.is_empty();
        (Some(f), failures, agrees)
    } else {
        (None, vec![format!("gcd(a,b,l) = {gcd_abl} != 1")], true)
    };
    TwoParamTrace {
        ones: Vec::new(),
        unit: 1,
        a,
        b,
        gcd_abl,
        t,
        t_prime,
        fraction,
        first_branch,
        second_branch: failures.is_empty(),
        failures,
        second_solution_agrees,
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `1/l(1^{r−2}, a, b)` with `a + b = l − (r−2)`, decided by the continued
/// fraction conditions. Every choice of the `r−2` equal weights and both
/// orders of `(a, b)` are evaluated; the verdict is resolvable if any passes.
pub fn two_param_check(t: &QuotientType) -> SeriesMatch {
    let Some(w) = t.cyclic_weights() else {
        return SeriesMatch::none("not cyclic");
    };
    let (r, l) = (w.len(), t.order());
    if r < 3 || l < r as u64 || !t.is_gorenstein() || w.contains(&0) {
        return SeriesMatch::none("needs a Gorenstein cyclic msc type with l >= r >= 3");
    }
    let mut readings = Vec::new();
    let mut notes = Vec::new();
    let mut any = false;
    for ones in subsets(r, r - 2) {
        let common = w[ones[0]];
        if ones.iter().any(|&i| w[i] != common) {
            continue;
        }
        let Some(unit) = mod_inverse(common, l) else {
            notes.push(format!("repeated weight {common} is not a unit"));
            continue;
        };
        let rest: Vec<i64> = (0..r).filter(|i| !ones.contains(i)).map(|i| (w[i] * unit % l) as i64).collect();
        let (x, y) = (rest[0], rest[1]);
        if x + y != l as i64 - (r as i64 - 2) {
            continue;
        }
        for (a, b) in [(x, y), (y, x)] {
            let mut tr = two_param_reading(r as i64, l as i64, a, b);
            let ok = tr.first_branch || tr.second_branch;
            tr.ones = ones.clone();
            tr.unit = unit;
            any |= ok;
            if readings.iter().all(|old: &TwoParamTrace| (old.a, old.b) != (a, b) || old.ones != tr.ones) {
                readings.push(tr);
            }
        }
    }
    if readings.is_empty() {
        let mut m = SeriesMatch::none("no r-2 equal unit weights with a + b = l - (r-2)");
        m.notes.extend(notes);
        return m;
    }
    if readings.iter().any(|tr| !tr.second_solution_agrees) {
        notes.push("verdict depends on the choice of (nu1, nu2)".into());
    }
    SeriesMatch {
        kind: SeriesKind::TwoParam,
        verdict: if any { SeriesVerdict::Resolvable } else { SeriesVerdict::NotResolvable },
        trace: Trace::TwoParam { r: r as u64, l, readings },
        notes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpData {
    pub r: usize,
    pub k: u64,
    pub l: u64,
    pub quotient: QuotientType,
    /// `w_ij = [k^{i+j−2}]_l`.
    pub w: IntMatrix,
    /// `l(k−1)·W^{−1}`.
    pub w_breve: IntMatrix,
    pub det_w: BigInt,
    /// `Φ` maps the generators of `N_G` into `{Σλ ≡ 0 mod (k−1)}` with matching determinant.
    pub lattice_image_ok: bool,
}

fn gp_order(r: usize, k: u64) -> Option<u64> {
    let kr = k.checked_pow(r as u32)?;
    Some((kr - 1) / (k - 1))
}

/// `1/l(1,k,…,k^{r−1})` with `l = (k^r−1)/(k−1)` and the matrices `W`, `W̌`.
pub fn gp_construct(r: usize, k: u64) -> Result<GpData, SeriesError> {
    if r < 3 || k < 2 {
        return Err(SeriesError::Parameters(format!("need r >= 3 and k >= 2, got r = {r}, k = {k}")));
    }
    let l = gp_order(r, k).ok_or_else(|| SeriesError::Parameters("order overflows".into()))?;
    let powers: Vec<u64> = (0..r as u32).map(|i| k.pow(i) % l).collect();
    let quotient = QuotientType::new(vec![Factor { order: l, weights: powers.clone() }])?;
    let rows: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| powers[(i + j) % r] as i64).collect()).collect();
    let w = IntMatrix::from_rows(&rows);
    let ki = k as i64;
    let wb_rows: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i + j == r - 1 {
                        ki
                    } else if i + j == r || (i == 0 && j == 0) {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let w_breve = IntMatrix::from_rows(&wb_rows);
    let scale = BigInt::from(l) * BigInt::from(k - 1);
    let prod = w_breve.mul(&w);
    let inverse_ok = (0..r).all(|i| (0..r).all(|j| prod[(i, j)] == if i == j { scale.clone() } else { BigInt::zero() }));
    if !inverse_ok {
        return Err(SeriesError::Construction("W̌·W != l(k−1)·I".into()));
    }
    let det_w = w.det().abs();
    let km1 = BigInt::from(k - 1);
    let gen: Vec<BigInt> = powers.iter().map(|&x| BigInt::from(x)).collect();
    let image = w_breve.mul_vec(&gen);
    let l_big = BigInt::from(l);
    let gen_ok = image.iter().all(|x| x.is_multiple_of(&l_big))
        && image.iter().map(|x| x / &l_big).sum::<BigInt>().is_multiple_of(&km1);
    let cols_ok = (0..r).all(|j| w_breve.column(j).iter().sum::<BigInt>().is_multiple_of(&km1));
    let det_ok = w_breve.det().abs() == &l_big * &km1;
    Ok(GpData { r, k, l, quotient, w, w_breve, det_w, lattice_image_ok: gen_ok && cols_ok && det_ok })
}

/// Recognizes `1/l(1,k,…,k^{r−1})` up to a unit and a permutation of the weights.
pub fn gp_check(t: &QuotientType) -> SeriesMatch {
    let Some(w) = t.cyclic_weights() else {
        return SeriesMatch::none("not cyclic");
    };
    let (r, l) = (w.len(), t.order());
    if r < 3 {
        return SeriesMatch::none("needs r >= 3");
    }
    let mut k = 2u64;
    while let Some(lk) = gp_order(r, k) {
        if lk > l {
            break;
        }
        if lk == l {
            let mut target: Vec<u64> = (0..r as u32).map(|i| k.pow(i) % l).collect();
            target.sort_unstable();
            for &x in w {
                let Some(unit) = mod_inverse(x, l) else { continue };
                let mut scaled: Vec<u64> = w.iter().map(|&y| y * unit % l).collect();
                scaled.sort_unstable();
                if scaled == target {
                    return SeriesMatch {
                        kind: SeriesKind::Gp,
                        verdict: SeriesVerdict::Resolvable,
                        trace: Trace::Gp { r: r as u64, k, l, unit },
                        notes: Vec::new(),
                    };
                }
            }
        }
        k += 1;
    }
    SeriesMatch::none("not a geometric progression type")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpTriangulation {
    pub quotient: QuotientType,
    pub config: PointConfig,
    pub triangulation: Triangulation,
    /// The `2^r − 1` cells `𝐬(ε)` before refining the face `conv(u_j)`.
    pub coarse_cells: Vec<Vec<usize>>,
}

/// `u_j = (k−1)e_j`, `w̌_1 = −e_1 + k e_r`, `w̌_j = −e_j + k e_{j−1}`.
fn gp_vertices(r: usize, k: i64) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let u = (0..r)
        .map(|j| {
            let mut v = vec![0; r];
            v[j] = k - 1;
            v
        })
        .collect();
    let wb = (0..r)
        .map(|j| {
            let mut v = vec![0; r];
            v[j] = -1;
            v[if j == 0 { r - 1 } else { j - 1 }] = k;
            v
        })
        .collect();
    (u, wb)
}

/// The basic triangulation of `𝔰_G` for `GP(r;k)`: each cell `𝐬(ε)` is the join
/// of `{w̌_j : ε_j = 0}` with the staircase triangulation of the face
/// `conv{u_j : ε_j = 1}`.
pub fn gp_triangulation(r: usize, k: u64) -> Result<GpTriangulation, SeriesError> {
    let gp = gp_construct(r, k)?;
    let jc = grouptype::junior_config(&gp.quotient)?;
    let config = PointConfig::from_junior(&gp.quotient)?;
    let ki = k as i64;
    let (u, wb) = gp_vertices(r, ki);
    let scale = BigInt::from(k - 1);
    let locate = |lam: &[i64]| -> Result<usize, SeriesError> {
        let v: Vec<BigInt> = lam.iter().map(|&x| BigInt::from(x)).collect();
        let numer: Vec<u64> = gp
            .w
            .mul_vec(&v)
            .iter()
            .map(|x| {
                debug_assert!(x.is_multiple_of(&scale));
                (x / &scale).to_u64().expect("nonnegative numerator")
            })
            .collect();
        jc.find(&numer).ok_or_else(|| SeriesError::Construction(format!("no junior point {numer:?}")))
    };
    let cells: Vec<Vec<Vec<i64>>> = if k == 2 {
        vec![u.clone()]
    } else {
        simplex_coordinates(r - 1, ki - 1).iter().map(|s| s.iter().map(|x| to_barycentric(x, ki - 1)).collect()).collect()
    };
    let mut simplices = BTreeSet::new();
    let mut coarse_cells = Vec::new();
    for mask in 1u32..(1 << r) {
        let on: Vec<usize> = (0..r).filter(|&j| mask >> j & 1 == 1).collect();
        let mut coarse: Vec<usize> =
            (0..r).map(|j| if mask >> j & 1 == 1 { locate(&u[j]) } else { locate(&wb[j]) }).collect::<Result<_, _>>()?;
        coarse.sort_unstable();
        coarse_cells.push(coarse);
        let outer: Vec<usize> = (0..r).filter(|&j| mask >> j & 1 == 0).map(|j| locate(&wb[j])).collect::<Result<_, _>>()?;
        for cell in &cells {
            let face: Vec<&Vec<i64>> =
                cell.iter().filter(|p| (0..r).all(|j| on.contains(&j) || p[j] == 0)).collect();
            if face.len() != on.len() {
                continue;
            }
            let mut s: Vec<usize> = face.iter().map(|p| locate(p)).collect::<Result<_, _>>()?;
            s.extend(&outer);
            s.sort_unstable();
            simplices.insert(s);
        }
    }
    let triangulation = Triangulation::new(&config, simplices.into_iter().collect())?;
    if triangulation.total_volume() != config.volume {
        return Err(SeriesError::Construction("cells do not cover the junior simplex".into()));
    }
    Ok(GpTriangulation { quotient: gp.quotient, config, triangulation, coarse_cells })
}

/// Every recognizer that matches.
pub fn classify(t: &QuotientType) -> Vec<SeriesMatch> {
    [hypersurface_check(t), one_param_check(t), two_param_check(t), gp_check(t)]
        .into_iter()
        .filter(SeriesMatch::matched)
        .collect()
}

/// Validity of a triangulation built by this module, for audits.
pub fn audit(cfg: &PointConfig, t: &Triangulation) -> bool {
    t.total_volume() == cfg.volume && triangulate::basicness(t).is_basic
}
