//! Singularity types, group elements, ages and heights.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, IntMatrix};

/// Default cap on the number of index tuples walked while enumerating a group.
pub const DEFAULT_ELEMENT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("factor {index} has {got} weights, expected {expected}")]
    MismatchedDimension { index: usize, expected: usize, got: usize },
    #[error("factor order {0} is smaller than 2")]
    OrderTooSmall(u64),
    #[error("factor 1/{order}({weights}) is not faithful")]
    NotFaithful { order: u64, weights: String },
    #[error("duplicate factor 1/{0}(...)")]
    DuplicateFactor(u64),
    #[error("dimension must be at least 2")]
    DimensionTooSmall,
    #[error("{factors} factors exceed the admissible maximum {max}")]
    TooManyFactors { factors: usize, max: u64 },
    #[error("type is not Gorenstein")]
    NotGorenstein,
    #[error("element budget exceeded: {needed} > {budget}")]
    Budget { needed: u64, budget: u64 },
}

/// One cyclic factor `1/q(α_1,…,α_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub order: u64,
    pub weights: Vec<u64>,
}

impl Factor {
    pub fn is_gorenstein(&self) -> bool {
        self.weights.iter().sum::<u64>() % self.order == 0
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}({})", self.order, join(&self.weights))
    }
}

/// An abelian quotient type: a finite subgroup of the diagonal torus given by
/// cyclic generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct QuotientType {
    r: usize,
    factors: Vec<Factor>,
    exp: u64,
    order: u64,
    generators: Vec<Vec<u64>>,
}

impl QuotientType {
    pub fn new(factors: Vec<Factor>) -> Result<Self, TypeError> {
        let Some(first) = factors.first() else {
            return Err(TypeError::Syntax { pos: 0, msg: "no factor".into() });
        };
        let r = first.weights.len();
        if r < 2 {
            return Err(TypeError::DimensionTooSmall);
        }
        let mut canonical: Vec<Factor> = Vec::with_capacity(factors.len());
        for (index, f) in factors.into_iter().enumerate() {
            if f.weights.len() != r {
                return Err(TypeError::MismatchedDimension { index, expected: r, got: f.weights.len() });
            }
            if f.order < 2 {
                return Err(TypeError::OrderTooSmall(f.order));
            }
            let weights: Vec<u64> = f.weights.iter().map(|w| w % f.order).collect();
            let g = weights.iter().fold(f.order, |g, &w| g.gcd(&w));
            if g != 1 {
                return Err(TypeError::NotFaithful { order: f.order, weights: join(&weights) });
            }
            let f = Factor { order: f.order, weights };
            if canonical.contains(&f) {
                return Err(TypeError::DuplicateFactor(f.order));
            }
            canonical.push(f);
        }
        let exp = canonical.iter().fold(1u64, |e, f| e.lcm(&f.order));
        let generators: Vec<Vec<u64>> = canonical
            .iter()
            .map(|f| f.weights.iter().map(|w| (w * (exp / f.order)) % exp).collect())
            .collect();
        let order = subgroup_order(r, exp, &generators);
        let max = (r as u64 - 1).min(order / 2).max(1);
        if canonical.len() as u64 > max {
            return Err(TypeError::TooManyFactors { factors: canonical.len(), max });
        }
        Ok(QuotientType { r, factors: canonical, exp, order, generators })
    }

    /// Cyclic type `1/l(weights)`.
    pub fn cyclic(l: u64, weights: &[u64]) -> Result<Self, TypeError> {
        Self::new(vec![Factor { order: l, weights: weights.to_vec() }])
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Exponent of the group, the lcm of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.exp
    }

    /// Group order `l`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Factor generators as residue vectors with denominator `exponent()`.
    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_gorenstein(&self) -> bool {
        self.factors.iter().all(Factor::is_gorenstein)
    }

    /// Weights of the single factor of a cyclic type.
    pub fn cyclic_weights(&self) -> Option<&[u64]> {
        self.is_cyclic().then(|| self.factors[0].weights.as_slice())
    }

    /// Number of index tuples walked by `enumerate_elements`.
    pub fn index_space(&self) -> u64 {
        self.factors.iter().fold(1u64, |p, f| p.saturating_mul(f.order))
    }
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for QuotientType {
    type Err = TypeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

impl TryFrom<String> for QuotientType {
    type Error = TypeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_type(&s)
    }
}

impl From<QuotientType> for String {
    fn from(t: QuotientType) -> String {
        t.to_string()
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn subgroup_order(r: usize, exp: u64, generators: &[Vec<u64>]) -> u64 {
    let mut cols: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { exp as i64 } else { 0 }).collect())
        .collect();
    cols.extend(generators.iter().map(|g| g.iter().map(|&x| x as i64).collect()));
    let m = IntMatrix::from_columns(r, &cols);
    let basis = lattice::hnf_basis(&m).expect("generator matrix has full rank");
    let det = basis.det().magnitude().clone();
    let full = num_bigint::BigUint::from(exp).pow(r as u32);
    let order = full / det;
    u64::try_from(order).expect("group order fits in u64")
}

/// Parse `1/q(a,b,...)x1/q'(...)x...`. Whitespace is ignored.
pub fn parse_type(text: &str) -> Result<QuotientType, TypeError> {
    let cleaned: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { s: &cleaned, i: 0 };
    let mut factors = vec![p.factor()?];
    while p.peek().is_some() {
        p.expect(&['x', 'X', '*', '×'])?;
        factors.push(p.factor()?);
    }
    QuotientType::new(factors)
}

struct Parser<'a> {
    s: &'a [(usize, char)],
    i: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.s.get(self.i).map_or_else(|| self.s.last().map_or(0, |&(p, c)| p + c.len_utf8()), |&(p, _)| p)
    }

    fn err(&self, msg: impl Into<String>) -> TypeError {
        TypeError::Syntax { pos: self.pos(), msg: msg.into() }
    }

    fn expect(&mut self, set: &[char]) -> Result<(), TypeError> {
        match self.peek() {
            Some(c) if set.contains(&c) => {
                self.i += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected {:?}, found {c:?}", set[0]))),
            None => Err(self.err(format!("expected {:?}, found end of input", set[0]))),
        }
    }

    fn int(&mut self) -> Result<u64, TypeError> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected integer"));
        }
        let digits: String = self.s[start..self.i].iter().map(|&(_, c)| c).collect();
        digits.parse().map_err(|_| TypeError::Syntax { pos: self.s[start].0, msg: "integer overflow".into() })
    }

    fn factor(&mut self) -> Result<Factor, TypeError> {
        self.expect(&['1'])?;
        self.expect(&['/'])?;
        let order = self.int()?;
        self.expect(&['('])?;
        let mut weights = vec![self.int()?];
        while self.peek() == Some(',') {
            self.i += 1;
            weights.push(self.int()?);
        }
        self.expect(&[')'])?;
        Ok(Factor { order, weights })
    }
}

/// A group element in residue form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    /// Factor exponents `(j_1,…,j_κ)`.
    pub index: Vec<u64>,
    /// Residues `δ_i` with denominator `exp`.
    pub delta: Vec<u64>,
    pub exp: u64,
}

impl GroupElement {
    pub fn level(&self) -> u64 {
        self.delta.iter().sum()
    }

    /// `Σδ_i / exp`, exact for Gorenstein types.
    pub fn age(&self) -> u32 {
        (self.level() / self.exp) as u32
    }

    pub fn has_integral_age(&self) -> bool {
        self.level().is_multiple_of(self.exp)
    }

    pub fn height(&self) -> u32 {
        self.delta.iter().filter(|&&d| d != 0).count() as u32
    }

    /// Coordinates with nonzero residue.
    pub fn support(&self) -> Vec<usize> {
        self.delta.iter().enumerate().filter(|(_, &d)| d != 0).map(|(i, _)| i).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.delta.iter().all(|&d| d == 0)
    }
}

fn element_at(t: &QuotientType, index: &[u64]) -> GroupElement {
    let exp = t.exp;
    let mut delta = vec![0u64; t.r];
    for (j, g) in index.iter().zip(&t.generators) {
        for (d, &x) in delta.iter_mut().zip(g) {
            *d = (*d + (j % exp) * x) % exp;
        }
    }
    GroupElement { index: index.to_vec(), delta, exp }
}

/// All `l` elements, in lexicographic order of their first index tuple.
pub fn enumerate_elements(t: &QuotientType) -> Result<Vec<GroupElement>, TypeError> {
    enumerate_elements_with_budget(t, DEFAULT_ELEMENT_BUDGET)
}

pub fn enumerate_elements_with_budget(t: &QuotientType, budget: u64) -> Result<Vec<GroupElement>, TypeError> {
    let needed = t.index_space();
    if needed > budget {
        return Err(TypeError::Budget { needed, budget });
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(t.order as usize);
    let mut out = Vec::with_capacity(t.order as usize);
    let mut index = vec![0u64; t.factors.len()];
    loop {
        let g = element_at(t, &index);
        if seen.insert(g.delta.clone()) {
            out.push(g);
        }
        let mut k = index.len();
        loop {
            if k == 0 {
                debug_assert_eq!(out.len() as u64, t.order);
                return Ok(out);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < t.factors[k].order {
                break;
            }
            index[k] = 0;
        }
    }
}

/// The group inverse.
pub fn inverse(t: &QuotientType, g: &GroupElement) -> GroupElement {
    let index: Vec<u64> = g.index.iter().zip(&t.factors).map(|(&j, f)| (f.order - j % f.order) % f.order).collect();
    let delta = g.delta.iter().map(|&d| (g.exp - d) % g.exp).collect();
    GroupElement { index, delta, exp: g.exp }
}

/// Where a configuration point sits on the junior simplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Vertex(usize),
    Junior { index: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointLabel {
    pub kind: PointKind,
    /// Vertices of the smallest face containing the point in its relative interior.
    pub carrier: Vec<usize>,
}

/// Lattice points of the junior simplex, as residue numerators over `exp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JuniorConfig {
    pub r: usize,
    pub exp: u64,
    pub points: Vec<Vec<u64>>,
    pub labels: Vec<PointLabel>,
}

impl JuniorConfig {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point with the given numerators.
    pub fn find(&self, numer: &[u64]) -> Option<usize> {
        self.points.iter().position(|p| p == numer)
    }
}

/// Vertices `e_1..e_r` followed by the age-one elements.
pub fn junior_config(t: &QuotientType) -> Result<JuniorConfig, TypeError> {
    let elements = enumerate_elements(t)?;
    junior_config_from(t, &elements)
}

pub fn junior_config_from(t: &QuotientType, elements: &[GroupElement]) -> Result<JuniorConfig, TypeError> {
    if !t.is_gorenstein() {
        return Err(TypeError::NotGorenstein);
    }
    let r = t.r;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for i in 0..r {
        let mut p = vec![0u64; r];
        p[i] = t.exp;
        points.push(p);
        labels.push(PointLabel { kind: PointKind::Vertex(i), carrier: vec![i] });
    }
    for g in elements.iter().filter(|g| !g.is_identity() && g.age() == 1) {
        points.push(g.delta.clone());
        labels.push(PointLabel { kind: PointKind::Junior { index: g.index.clone() }, carrier: g.support() });
    }
    Ok(JuniorConfig { r, exp: t.exp, points, labels })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub is_gorenstein: bool,
    pub splitting_codim: usize,
    pub is_msc: bool,
    pub is_isolated: bool,
    /// Element counts for ages `1..=r−1`.
    pub age_histogram: Vec<u64>,
    /// Coordinates on which every element acts trivially.
    pub fixed_coordinates: Vec<usize>,
}

pub fn structure_report(t: &QuotientType) -> Result<StructureReport, TypeError> {
    let elements = enumerate_elements(t)?;
    Ok(structure_report_from(t, &elements))
}

pub fn structure_report_from(t: &QuotientType, elements: &[GroupElement]) -> StructureReport {
    let r = t.r;
    let fixed_coordinates: Vec<usize> = (0..r).filter(|&i| elements.iter().all(|g| g.delta[i] == 0)).collect();
    let splitting_codim = r - fixed_coordinates.len();
    let is_isolated = elements.iter().all(|g| g.is_identity() || g.height() as usize == r);
    let mut age_histogram = vec![0u64; r.saturating_sub(1)];
    for g in elements.iter().filter(|g| !g.is_identity()) {
        let a = g.age() as usize;
        if g.has_integral_age() && (1..r).contains(&a) {
            age_histogram[a - 1] += 1;
        }
    }
    StructureReport {
        is_gorenstein: t.is_gorenstein(),
        splitting_codim,
        is_msc: splitting_codim == r,
        is_isolated,
        age_histogram,
        fixed_coordinates,
    }
}

/// Drop the coordinates fixed by the whole group. Returns `None` when nothing is fixed.
pub fn msc_reduction(t: &QuotientType, fixed: &[usize]) -> Option<Result<QuotientType, TypeError>> {
    if fixed.is_empty() {
        return None;
    }
    let mut factors: Vec<Factor> = Vec::new();
    for f in &t.factors {
        let weights: Vec<u64> = f.weights.iter().enumerate().filter(|(i, _)| !fixed.contains(i)).map(|(_, &w)| w).collect();
        let reduced = Factor { order: f.order, weights };
        if !factors.contains(&reduced) {
            factors.push(reduced);
        }
    }
    Some(QuotientType::new(factors))
}

/// Counts of non-identity elements keyed by `(age, height)`.
pub fn age_height_counts(elements: &[GroupElement]) -> BTreeMap<(u32, u32), u64> {
    let mut m = BTreeMap::new();
    for g in elements.iter().filter(|g| !g.is_identity()) {
        *m.entry((g.age(), g.height())).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cyclic_and_products() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        assert_eq!((t.r(), t.order(), t.exponent()), (4, 12, 12));
        assert!(t.is_cyclic() && t.is_gorenstein());
        let h = parse_type("1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)").unwrap();
        assert_eq!((h.r(), h.order(), h.exponent(), h.factors().len()), (4, 8, 2, 3));
        assert_eq!(h.to_string(), "1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_type("1/1(0,0)"), Err(TypeError::OrderTooSmall(1)));
        assert!(matches!(parse_type("1/4(2,2)"), Err(TypeError::NotFaithful { .. })));
        assert!(matches!(parse_type("1/4(1,3)x1/4(1,3,0)"), Err(TypeError::MismatchedDimension { .. })));
        assert!(matches!(parse_type("1/4(1,3"), Err(TypeError::Syntax { .. })));
        assert!(matches!(parse_type("2/4(1,3)"), Err(TypeError::Syntax { .. })));
        assert!(matches!(parse_type("1/5(1,4)x1/5(1,4)"), Err(TypeError::DuplicateFactor(5))));
        assert!(matches!(parse_type("1/3(1,2,0)x1/3(0,1,2)x1/3(1,0,2)"), Err(TypeError::TooManyFactors { .. })));
    }

    #[test]
    fn weights_reduce_mod_order() {
        let t = parse_type("1/5(6,9)").unwrap();
        assert_eq!(t.factors()[0].weights, vec![1, 4]);
    }

    #[test]
    fn overlapping_factors_give_subgroup_order() {
        let t = parse_type("1/4(1,3,0,0)x1/2(1,1,0,0)").unwrap();
        assert_eq!(t.order(), 4);
        assert_eq!(enumerate_elements(&t).unwrap().len(), 4);
    }

    #[test]
    fn gorenstein_flag() {
        assert!(parse_type("1/7(1,1,2,3)").unwrap().is_gorenstein());
        assert!(!parse_type("1/5(1,1,1,1)").unwrap().is_gorenstein());
    }

    #[test]
    fn element_table_entries() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        let el = enumerate_elements(&t).unwrap();
        assert_eq!(el[3].delta, vec![3, 6, 9, 6]);
        assert_eq!((el[3].age(), el[3].height()), (2, 4));
        assert_eq!(el[6].delta, vec![6, 0, 6, 0]);
        assert_eq!((el[6].age(), el[6].height()), (1, 2));
        assert!(el[0].is_identity() && el[0].age() == 0);
    }

    #[test]
    fn junior_configs() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        let jc = junior_config(&t).unwrap();
        assert_eq!(jc.len(), 9);
        let lambdas: Vec<u64> = jc.labels[4..]
            .iter()
            .map(|l| match &l.kind {
                PointKind::Junior { index } => index[0],
                PointKind::Vertex(_) => unreachable!(),
            })
            .collect();
        assert_eq!(lambdas, vec![1, 2, 4, 6, 8]);
        assert_eq!(junior_config(&parse_type("1/7(1,1,2,3)").unwrap()).unwrap().len(), 5);
        let h = junior_config(&parse_type("1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)").unwrap()).unwrap();
        assert_eq!(h.len(), 10);
        assert!(h.labels[4..].iter().all(|l| l.carrier.len() == 2));
        assert_eq!(junior_config(&parse_type("1/5(1,1,1,1)").unwrap()), Err(TypeError::NotGorenstein));
    }

    #[test]
    fn structure_reports() {
        let s = structure_report(&parse_type("1/12(1,2,3,6)").unwrap()).unwrap();
        assert!(s.is_msc && !s.is_isolated);
        assert_eq!(s.age_histogram, vec![5, 5, 1]);
        let s = structure_report(&parse_type("1/15(1,2,4,8)").unwrap()).unwrap();
        assert!(s.is_msc && s.is_isolated);
        let s = structure_report(&parse_type("1/2(1,1,0,0)").unwrap()).unwrap();
        assert_eq!(s.splitting_codim, 2);
        assert!(!s.is_msc);
        assert_eq!(s.fixed_coordinates, vec![2, 3]);
    }

    #[test]
    fn inverses() {
        let t = parse_type("1/12(1,2,3,6)").unwrap();
        let el = enumerate_elements(&t).unwrap();
        let inv = inverse(&t, &el[1]);
        assert_eq!(inv, el[11]);
        assert_eq!((inv.age(), inv.height()), (3, 4));
        assert_eq!(inverse(&t, &el[0]), el[0]);
        let t = parse_type("1/9(1,2,3,3)").unwrap();
        let el = enumerate_elements(&t).unwrap();
        let inv = inverse(&t, &el[3]);
        assert_eq!(inv, el[6]);
        assert_eq!((el[3].age(), inv.age(), inv.height()), (1, 1, 2));
    }

    #[test]
    fn msc_reduction_drops_fixed_coordinates() {
        let t = parse_type("1/6(1,2,3,0)").unwrap();
        let s = structure_report(&t).unwrap();
        let red = msc_reduction(&t, &s.fixed_coordinates).unwrap().unwrap();
        assert_eq!(red.to_string(), "1/6(1,2,3)");
    }

    #[test]
    fn budget_is_enforced() {
        let t = parse_type("1/1000(1,999)").unwrap();
        assert!(matches!(enumerate_elements_with_budget(&t, 10), Err(TypeError::Budget { .. })));
    }

    #[test]
    fn serde_round_trip() {
        let t = parse_type("1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)").unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: QuotientType = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
