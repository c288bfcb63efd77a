//! The five-step decision procedure, ordered by cost: hypersurface pattern,
//! special series, the upper bound test, the Hilbert basis test and finally a
//! census of coherent maximal triangulations.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::criteria::{self, CriteriaError, Variant};
use crate::grouptype::{self, QuotientType, TypeError};
use crate::hilbert;
use crate::counting::CountError;
use crate::series::{self, SeriesError, SeriesKind, SeriesVerdict};
use crate::triangulate::{self, ExploreOptions, Filter, PointConfig, TriangError, Triangulation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("type is not Gorenstein")]
    NotGorenstein,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl PipelineError {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Invalid(_) => 64,
            PipelineError::NotGorenstein => 65,
            PipelineError::Budget(_) => 70,
            PipelineError::Internal(_) => 70,
        }
    }
}

impl From<TypeError> for PipelineError {
    fn from(e: TypeError) -> Self {
        match e {
            TypeError::NotGorenstein => PipelineError::NotGorenstein,
            TypeError::Budget { .. } => PipelineError::Budget(e.to_string()),
            other => PipelineError::Invalid(other.to_string()),
        }
    }
}

impl From<CountError> for PipelineError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::Type(t) => t.into(),
            CountError::NotGorenstein => PipelineError::NotGorenstein,
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

impl From<CriteriaError> for PipelineError {
    fn from(e: CriteriaError) -> Self {
        match e {
            CriteriaError::Count(c) => c.into(),
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

impl From<TriangError> for PipelineError {
    fn from(e: TriangError) -> Self {
        match e {
            TriangError::Type(t) => t.into(),
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

impl From<SeriesError> for PipelineError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Type(t) => t.into(),
            SeriesError::Triang(t) => t.into(),
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Node cap for the flip-graph search.
    pub nodes: usize,
    /// Cap on index tuples walked while enumerating the group.
    pub elements: u64,
    pub seed_orders: usize,
    /// Run the census even after an earlier step decided, to produce a witness.
    pub witness: bool,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { nodes: 100_000, elements: grouptype::DEFAULT_ELEMENT_BUDGET, seed_orders: 0, witness: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Resolvable,
    NotResolvable,
    Inconclusive,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Resolvable,
    NotResolvable,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub id: u8,
    pub name: String,
    pub outcome: Outcome,
    /// Ran after an earlier step decided; does not affect the verdict.
    pub audit: bool,
    pub summary: String,
    pub payload: Value,
}

/// A basic coherent triangulation with its point table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub exp: u64,
    /// Junior points as numerators over `exp`.
    pub numerators: Vec<Vec<u64>>,
    /// The same points in standardized integer coordinates.
    pub coordinates: Vec<Vec<i64>>,
    pub simplices: Vec<Vec<usize>>,
    pub coherent: bool,
    pub basic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetsUsed {
    pub elements: u64,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub schema_version: u32,
    pub input: String,
    /// The msc core the steps ran on, when coordinates were dropped.
    pub reduced: Option<String>,
    pub steps: Vec<StepRecord>,
    pub verdict: Verdict,
    /// Step that decided; `None` for the `r ≤ 3` rule or when undecided.
    pub decided_at: Option<u8>,
    pub witness: Option<Witness>,
    pub budgets: Budgets,
    pub budgets_used: BudgetsUsed,
    pub notes: Vec<String>,
}

impl DecisionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

const NAMES: [&str; 5] = ["hypersurface", "series", "upper_bound", "hilbert_basis", "triangulation_census"];

fn record(id: u8, outcome: Outcome, audit: bool, summary: impl Into<String>, payload: Value) -> StepRecord {
    StepRecord { id, name: NAMES[id as usize - 1].into(), outcome, audit, summary: summary.into(), payload }
}

fn skipped(id: u8, why: &str) -> StepRecord {
    record(id, Outcome::Skipped, false, why, Value::Null)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("payload serializes")
}

fn witness_from(t: &QuotientType, cfg: &PointConfig, tri: &Triangulation) -> Result<Witness, PipelineError> {
    let jc = grouptype::junior_config(t)?;
    Ok(Witness {
        exp: jc.exp,
        numerators: jc.points,
        coordinates: cfg.points.clone(),
        simplices: tri.simplices.clone(),
        coherent: triangulate::is_coherent(cfg, tri).coherent,
        basic: triangulate::basicness(tri).is_basic,
    })
}

/// The GP triangulation carried over to a permuted, unit-scaled input.
fn gp_witness(t: &QuotientType, r: usize, k: u64, unit: u64) -> Result<Witness, PipelineError> {
    let gp = series::gp_triangulation(r, k)?;
    let l = t.order();
    let canonical: Vec<u64> = gp.quotient.cyclic_weights().expect("cyclic").to_vec();
    let w = t.cyclic_weights().expect("cyclic");
    let perm: Vec<usize> = w
        .iter()
        .map(|&x| canonical.iter().position(|&c| c == x * unit % l).expect("weight in progression"))
        .collect();
    let src = grouptype::junior_config(&gp.quotient)?;
    let jc = grouptype::junior_config(t)?;
    let cfg = PointConfig::from_junior(t)?;
    let map: Vec<usize> = src
        .points
        .iter()
        .map(|p| {
            let q: Vec<u64> = perm.iter().map(|&j| p[j]).collect();
            jc.find(&q).ok_or_else(|| PipelineError::Internal(format!("junior point {q:?} missing")))
        })
        .collect::<Result<_, _>>()?;
    let simplices = gp.triangulation.simplices.iter().map(|s| s.iter().map(|&i| map[i]).collect()).collect();
    let tri = Triangulation::new(&cfg, simplices)?;
    witness_from(t, &cfg, &tri)
}

struct Audit {
    upper: Option<StepRecord>,
    hilbert: Option<(StepRecord, bool)>,
}

fn upper_bound_step(t: &QuotientType, audit: bool) -> Result<StepRecord, PipelineError> {
    let rep = criteria::second_criterion(t)?;
    let (outcome, summary) = match (rep.variant, rep.pass) {
        (Variant::Vacuous, _) => (Outcome::Inconclusive, "vacuous for r < 4".to_string()),
        (_, true) => (Outcome::Inconclusive, format!("l = {} <= bound {}", rep.l, rep.bound)),
        (_, false) => (Outcome::NotResolvable, format!("l = {} > bound {}", rep.l, rep.bound)),
    };
    Ok(record(3, outcome, audit, summary, to_value(&rep)))
}

fn hilbert_step(t: &QuotientType, elements: &[grouptype::GroupElement], audit: bool) -> (StepRecord, bool) {
    let fc = hilbert::first_criterion_from(hilbert::hilbert_basis_from(t, elements));
    let payload = json!({
        "pass": fc.pass,
        "basis_size": fc.basis.elements.len(),
        "exp": fc.basis.exp,
        "witnesses": fc.witnesses.iter().map(|e| &e.numer).collect::<Vec<_>>(),
    });
    let (outcome, summary) = if fc.pass {
        (Outcome::Inconclusive, "Hilbert basis lies on the junior level".to_string())
    } else {
        (Outcome::NotResolvable, format!("{} Hilbert basis elements of age >= 2", fc.witnesses.len()))
    };
    (record(4, outcome, audit, summary, payload), fc.pass)
}

/// Runs the pipeline. Non-msc inputs are first reduced to their msc core.
pub fn run_pipeline(input: &QuotientType, budgets: &Budgets) -> Result<DecisionReport, PipelineError> {
    if !input.is_gorenstein() {
        return Err(PipelineError::NotGorenstein);
    }
    let mut notes = Vec::new();
    let elements0 = grouptype::enumerate_elements_with_budget(input, budgets.elements)?;
    let structure = grouptype::structure_report_from(input, &elements0);
    let (t, elements, reduced) = match grouptype::msc_reduction(input, &structure.fixed_coordinates) {
        None => (input.clone(), elements0, None),
        Some(res) => {
            let t = res?;
            notes.push(format!("coordinates {:?} are fixed by G; reduced to {t}", structure.fixed_coordinates));
            let el = grouptype::enumerate_elements_with_budget(&t, budgets.elements)?;
            let name = t.to_string();
            (t, el, Some(name))
        }
    };
    let mut used = BudgetsUsed { elements: input.index_space(), nodes: 0 };
    let mut steps = Vec::new();
    let mut verdict = Verdict::Undecided;
    let mut decided_at = None;
    let mut witness = None;

    if t.r() <= 3 {
        notes.push(format!("dimension {} <= 3: crepant projective resolutions always exist", t.r()));
        for id in 1..=4 {
            steps.push(skipped(id, "dimension at most 3"));
        }
        if budgets.witness {
            let (rec, w, nodes) = census(&t, budgets, true)?;
            used.nodes = nodes;
            witness = w;
            steps.push(rec);
        } else {
            steps.push(skipped(5, "dimension at most 3"));
        }
        return Ok(DecisionReport {
            schema_version: SCHEMA_VERSION,
            input: input.to_string(),
            reduced,
            steps,
            verdict: Verdict::Resolvable,
            decided_at: None,
            witness,
            budgets: budgets.clone(),
            budgets_used: used,
            notes,
        });
    }

    let mut audit = Audit { upper: None, hilbert: None };
    let hyper = series::hypersurface_check(&t);
    if hyper.matched() {
        let (cfg, tri) = series::hypersurface_witness(&t)?;
        witness = Some(witness_from(&t, &cfg, &tri)?);
        steps.push(record(1, Outcome::Resolvable, false, "hypersurface type G(r;k)", to_value(&hyper)));
        verdict = Verdict::Resolvable;
        decided_at = Some(1);
    } else {
        steps.push(record(1, Outcome::Inconclusive, false, "not of hypersurface type", Value::Null));
    }

    if decided_at.is_some() {
        steps.push(skipped(2, "decided earlier"));
    } else {
        let matches: Vec<_> = [series::one_param_check(&t), series::two_param_check(&t), series::gp_check(&t)]
            .into_iter()
            .filter(|m| m.matched())
            .collect();
        if let Some(m) = matches.first() {
            let mut outcome = match m.verdict {
                SeriesVerdict::Resolvable => Outcome::Resolvable,
                SeriesVerdict::NotResolvable => Outcome::NotResolvable,
                SeriesVerdict::Inapplicable => Outcome::Inconclusive,
            };
            let mut summary = format!("{:?} series: {:?}", m.kind, m.verdict);
            if m.kind == SeriesKind::TwoParam {
                let (rec, pass) = hilbert_step(&t, &elements, true);
                let condkett = outcome;
                if pass != (condkett == Outcome::Resolvable) {
                    let note = format!(
                        "continued fraction conditions give {condkett:?} but the Hilbert basis test {}; \
                         for 2-parameter types the latter is decisive",
                        if pass { "passes" } else { "fails" }
                    );
                    notes.push(note.clone());
                    summary = format!("{summary}; {note}");
                }
                outcome = if pass { Outcome::Resolvable } else { Outcome::Inconclusive };
                if !pass {
                    summary = format!("{summary}; deferred to the Hilbert basis test");
                }
                audit.hilbert = Some((rec, pass));
            }
            if let (SeriesKind::Gp, series::Trace::Gp { r, k, unit, .. }) = (m.kind, &m.trace) {
                witness = Some(gp_witness(&t, *r as usize, *k, *unit)?);
            }
            if outcome != Outcome::Inconclusive {
                verdict = if outcome == Outcome::Resolvable { Verdict::Resolvable } else { Verdict::NotResolvable };
                decided_at = Some(2);
            }
            steps.push(record(2, outcome, false, summary, to_value(&matches)));
        } else {
            steps.push(record(2, Outcome::Inconclusive, false, "no special series matched", Value::Null));
        }
    }

    let after = decided_at.is_some();
    let rec = upper_bound_step(&t, after)?;
    if !after && rec.outcome == Outcome::NotResolvable {
        verdict = Verdict::NotResolvable;
        decided_at = Some(3);
    }
    audit.upper = Some(rec);
    steps.push(audit.upper.take().unwrap());

    let after = decided_at.is_some();
    let (mut rec, pass) = match audit.hilbert.take() {
        Some(x) => x,
        None => hilbert_step(&t, &elements, after),
    };
    rec.audit = after;
    if !after && !pass {
        verdict = Verdict::NotResolvable;
        decided_at = Some(4);
    }
    steps.push(rec);

    if decided_at.is_none() || (budgets.witness && witness.is_none()) {
        let (rec, w, nodes) = census(&t, budgets, decided_at.is_some())?;
        used.nodes = nodes;
        if decided_at.is_none() {
            match rec.outcome {
                Outcome::Resolvable => {
                    verdict = Verdict::Resolvable;
                    decided_at = Some(5);
                }
                Outcome::NotResolvable => {
                    verdict = Verdict::NotResolvable;
                    decided_at = Some(5);
                }
                _ => {}
            }
        }
        if witness.is_none() {
            witness = w;
        }
        steps.push(rec);
    } else {
        steps.push(skipped(5, "decided earlier"));
    }

    Ok(DecisionReport {
        schema_version: SCHEMA_VERSION,
        input: input.to_string(),
        reduced,
        steps,
        verdict,
        decided_at,
        witness,
        budgets: budgets.clone(),
        budgets_used: used,
        notes,
    })
}

fn census(t: &QuotientType, budgets: &Budgets, audit: bool) -> Result<(StepRecord, Option<Witness>, usize), PipelineError> {
    let cfg = PointConfig::from_junior(t)?;
    let opts = ExploreOptions {
        maximal_only: true,
        expand_noncoherent: false,
        node_budget: budgets.nodes,
        seed_orders: budgets.seed_orders,
        rng_seed: 0,
    };
    let ex = triangulate::explore(&cfg, &opts);
    let coherent = ex.count(&[Filter::Coherent, Filter::Maximal]);
    let basic: Vec<_> = ex.select(&[Filter::Coherent, Filter::Basic]);
    let noncoherent_basic = ex.nodes.iter().filter(|n| !n.coherent && n.basic).count();
    let payload = json!({
        "points": cfg.len(),
        "volume": cfg.volume,
        "nodes": ex.nodes.len(),
        "complete": ex.complete,
        "coherent_maximal": coherent,
        "coherent_basic": basic.len(),
        "noncoherent_basic_seen": noncoherent_basic,
        "facet_histogram": ex.facet_histogram(&[Filter::Coherent, Filter::Maximal]),
        "notes": ex.notes,
    });
    let witness = match basic.first() {
        Some(n) => Some(witness_from(t, &cfg, &n.triangulation)?),
        None => None,
    };
    let (outcome, summary) = if !basic.is_empty() {
        (Outcome::Resolvable, format!("{} of {} coherent maximal triangulations are basic", basic.len(), coherent))
    } else if ex.complete {
        (Outcome::NotResolvable, format!("complete census of {coherent} coherent maximal triangulations, none basic"))
    } else {
        (Outcome::Inconclusive, format!("node budget {} reached after {coherent} coherent maximal triangulations", budgets.nodes))
    };
    Ok((record(5, outcome, audit, summary, payload), witness, ex.nodes.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn report_format(rep: &DecisionReport, mode: Format) -> String {
    match mode {
        Format::Json => rep.to_json(),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "input: {}", rep.input).unwrap();
            if let Some(r) = &rep.reduced {
                writeln!(s, "msc core: {r}").unwrap();
            }
            for st in &rep.steps {
                let tag = if st.audit { " (audit)" } else { "" };
                writeln!(s, "step {} {:<20} {:<15} {}{tag}", st.id, st.name, format!("{:?}", st.outcome), st.summary).unwrap();
            }
            for n in &rep.notes {
                writeln!(s, "note: {n}").unwrap();
            }
            if let Some(w) = &rep.witness {
                writeln!(s, "witness: {} simplices on {} points", w.simplices.len(), w.numerators.len()).unwrap();
            }
            let at = rep.decided_at.map_or("-".to_string(), |i| i.to_string());
            writeln!(s, "verdict: {} (step {at})", serde_json::to_value(rep.verdict).unwrap().as_str().unwrap()).unwrap();
            s
        }
    }
}
