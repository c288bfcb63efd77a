use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crepant_lab::counting::{self, CountError};
use crepant_lab::criteria::{self, CriteriaError};
use crepant_lab::grouptype::{self, QuotientType, TypeError};
use crepant_lab::hilbert;
use crepant_lab::pipeline::{self, Budgets, Format, PipelineError};
use crepant_lab::series::{self, SeriesError};
use crepant_lab::triangulate::{self, ExploreOptions, Filter, PointConfig, TriangError};

#[derive(Parser)]
#[command(name = "crepant-lab", version, about = "Crepant resolution existence tests for abelian quotient singularities")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 100_000)]
    budget_nodes: usize,
    #[arg(long, global = true, default_value_t = grouptype::DEFAULT_ELEMENT_BUDGET)]
    budget_elems: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed_orders: usize,
    #[arg(long, global = true, value_enum)]
    filter: Vec<FilterArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Maximal,
    Coherent,
    Basic,
}

impl From<FilterArg> for Filter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::Maximal => Filter::Maximal,
            FilterArg::Coherent => Filter::Coherent,
            FilterArg::Basic => Filter::Basic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Group order, ages, heights and singularity structure.
    Analyze { ty: String },
    /// Ehrhart counts, h*-vector and lattice point formulas.
    Count {
        ty: String,
        /// Dilation factor.
        #[arg(long, default_value_t = 1)]
        nu: u64,
    },
    /// Hilbert basis of the orthant with respect to the group lattice.
    Hilbert { ty: String },
    /// Both necessary existence criteria.
    Criteria { ty: String },
    /// Flip-graph census of the junior simplex.
    Triangulate {
        ty: String,
        /// Also expand non-coherent triangulations.
        #[arg(long)]
        all: bool,
        /// Write the flip graph in DOT format to this file.
        #[arg(long)]
        dot: Option<std::path::PathBuf>,
    },
    /// Special series recognizers and constructions.
    Series {
        #[command(subcommand)]
        verb: SeriesVerb,
    },
    /// Full decision procedure.
    Pipeline {
        ty: String,
        /// Produce a witness triangulation even when an earlier step decides.
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Subcommand)]
enum SeriesVerb {
    /// Construct GP(r;k) with its basic triangulation.
    Gp { r: usize, k: u64 },
    Hyper { ty: String },
    Oneparam { ty: String },
    Twoparam { ty: String },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<TypeError> for Failure {
    fn from(e: TypeError) -> Self {
        let code = match e {
            TypeError::NotGorenstein => 65,
            TypeError::Budget { .. } => 70,
            _ => 64,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        PipelineError::from(e).into()
    }
}

impl From<CriteriaError> for Failure {
    fn from(e: CriteriaError) -> Self {
        PipelineError::from(e).into()
    }
}

impl From<TriangError> for Failure {
    fn from(e: TriangError) -> Self {
        PipelineError::from(e).into()
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Parameters(m) => Failure { code: 64, message: m },
            other => PipelineError::from(other).into(),
        }
    }
}

fn parse(ty: &str, g: &Global) -> Result<QuotientType, Failure> {
    let t = grouptype::parse_type(ty)?;
    if t.index_space() > g.budget_elems {
        return Err(TypeError::Budget { needed: t.index_space(), budget: g.budget_elems }.into());
    }
    Ok(t)
}

fn gorenstein(ty: &str, g: &Global) -> Result<QuotientType, Failure> {
    let t = parse(ty, g)?;
    if !t.is_gorenstein() {
        return Err(TypeError::NotGorenstein.into());
    }
    Ok(t)
}

fn emit(g: &Global, value: serde_json::Value, text: impl FnOnce() -> String) {
    if g.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        print!("{}", text());
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { ty } => {
            let t = parse(ty, g)?;
            let elements = grouptype::enumerate_elements_with_budget(&t, g.budget_elems)?;
            let rep = grouptype::structure_report_from(&t, &elements);
            let counts: Vec<_> = grouptype::age_height_counts(&elements)
                .into_iter()
                .map(|((age, height), n)| json!({"age": age, "height": height, "count": n}))
                .collect();
            let value = json!({
                "type": t.to_string(), "r": t.r(), "order": t.order(), "exponent": t.exponent(),
                "structure": rep, "age_height": counts,
            });
            emit(g, value, || {
                format!(
                    "type {t}\nr = {}, l = {}, exp = {}\ngorenstein {}, msc {}, isolated {}\nage histogram {:?}\n",
                    t.r(),
                    t.order(),
                    t.exponent(),
                    rep.is_gorenstein,
                    rep.is_msc,
                    rep.is_isolated,
                    rep.age_histogram
                )
            });
        }
        Command::Count { ty, nu } => {
            let t = gorenstein(ty, g)?;
            let e = counting::ehrhart_poly(&t)?;
            let at = counting::ehrhart_eval(&t, *nu)?;
            let mp = counting::mp_count_r4(&t).ok();
            let bc = counting::b_counts(&t)?;
            let value = json!({
                "type": t.to_string(), "nu": nu, "count": at.to_string(), "ehrhart": e,
                "mp_count": mp, "b_counts": bc,
            });
            emit(g, value, || {
                let mut s = format!("type {t}\nEhr({nu}) = {at}\nh* = {:?}\n", e.hstar.iter().map(|x| x.to_string()).collect::<Vec<_>>());
                if let Some(mp) = &mp {
                    s.push_str(&format!("closed-form junior count = {}\n", mp.count));
                }
                s
            });
        }
        Command::Hilbert { ty } => {
            let t = gorenstein(ty, g)?;
            let fc = hilbert::first_criterion(&t)?;
            let value = json!({"type": t.to_string(), "first_criterion": fc});
            emit(g, value, || {
                let mut s = format!("type {t}\nHilbert basis ({} elements, over {}):\n", fc.basis.elements.len(), fc.basis.exp);
                for e in &fc.basis.elements {
                    s.push_str(&format!("  {:?} age {}\n", e.numer, e.age));
                }
                s.push_str(&format!("first criterion: {}\n", if fc.pass { "pass" } else { "fail" }));
                s
            });
        }
        Command::Criteria { ty } => {
            let t = gorenstein(ty, g)?;
            let second = criteria::second_criterion(&t)?;
            let first = hilbert::first_criterion(&t)?;
            let value = json!({
                "type": t.to_string(), "second_criterion": second,
                "first_criterion": {"pass": first.pass, "witnesses": first.witnesses},
            });
            emit(g, value, || {
                format!(
                    "type {t}\nupper bound: l = {} vs bound {} ({}) -> {}\nHilbert basis: {} ({} witnesses)\n",
                    second.l,
                    second.bound,
                    second.formula,
                    if second.pass { "pass" } else { "fail" },
                    if first.pass { "pass" } else { "fail" },
                    first.witnesses.len()
                )
            });
        }
        Command::Triangulate { ty, all, dot } => {
            let t = gorenstein(ty, g)?;
            let cfg = PointConfig::from_junior(&t)?;
            let opts = ExploreOptions {
                maximal_only: true,
                expand_noncoherent: *all,
                node_budget: g.budget_nodes,
                seed_orders: g.seed_orders,
                rng_seed: 0,
            };
            let ex = triangulate::explore(&cfg, &opts);
            if let Some(path) = dot {
                std::fs::write(path, ex.to_dot()).map_err(|e| Failure { code: 74, message: e.to_string() })?;
            }
            let filters: Vec<Filter> = if g.filter.is_empty() {
                vec![Filter::Coherent, Filter::Maximal]
            } else {
                g.filter.iter().map(|&f| f.into()).collect()
            };
            let selected: Vec<_> = ex.select(&filters).into_iter().map(|n| &n.triangulation.simplices).collect();
            let value = json!({
                "type": t.to_string(), "points": cfg.points, "nodes": ex.nodes.len(), "complete": ex.complete,
                "filters": filters, "count": selected.len(), "facet_histogram": ex.facet_histogram(&filters),
                "triangulations": selected,
            });
            emit(g, value, || {
                format!(
                    "type {t}\npoints {}, nodes {}, complete {}\n{:?}: {} triangulations, facet histogram {:?}\n",
                    cfg.len(),
                    ex.nodes.len(),
                    ex.complete,
                    filters,
                    selected.len(),
                    ex.facet_histogram(&filters)
                )
            });
            if !ex.complete {
                return Err(Failure { code: 70, message: format!("node budget {} exhausted", g.budget_nodes) });
            }
        }
        Command::Series { verb } => match verb {
            SeriesVerb::Gp { r, k } => {
                let data = series::gp_construct(*r, *k)?;
                let tri = series::gp_triangulation(*r, *k)?;
                let coh = triangulate::is_coherent(&tri.config, &tri.triangulation);
                let basic = triangulate::basicness(&tri.triangulation).is_basic;
                let value = json!({
                    "type": data.quotient.to_string(), "l": data.l, "det_w": data.det_w.to_string(),
                    "lattice_image_ok": data.lattice_image_ok, "simplices": tri.triangulation.simplices,
                    "coarse_cells": tri.coarse_cells, "basic": basic, "coherence": coh,
                });
                emit(g, value, || {
                    format!(
                        "type {}\n|det W| = {}\n{} simplices, basic {}, coherent {}\n",
                        data.quotient,
                        data.det_w,
                        tri.triangulation.len(),
                        basic,
                        coh.coherent
                    )
                });
            }
            SeriesVerb::Hyper { ty } | SeriesVerb::Oneparam { ty } | SeriesVerb::Twoparam { ty } => {
                let t = gorenstein(ty, g)?;
                let m = match verb {
                    SeriesVerb::Hyper { .. } => series::hypersurface_check(&t),
                    SeriesVerb::Oneparam { .. } => series::one_param_check(&t),
                    _ => series::two_param_check(&t),
                };
                let value = serde_json::to_value(&m).expect("json");
                emit(g, value.clone(), || {
                    format!("type {t}\nkind {:?}, verdict {:?}\n{}\n", m.kind, m.verdict, serde_json::to_string(&value["trace"]).unwrap())
                });
            }
        },
        Command::Pipeline { ty, witness } => {
            let t = parse(ty, g)?;
            let budgets = Budgets { nodes: g.budget_nodes, elements: g.budget_elems, seed_orders: g.seed_orders, witness: *witness };
            let rep = pipeline::run_pipeline(&t, &budgets)?;
            print!("{}", pipeline::report_format(&rep, if g.json { Format::Json } else { Format::Text }));
            if g.json {
                println!();
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("CREPANT_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
