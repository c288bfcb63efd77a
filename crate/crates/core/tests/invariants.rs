mod common;

use std::collections::BTreeSet;

use num_integer::Integer;

use crepant_lab::criteria;
use crepant_lab::grouptype::{parse_type, QuotientType};
use crepant_lab::hilbert;
use crepant_lab::pipeline::{self, Budgets, Outcome, Verdict};
use crepant_lab::series::{self, SeriesVerdict};
use crepant_lab::triangulate::{self, ExploreOptions, Filter, PointConfig};

fn two_param_types(lmax: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for l in 4..=lmax {
        for a in 1..l - 2 {
            let b = l - 2 - a;
            if b >= a && a.gcd(&l) != l && b.gcd(&l) != l {
                out.push((l, a, b));
            }
        }
    }
    out
}

fn census_has_basic(t: &QuotientType) -> bool {
    let cfg = PointConfig::from_junior(t).unwrap();
    let ex = triangulate::explore(&cfg, &ExploreOptions::default());
    assert!(ex.complete, "{t}");
    ex.count(&[Filter::Coherent, Filter::Maximal, Filter::Basic]) > 0
}

#[test]
fn two_param_conditions_against_census() {
    let mut missed = BTreeSet::new();
    for (l, a, b) in two_param_types(30) {
        let Ok(t) = QuotientType::cyclic(l, &[1, 1, a, b]) else { continue };
        let truth = census_has_basic(&t);
        assert_eq!(hilbert::first_criterion(&t).unwrap().pass, truth, "{t}");
        let cond = series::two_param_check(&t).verdict == SeriesVerdict::Resolvable;
        assert!(!cond || truth, "{t}: conditions hold but no basic triangulation");
        if truth && !cond {
            missed.insert((l, a, b));
        }
    }
    // resolvable types whose q/p has no continued fraction with all quotients >= 2
    let expected: BTreeSet<(u64, u64, u64)> = [
        (4, 1, 1),
        (8, 3, 3),
        (12, 5, 5),
        (15, 3, 10),
        (16, 7, 7),
        (18, 3, 13),
        (20, 3, 15),
        (20, 9, 9),
        (21, 7, 12),
        (23, 3, 18),
        (24, 11, 11),
        (26, 3, 21),
        (28, 13, 13),
        (30, 7, 21),
    ]
    .into();
    assert_eq!(missed, expected);
}

#[test]
fn two_param_pipeline_follows_census() {
    for (l, a, b) in two_param_types(20) {
        let t = QuotientType::cyclic(l, &[1, 1, a, b]).unwrap();
        let rep = pipeline::run_pipeline(&t, &Budgets::default()).unwrap();
        let want = if census_has_basic(&t) { Verdict::Resolvable } else { Verdict::NotResolvable };
        assert_eq!(rep.verdict, want, "{t}");
    }
}

fn series_corpus() -> Vec<String> {
    let mut v: Vec<String> = two_param_types(24).into_iter().map(|(l, a, b)| format!("1/{l}(1,1,{a},{b})")).collect();
    for r in 3..=6u64 {
        for l in r..=24 {
            let last = (l - (r - 1) % l) % l;
            if last != 0 {
                v.push(format!("1/{l}({}{last})", "1,".repeat(r as usize - 1)));
            }
        }
    }
    for (r, k) in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        v.push(series::gp_construct(r, k).unwrap().quotient.to_string());
    }
    v.push("1/2(1,1,0,0)x1/2(0,1,1,0)x1/2(0,0,1,1)".into());
    v.push("1/3(1,2,0)x1/3(0,1,2)".into());
    v
}

#[test]
fn resolvable_series_pass_both_criteria() {
    let mut seen = 0;
    for s in series_corpus() {
        let Ok(t) = parse_type(&s) else { continue };
        if !t.is_gorenstein() {
            continue;
        }
        for m in series::classify(&t) {
            if m.verdict == SeriesVerdict::Resolvable {
                seen += 1;
                assert!(hilbert::first_criterion(&t).unwrap().pass, "{s} {:?}", m.kind);
                let c = criteria::second_criterion(&t).unwrap();
                assert!(c.pass, "{s} {:?}: bound {}", m.kind, c.bound);
            }
        }
    }
    assert!(seen > 50);
}

#[test]
fn early_resolvable_steps_pass_audits() {
    for s in series_corpus() {
        let Ok(t) = parse_type(&s) else { continue };
        let Ok(rep) = pipeline::run_pipeline(&t, &Budgets::default()) else { continue };
        if rep.verdict == Verdict::Resolvable && matches!(rep.decided_at, Some(1 | 2)) {
            for step in &rep.steps[2..4] {
                assert!(step.audit && step.outcome == Outcome::Inconclusive, "{s}: step {} {:?}", step.id, step.outcome);
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for s in ["1/12(1,2,3,6)", "1/15(1,2,4,8)", "1/11(1,1,3,6)", "1/9(1,2,3,3)"] {
        let t = parse_type(s).unwrap();
        let a = pipeline::run_pipeline(&t, &Budgets::default()).unwrap().to_json();
        let b = pipeline::run_pipeline(&t, &Budgets::default()).unwrap().to_json();
        assert_eq!(a, b);
        assert_eq!(pipeline::DecisionReport::from_json(&a).unwrap().to_json(), a);
    }
}

#[test]
fn staircase_support_function_is_strictly_convex() {
    for d in 1..=3 {
        for k in 2..=4 {
            let st = series::staircase_triangulation(d, k).unwrap();
            let n = st.triangulation.simplices.len() as u64;
            assert_eq!(n, k.pow(d as u32));
            let c = series::psi_certificate(&st);
            assert!(c.linear_on_cells && c.strictly_convex, "T({d};{k})");
        }
    }
}

#[test]
fn gp_triangulations_cover_l_unimodular_cells() {
    for r in 3..=6usize {
        for k in 2..=3u64 {
            let l = (k.pow(r as u32) - 1) / (k - 1);
            if l > 400 {
                continue;
            }
            let g = series::gp_triangulation(r, k).unwrap();
            assert_eq!(g.triangulation.len() as u64, l);
            assert!(g.triangulation.simplices.iter().all(|s| common::simplex_volume(&g.config.points, s) == 1.into()));
            assert_eq!(g.coarse_cells.len(), (1 << r) - 1);
        }
    }
}
