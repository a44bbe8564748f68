//! Dispatch of a validated config to the library and assembly of the report.

use crate::config::{Experiment, ExperimentConfig, TransferRoute};
use crate::report::{ClaimRow, Report, Timing};
use anyhow::{Context, Result};
use dynlab_core::disjoint::{
    criterion_scan, default_scan_gap, enumerate_dense, joining_coverage, power_witness_transfer,
    product_witness_transfer, star_sufficient_check, tower_identity, witness_search, ScanParams, WitnessQuery,
};
use dynlab_core::hyper::periodic_set_search;
use dynlab_core::intfam::{
    central_from_dps, check, dps_from_central, dual_check, CentralParams, ClaimKind, Evidence, FamilyClaim, Outcome,
    Qualifier, SetGenerator, Verdict,
};
use dynlab_core::rational::{format_rational, Rational};
use dynlab_core::systems::{return_set, OpenSetSpec, System};
use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// Runs one experiment. Failures of individual cells become error rows;
/// only a failure of the experiment as a whole is returned as `Err`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let (claims, detail) = dispatch(&config.experiment)?;
    Ok(Report::new(config.clone(), claims, detail, Timing { elapsed_ms: start.elapsed().as_millis() as u64 }))
}

fn dispatch(experiment: &Experiment) -> Result<(Vec<ClaimRow>, Value)> {
    match experiment {
        Experiment::FamilyCheck { set, horizon, claims, corpus } => {
            let window = set.try_window(*horizon)?;
            let members = corpus.as_ref().map(|c| c.members()).unwrap_or_default();
            let mut rows = Vec::new();
            let mut verdicts = Vec::new();
            for (i, claim) in claims.iter().enumerate() {
                let id = format!("claim-{i}");
                let verdict = match claim {
                    ClaimKind::Dual { family, .. } => dual_check(&window, &members, family),
                    other => check(&window, other),
                };
                match verdict {
                    Ok(v) => {
                        rows.push(ClaimRow::from_verdict(id, &v, None));
                        verdicts.push(to_value(&v));
                    }
                    Err(e) => {
                        rows.push(ClaimRow::error(id, format!("{claim:?}"), e.to_string()));
                        verdicts.push(json!({ "error": e.to_string() }));
                    }
                }
            }
            let detail = json!({
                "members_in_window": window.count(),
                "corpus_size": members.len(),
                "verdicts": verdicts,
            });
            Ok((rows, detail))
        }
        Experiment::CentralBridge { decompositions, horizon, run_length, epsilon, gap } => {
            let params = CentralParams { horizon: *horizon, run_length: *run_length, epsilon: *epsilon, gap: gap.fixed() };
            let mut rows = Vec::new();
            let mut details = Vec::new();
            for (i, dec) in decompositions.iter().enumerate() {
                match central_bridge(dec, &params) {
                    Ok((cw_rows, d)) => {
                        rows.extend(cw_rows.into_iter().map(|mut r| {
                            r.id = format!("decomposition-{i}:{}", r.id);
                            r
                        }));
                        details.push(d);
                    }
                    Err(e) => {
                        rows.push(ClaimRow::error(format!("decomposition-{i}"), String::new(), format!("{e:#}")));
                        details.push(json!({ "error": format!("{e:#}") }));
                    }
                }
            }
            Ok((rows, Value::Array(details)))
        }
        Experiment::WitnessSearch { x_system, y_system, u, v, y, horizon, gap, budget } => {
            let q = WitnessQuery {
                x_system: x_system.clone(),
                y_system: y_system.clone(),
                u: u.clone(),
                v: v.clone(),
                horizon: *horizon,
                gap: *gap,
            };
            let dense = enumerate_dense(x_system, *budget)?;
            let out = witness_search(&q, &dense, y)?;
            let row = ClaimRow::from_verdict(format!("{u}|{v}"), &out.verdict, out.witness().map(|x| x.to_string()));
            Ok((vec![row], to_value(&out)))
        }
        Experiment::CriterionScan { x_system, y_system, depth, horizon, gap, budget, y_samples } => {
            let report = criterion_scan(&ScanParams {
                x_system: x_system.clone(),
                y_system: y_system.clone(),
                depth: *depth,
                horizon: *horizon,
                gap: gap.fixed(),
                budget: *budget,
                y_samples: *y_samples,
            })?;
            if report.pairs.is_empty() {
                anyhow::bail!("scan produced no (U, V) pairs");
            }
            let rows = report
                .pairs
                .iter()
                .map(|p| ClaimRow::from_verdict(format!("{}|{}", p.u, p.v), &p.verdict, p.witness.as_ref().map(|x| x.to_string())))
                .collect();
            Ok((rows, to_value(&report)))
        }
        Experiment::JoiningCoverage { x_system, y_system, x, y, depth, horizon, expected } => {
            let j = joining_coverage(x_system, y_system, x, y, *depth, *horizon)?;
            let full = Rational::from_integer(1);
            let (outcome, relation) = match expected {
                Some(e) if j.coverage == *e => (Outcome::Verified, format!("coverage = {}", format_rational(e))),
                Some(e) => (Outcome::Refuted, format!("coverage = {}", format_rational(e))),
                None if j.coverage == full => (Outcome::Verified, "coverage = 1".to_string()),
                None => (Outcome::Inconclusive, "coverage = 1".to_string()),
            };
            let verdict = Verdict::new(
                outcome,
                Qualifier::OnWindow,
                FamilyClaim { kind: ClaimKind::WindowRelation { relation }, horizon: *horizon },
                Evidence::Note {
                    text: format!("{} of {} cells visited", j.visited.len(), j.x_cells * j.y_cells),
                },
            );
            Ok((vec![ClaimRow::from_verdict("coverage".into(), &verdict, None)], to_value(&j)))
        }
        Experiment::StarCheck { x_system, u, star, corpus, horizon, budget } => {
            let members = corpus.members();
            let s = star_sufficient_check(x_system, u, *star, &members, *horizon, *budget)?;
            let row = ClaimRow::from_verdict(star.family().to_string(), &s.verdict, s.witness.as_ref().map(|x| x.to_string()));
            Ok((vec![row], to_value(&s)))
        }
        Experiment::Transfer { horizon, route } => transfer(*horizon, route),
        Experiment::Hyperspace { system, u, max_size, max_period, budget } => {
            let out = periodic_set_search(system, u, *max_size, *max_period, *budget)?;
            let witness = out.witness.as_ref().map(|w| {
                let pts: Vec<String> = w.set.points.iter().map(|p| p.to_string()).collect();
                format!("{{{}}} period {}", pts.join(", "), w.period)
            });
            Ok((vec![ClaimRow::from_verdict(format!("periodic-set|{u}"), &out.verdict, witness)], to_value(&out)))
        }
    }
}

fn central_bridge(dec: &dynlab_core::intfam::DpsDecomposition, params: &CentralParams) -> Result<(Vec<ClaimRow>, Value)> {
    let cw = central_from_dps(dec, params)?;
    let h = params.horizon;
    let mut rows = vec![
        ClaimRow::from_verdict("proximality".into(), &cw.proximality, Some(cw.x.to_string())),
        ClaimRow::from_verdict("minimal-returns".into(), &cw.minimal_returns, Some(cw.y.to_string())),
    ];
    if let Some(v) = &cw.return_identity {
        rows.push(ClaimRow::from_verdict("return-identity".into(), v, None));
    }
    let back = dps_from_central(&cw, &params.epsilon)?;
    let q = return_set(&cw.system, &cw.x, &cw.neighborhood, h)?;
    let b = SetGenerator::DynSyndetic {
        system: back.system.clone(),
        point: back.point.clone(),
        neighborhood: back.neighborhood.clone(),
    };
    let both = back.thick.try_window(h)?.intersection(&b.try_window(h)?);
    let mismatch = both.difference(&q).next_member(0);
    let mut round_trip = Verdict::relation("A' ∩ B' ⊆ N(x, U)", h, mismatch);
    if mismatch.is_none() && both.is_empty() {
        round_trip.outcome = Outcome::Inconclusive;
        round_trip.evidence = Evidence::Note { text: "A' ∩ B' is empty on the window".into() };
    }
    rows.push(ClaimRow::from_verdict("round-trip".into(), &round_trip, None));
    Ok((rows, json!({ "witness": to_value(&cw), "round_trip": to_value(&back) })))
}

fn transfer(horizon: usize, route: &TransferRoute) -> Result<(Vec<ClaimRow>, Value)> {
    match route {
        TransferRoute::Product { x_system, y_system, u, v, y, gap, budget, offsets, targets } => {
            let q = WitnessQuery {
                x_system: x_system.clone(),
                y_system: y_system.clone(),
                u: u.clone(),
                v: v.clone(),
                horizon,
                gap: *gap,
            };
            let dense = enumerate_dense(x_system, *budget)?;
            let found = witness_search(&q, &dense, y)?;
            let mut rows = vec![ClaimRow::from_verdict(
                "witness".into(),
                &found.verdict,
                found.witness().map(|x| x.to_string()),
            )];
            if !found.verdict.is_verified() {
                return Ok((rows, json!({ "search": to_value(&found) })));
            }
            let rec = found.records.first().context("verified search without a record")?;
            match product_witness_transfer(rec, offsets, targets) {
                Ok(out) => {
                    rows.push(ClaimRow::from_verdict("product".into(), &out.verdict, Some(out.x.to_string())));
                    Ok((rows, json!({ "search": to_value(&found), "transferred": to_value(&out) })))
                }
                Err(e) => {
                    rows.push(ClaimRow::error("product".into(), String::new(), e.to_string()));
                    Ok((rows, json!({ "search": to_value(&found), "error": e.to_string() })))
                }
            }
        }
        TransferRoute::Tower { base, height, y } => {
            let v = tower_identity(base, *height, y, horizon)?;
            Ok((vec![ClaimRow::from_verdict("tower-identity".into(), &v, None)], to_value(&v)))
        }
        TransferRoute::Power { x_system, y_system, exponent, u, v, gap, budget } => {
            let g = match gap.fixed() {
                Some(g) => g,
                None => {
                    let depth = match u {
                        OpenSetSpec::Cylinder { word } => word.chars().count(),
                        _ => 1,
                    };
                    default_scan_gap(x_system, depth, &System::tower(y_system.clone(), *exponent))
                        .context("automatic gap needs periodic systems")?
                }
            };
            let t = power_witness_transfer(x_system, y_system, *exponent, u, v, horizon, g, *budget)?;
            let row = ClaimRow::from_verdict(format!("power-{exponent}"), &t.verdict, t.witness.as_ref().map(|x| x.to_string()));
            Ok((vec![row], to_value(&t)))
        }
    }
}
