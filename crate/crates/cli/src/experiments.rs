//! The six experiments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use dbi_core::costs::{f1_off_diagonal_norm, CostFunction};
use dbi_core::dbr::{dbi_run_with, DbiOptions, DbiState, DbrFlow, GeneratorPolicy, RunStatus};
use dbi_core::generators::realize;
use dbi_core::linalg::{delta_restrict, Operator};
use dbi_core::product_formulas::{error_curve, fit_loglog_slope, log_grid, FormulaKind, FormulaPropagator};
use dbi_core::scheduling::{grid_first_local_min, scan, schedule, sigma_polynomial, ScheduleConfig};

use crate::config::{Experiment, ExperimentConfig, GeneratorEntry, DEFAULT_BHMM};
use crate::plot::{Panel, PlotSpec};
use crate::table::{float, opt_float, Table};
use crate::{Outputs, RunError};

/// Log grid of the product-formula error fits.
pub const ERROR_GRID: (f64, f64, usize) = (1e-4, 1e-1, 13);

pub fn run(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    match config.experiment {
        Experiment::ScheduleScan => schedule_scan(config),
        Experiment::TaylorValidity => taylor_validity(config),
        Experiment::BhmmCompare => bhmm_compare(config),
        Experiment::AdaptiveCompare => adaptive_compare(config),
        Experiment::GcCompare => gc_compare(config),
        Experiment::DbiRun => dbi_run(config),
    }
}

/// `0` followed by the schedule's grid.
fn scan_grid(sched: &ScheduleConfig) -> Vec<f64> {
    std::iter::once(0.0).chain(sched.grid_points()).collect()
}

/// The first configured generator (dephasing by default), realized on `h`.
fn scan_generator(config: &ExperimentConfig, h: &Operator<f64>) -> Result<(String, Operator<f64>), RunError> {
    let entry = config.generator_entries(&["dephasing"]).remove(0);
    let spec = config.generator_spec(&entry)?;
    Ok((entry.label(), realize(&spec, Some(h))?))
}

fn num(x: f64) -> Value {
    json!(x)
}

fn schedule_scan(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    let h = config.model.hamiltonian()?;
    let (label, d) = scan_generator(config, &h)?;
    let cost = config.cost_function()?;
    let sched = config.schedule();
    let grid = scan_grid(&sched);
    let costs = scan(&h, &d, &cost, &grid)?;
    let flow = DbrFlow::new(&h, &d)?;

    let mut table = Table::new(&["s", "cost", "f1"]);
    for (&s, &c) in grid.iter().zip(&costs) {
        table.push(vec![float(s), float(c), float(flow.off_diagonal_norm_at(s))]);
    }
    let (arg, min) = grid[1..]
        .iter()
        .zip(&costs[1..])
        .fold((f64::NAN, f64::INFINITY), |best, (&s, &c)| if c < best.1 { (s, c) } else { best });
    let outcome = schedule(&h, &d, &cost, &sched)?;

    let mut summary = BTreeMap::new();
    summary.insert("generator".into(), json!(label));
    summary.insert("cost".into(), json!(cost.kind().tag()));
    summary.insert("cost_at_zero".into(), num(outcome.cost_at_zero));
    summary.insert("scheduled_s".into(), num(outcome.s));
    summary.insert("scheduled_cost".into(), num(outcome.cost));
    summary.insert("schedule_strategy".into(), json!(outcome.strategy.tag()));
    summary.insert("no_gain".into(), json!(outcome.no_gain));
    summary.insert("scan_argmin_s".into(), num(arg));
    summary.insert("scan_min_cost".into(), num(min));

    let plot = PlotSpec {
        title: format!("cost along one rotation ({label})"),
        output: "plot.png".into(),
        panels: vec![Panel::Columns {
            csv: "scan.csv".into(),
            x: "s".into(),
            ys: vec!["cost".into(), "f1".into()],
            title: "schedule scan".into(),
            ylabel: "cost".into(),
            log: false,
        }],
    };
    Ok(Outputs { tables: vec![("scan.csv".into(), table)], summary, plot, ..Default::default() })
}

/// Golden-section refinement of a local minimum of `f` inside `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// First local minimum of the exact off-diagonal norm, located on the
/// schedule grid and refined by golden-section search.
pub fn exact_first_local_min(h: &Operator<f64>, d: &Operator<f64>, sched: &ScheduleConfig) -> Result<Option<f64>, RunError> {
    let Some(coarse) = grid_first_local_min(h, d, &CostFunction::OffDiagonalNorm, sched)? else {
        return Ok(None);
    };
    let step = sched.s_max / sched.n_points as f64;
    let flow = DbrFlow::new(h, d)?;
    Ok(Some(golden_min(|s| flow.off_diagonal_norm_at(s), (coarse.s - step).max(0.0), coarse.s + step)))
}

fn taylor_validity(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    let h = config.model.hamiltonian()?;
    let (label, d) = scan_generator(config, &h)?;
    let sched = config.schedule();
    let grid = scan_grid(&sched);
    let flow = DbrFlow::new(&h, &d)?;
    let exact: Vec<f64> = grid.par_iter().map(|&s| flow.off_diagonal_norm_at(s).powi(2)).collect();
    let exact_min = exact_first_local_min(&h, &d, &sched)?;

    let orders = &config.taylor_orders;
    let polys = orders.iter().map(|&n| sigma_polynomial(&h, &d, n)).collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["s".to_string(), "exact".to_string()];
    header.extend(orders.iter().map(|n| format!("order_{n}")));
    let mut curves = Table::new(&header);
    for (i, &s) in grid.iter().enumerate() {
        let mut row = vec![float(s), float(exact[i])];
        row.extend(polys.iter().map(|p| float(p.eval(s))));
        curves.push(row);
    }

    let mut minima = Table::new(&["order", "max_rel_error", "poly_first_min", "exact_first_min", "abs_error"]);
    let mut per_order = Vec::new();
    for (&n, p) in orders.iter().zip(&polys) {
        let max_rel =
            grid.iter().zip(&exact).map(|(&s, &e)| (p.eval(s) - e).abs() / e.abs()).fold(0.0, f64::max);
        let s_min = p.first_local_min(f64::INFINITY);
        let err = match (s_min, exact_min) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        minima.push(vec![n.to_string(), float(max_rel), opt_float(s_min), opt_float(exact_min), opt_float(err)]);
        per_order.push(json!({ "order": n, "max_rel_error": max_rel, "poly_first_min": s_min, "abs_error": err }));
    }

    let mut summary = BTreeMap::new();
    summary.insert("generator".into(), json!(label));
    summary.insert("exact_first_min".into(), json!(exact_min));
    summary.insert("orders".into(), Value::Array(per_order));

    let mut ys = vec!["exact".to_string()];
    ys.extend(orders.iter().map(|n| format!("order_{n}")));
    let plot = PlotSpec {
        title: "Taylor polynomial of the off-diagonal norm".into(),
        output: "plot.png".into(),
        panels: vec![Panel::Columns {
            csv: "taylor.csv".into(),
            x: "s".into(),
            ys,
            title: format!("||sigma||^2 ({label})"),
            ylabel: "f1^2".into(),
            log: false,
        }],
    };
    Ok(Outputs {
        tables: vec![("taylor.csv".into(), curves), ("taylor_minima.csv".into(), minima)],
        summary,
        plot,
        ..Default::default()
    })
}

fn run_policy(
    config: &ExperimentConfig,
    h: &Operator<f64>,
    policy: &GeneratorPolicy<f64>,
    cost: &CostFunction<f64>,
) -> Result<DbiState<f64>, RunError> {
    let opts = DbiOptions { n_steps: config.n_steps, min_relative_gain: config.min_relative_gain };
    Ok(dbi_run_with(h, policy, &config.schedule(), cost, &opts)?)
}

fn push_trajectory(table: &mut Table, label: &str, state: &DbiState<f64>) {
    let f1 = state.f1_trajectory();
    table.push(vec![label.to_string(), "0".into(), float(0.0), float(f1[0]), "initial".into()]);
    for (k, st) in state.steps.iter().enumerate() {
        table.push(vec![label.to_string(), (k + 1).to_string(), float(st.s), float(f1[k + 1]), st.generator.tag()]);
    }
}

fn status_text(status: &RunStatus) -> String {
    match status {
        RunStatus::Completed => "completed".into(),
        RunStatus::MarginalGain => "marginal-gain".into(),
        RunStatus::Failed(e) => format!("failed: {e}"),
    }
}

fn final_f1(state: &DbiState<f64>) -> f64 {
    *state.f1_trajectory().last().expect("trajectory starts with the input")
}

struct Labelled {
    label: String,
    state: DbiState<f64>,
}

fn run_bhmm_set(config: &ExperimentConfig, h: &Operator<f64>, entries: &[GeneratorEntry]) -> Result<Vec<Labelled>, RunError> {
    let cost = config.cost_function()?;
    entries
        .par_iter()
        .map(|entry| {
            let spec = config.generator_spec(entry)?;
            let state = run_policy(config, h, &GeneratorPolicy::Fixed(spec), &cost)?;
            Ok(Labelled { label: entry.label(), state })
        })
        .collect()
}

fn failures(runs: &[Labelled]) -> Option<String> {
    let msgs: Vec<String> = runs
        .iter()
        .filter_map(|r| match &r.state.status {
            RunStatus::Failed(e) => Some(format!("{}: {e}", r.label)),
            _ => None,
        })
        .collect();
    (!msgs.is_empty()).then(|| msgs.join("; "))
}

fn bhmm_compare(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    let h = config.model.hamiltonian()?;
    let cost = CostFunction::OffDiagonalNorm;
    let sched = config.schedule();
    let grid = scan_grid(&sched);
    let entries = config.generator_entries(&DEFAULT_BHMM);
    let labels: Vec<String> = entries.iter().map(|e| e.label()).collect();
    let generators: Vec<Operator<f64>> = entries
        .iter()
        .map(|e| Ok(realize(&config.generator_spec(e)?, Some(&h))?))
        .collect::<Result<_, RunError>>()?;

    // first rotation of every generator
    let curves: Vec<Vec<f64>> = generators.iter().map(|d| scan(&h, d, &cost, &grid)).collect::<Result<_, _>>()?;
    let mut header = vec!["s".to_string()];
    header.extend(labels.iter().cloned());
    let mut dbr = Table::new(&header);
    for (i, &s) in grid.iter().enumerate() {
        let mut row = vec![float(s)];
        row.extend(curves.iter().map(|c| float(c[i])));
        dbr.push(row);
    }

    let f1_0 = f1_off_diagonal_norm(&h);
    let mut minima = Table::new(&["generator", "s", "f1", "decrease"]);
    let mut best_first: Option<(String, f64)> = None;
    for (label, d) in labels.iter().zip(&generators) {
        let first = grid_first_local_min(&h, d, &cost, &sched)?;
        let (s, f1) = (first.as_ref().map(|o| o.s), first.as_ref().map(|o| o.cost));
        let decrease = f1.map(|f| f1_0 - f);
        minima.push(vec![label.clone(), opt_float(s), opt_float(f1), opt_float(decrease)]);
        if let Some(dec) = decrease {
            if best_first.as_ref().map_or(true, |b| dec > b.1) {
                best_first = Some((label.clone(), dec));
            }
        }
    }

    let mut runs = run_bhmm_set(config, &h, &entries)?;
    let gww = run_policy(config, &h, &GeneratorPolicy::Canonical, &cost)?;
    runs.push(Labelled { label: "gww".into(), state: gww });
    let mut dbi = Table::new(&["generator", "step", "s", "f1", "generator_tag"]);
    let mut finals = serde_json::Map::new();
    for r in &runs {
        push_trajectory(&mut dbi, &r.label, &r.state);
        finals.insert(r.label.clone(), json!({ "final_f1": final_f1(&r.state), "steps": r.state.steps.len(), "status": status_text(&r.state.status) }));
    }
    let best_bhmm = runs[..runs.len() - 1]
        .iter()
        .map(|r| (r.label.clone(), final_f1(&r.state)))
        .fold(None, |best: Option<(String, f64)>, x| if best.as_ref().map_or(true, |b| x.1 < b.1) { Some(x) } else { best });

    let mut summary = BTreeMap::new();
    summary.insert("initial_f1".into(), num(f1_0));
    summary.insert("largest_first_decrease".into(), json!(best_first.map(|b| json!({ "generator": b.0, "decrease": b.1 }))));
    summary.insert("best_bhmm".into(), json!(best_bhmm.map(|b| json!({ "generator": b.0, "final_f1": b.1 }))));
    summary.insert("runs".into(), Value::Object(finals));

    let plot = PlotSpec {
        title: "fixed-generator iterations".into(),
        output: "plot.png".into(),
        panels: vec![
            Panel::Columns {
                csv: "bhmm_dbr.csv".into(),
                x: "s".into(),
                ys: labels.clone(),
                title: "first rotation".into(),
                ylabel: "f1".into(),
                log: false,
            },
            Panel::Grouped {
                csv: "bhmm_dbi.csv".into(),
                group: "generator".into(),
                x: "step".into(),
                y: "f1".into(),
                title: "iterations".into(),
                hline: None,
            },
        ],
    };
    Ok(Outputs {
        failure: failures(&runs),
        tables: vec![("bhmm_dbr.csv".into(), dbr), ("bhmm_minima.csv".into(), minima), ("bhmm_dbi.csv".into(), dbi)],
        summary,
        plot,
        ..Default::default()
    })
}

fn adaptive_compare(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    let h = config.model.hamiltonian()?;
    let cost = config.cost_function()?;
    let names = config.adaptive_policies();
    let policies: Vec<GeneratorPolicy<f64>> = names.iter().map(|p| config.parse_policy(p)).collect::<Result<_, _>>()?;
    let adaptive: Vec<Labelled> = names
        .par_iter()
        .zip(&policies)
        .map(|(name, policy)| Ok(Labelled { label: name.clone(), state: run_policy(config, &h, policy, &cost)? }))
        .collect::<Result<_, RunError>>()?;
    let bhmm = run_bhmm_set(config, &h, &config.generator_entries(&DEFAULT_BHMM))?;

    let mut dbi = Table::new(&["policy", "step", "s", "f1", "generator_tag"]);
    let mut summary_table = Table::new(&["run", "kind", "steps", "final_f1", "status"]);
    for (kind, runs) in [("adaptive", &adaptive), ("bhmm", &bhmm)] {
        for r in runs.iter() {
            if kind == "adaptive" {
                push_trajectory(&mut dbi, &r.label, &r.state);
            }
            summary_table.push(vec![
                r.label.clone(),
                kind.into(),
                r.state.steps.len().to_string(),
                float(final_f1(&r.state)),
                status_text(&r.state.status),
            ]);
        }
    }
    let best_bhmm = bhmm.iter().map(|r| (r.label.clone(), final_f1(&r.state))).fold(
        None,
        |best: Option<(String, f64)>, x| if best.as_ref().map_or(true, |b| x.1 < b.1) { Some(x) } else { best },
    );
    let best_adaptive = adaptive.iter().map(|r| (r.label.clone(), final_f1(&r.state))).fold(
        None,
        |best: Option<(String, f64)>, x| if best.as_ref().map_or(true, |b| x.1 < b.1) { Some(x) } else { best },
    );

    let mut summary = BTreeMap::new();
    summary.insert("initial_f1".into(), num(f1_off_diagonal_norm(&h)));
    summary.insert("best_bhmm".into(), json!(best_bhmm.as_ref().map(|b| json!({ "generator": b.0, "final_f1": b.1 }))));
    summary.insert("best_adaptive".into(), json!(best_adaptive.map(|b| json!({ "policy": b.0, "final_f1": b.1 }))));
    let finals: serde_json::Map<String, Value> =
        adaptive.iter().map(|r| (r.label.clone(), num(final_f1(&r.state)))).collect();
    summary.insert("adaptive_final_f1".into(), Value::Object(finals));

    let plot = PlotSpec {
        title: "adaptive iterations".into(),
        output: "plot.png".into(),
        panels: vec![Panel::Grouped {
            csv: "adaptive_dbi.csv".into(),
            group: "policy".into(),
            x: "step".into(),
            y: "f1".into(),
            title: "off-diagonal norm per step".into(),
            hline: best_bhmm.map(|b| (b.1, format!("best BHMM ({})", b.0))),
        }],
    };
    let failure = failures(&adaptive).or_else(|| failures(&bhmm));
    Ok(Outputs {
        failure,
        tables: vec![("adaptive_dbi.csv".into(), dbi), ("adaptive_summary.csv".into(), summary_table)],
        summary,
        plot,
        ..Default::default()
    })
}

fn gc_compare(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    let h = config.model.hamiltonian()?;
    let (label, d) = scan_generator(config, &h)?;
    let sched = config.schedule();
    let grid = scan_grid(&sched);
    let flow = DbrFlow::new(&h, &d)?;
    let prop = FormulaPropagator::new(&h, &d)?;
    let kinds = [FormulaKind::GroupCommutator, FormulaKind::Hopf];

    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&s| {
            let exact_u = flow_unitary(&h, &d, s)?;
            let exact = f1_off_diagonal_norm(&flow.at(s));
            let mut row = vec![s, exact];
            let mut errs = Vec::new();
            for kind in kinds {
                let v = prop.unitary(kind, s)?;
                row.push(f1_off_diagonal_norm(&prop.step(kind, s)?));
                errs.push(dbi_core::product_formulas::approx_error(&v, &exact_u)?);
            }
            row.extend(errs);
            Ok(row)
        })
        .collect::<Result<_, dbi_core::DbiError>>()?;
    let mut table = Table::new(&["s", "f1_exact", "f1_gc", "f1_hopf", "err_gc", "err_hopf"]);
    for row in &rows {
        table.push(row.iter().copied().map(float).collect());
    }

    let (lo, hi, n) = ERROR_GRID;
    let err_s = log_grid(lo, hi, n);
    let err_gc = error_curve(&h, &d, FormulaKind::GroupCommutator, &err_s)?;
    let err_hopf = error_curve(&h, &d, FormulaKind::Hopf, &err_s)?;
    let mut errors = Table::new(&["s", "err_gc", "err_hopf"]);
    for i in 0..err_s.len() {
        errors.push(vec![float(err_s[i]), float(err_gc[i]), float(err_hopf[i])]);
    }

    let argmin = |col: usize| {
        rows.iter().fold((f64::NAN, f64::INFINITY), |best, r| if r[col] < best.1 { (r[0], r[col]) } else { best })
    };
    let mut summary = BTreeMap::new();
    summary.insert("generator".into(), json!(label));
    for (col, name) in [(1, "exact"), (2, "gc"), (3, "hopf")] {
        let (s, v) = argmin(col);
        summary.insert(format!("min_f1_{name}"), num(v));
        summary.insert(format!("argmin_s_{name}"), num(s));
    }
    summary.insert("slope_gc".into(), json!(fit_loglog_slope(&err_s, &err_gc)));
    summary.insert("slope_hopf".into(), json!(fit_loglog_slope(&err_s, &err_hopf)));
    summary.insert(
        "hamiltonian_queries".into(),
        json!({ "gc": FormulaKind::GroupCommutator.hamiltonian_queries(), "hopf": FormulaKind::Hopf.hamiltonian_queries() }),
    );

    let plot = PlotSpec {
        title: "product-formula rotations".into(),
        output: "plot.png".into(),
        panels: vec![
            Panel::Columns {
                csv: "gc_compare.csv".into(),
                x: "s".into(),
                ys: vec!["f1_exact".into(), "f1_gc".into(), "f1_hopf".into()],
                title: format!("one rotation ({label})"),
                ylabel: "f1".into(),
                log: false,
            },
            Panel::Columns {
                csv: "gc_error.csv".into(),
                x: "s".into(),
                ys: vec!["err_gc".into(), "err_hopf".into()],
                title: "unitary error".into(),
                ylabel: "||V - R||".into(),
                log: true,
            },
        ],
    };
    Ok(Outputs {
        tables: vec![("gc_compare.csv".into(), table), ("gc_error.csv".into(), errors)],
        summary,
        plot,
        ..Default::default()
    })
}

fn flow_unitary(h: &Operator<f64>, d: &Operator<f64>, s: f64) -> dbi_core::Result<Operator<f64>> {
    dbi_core::product_formulas::exact_dbr_unitary(h, d, s)
}

fn step_json(step: usize, st: &dbi_core::StepRecord<f64>) -> Value {
    json!({
        "step": step,
        "generator": st.generator,
        "s": st.s,
        "cost_before": st.cost_before,
        "cost_after": st.cost_after,
        "f1": st.f1,
    })
}

fn dbi_run(config: &ExperimentConfig) -> Result<Outputs, RunError> {
    let h = config.model.hamiltonian()?;
    let cost = config.cost_function()?;
    let policy = config.parse_policy(&config.policy)?;
    let state = run_policy(config, &h, &policy, &cost)?;
    let initial_cost = match state.steps.first() {
        Some(st) => st.cost_before,
        None => cost.evaluate_for_generator(&h, &delta_restrict(&h))?,
    };
    let csv = state.trajectory_csv(initial_cost);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().expect("header row").split(',').collect();
    let mut table = Table::new(&header);
    for line in lines {
        table.push(line.split(',').map(str::to_string).collect());
    }

    let final_cost = state.steps.last().map_or(initial_cost, |st| st.cost_after);
    let mut summary = BTreeMap::new();
    summary.insert("policy".into(), json!(config.policy));
    summary.insert("cost".into(), json!(cost.kind().tag()));
    summary.insert("initial_cost".into(), num(initial_cost));
    summary.insert("final_cost".into(), num(final_cost));
    summary.insert("initial_f1".into(), num(f1_off_diagonal_norm(&h)));
    summary.insert("final_f1".into(), num(final_f1(&state)));
    summary.insert("total_s".into(), num(state.total_duration()));
    summary.insert("steps_applied".into(), json!(state.steps.len()));
    summary.insert("status".into(), json!(status_text(&state.status)));

    let plot = PlotSpec {
        title: format!("{} iteration", config.policy),
        output: "plot.png".into(),
        panels: vec![Panel::Columns {
            csv: "trajectory.csv".into(),
            x: "step".into(),
            ys: vec!["f1".into(), "cost_after".into()],
            title: "trajectory".into(),
            ylabel: "value".into(),
            log: false,
        }],
    };
    let failure = match &state.status {
        RunStatus::Failed(e) => Some(e.to_string()),
        _ => None,
    };
    Ok(Outputs {
        steps: state.steps.iter().enumerate().map(|(k, st)| step_json(k + 1, st)).collect(),
        tables: vec![("trajectory.csv".into(), table)],
        summary,
        plot,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dbi_core::generators::GeneratorSpec;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let s = golden_min(|x| (x - 0.3).powi(2), 0.0, 1.0);
        assert!((s - 0.3).abs() < 1e-7);
    }

    #[test]
    fn gc_compare_accepts_explicit_diagonal() {
        let cfg = ExperimentConfig::from_json(
            r#"{"model":{"name":"xxz","L":2,"delta":0.5},"experiment":"gc-compare","generators":[{"kind":"full-diagonal","d":[1,2,3,4]}]}"#,
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        assert!(matches!(cfg.generator_spec(&cfg.generators[0]).unwrap(), GeneratorSpec::FullDiagonal { .. }));
        assert_eq!(out.tables[0].1.header, vec!["s", "f1_exact", "f1_gc", "f1_hopf", "err_gc", "err_hopf"]);
    }
}
