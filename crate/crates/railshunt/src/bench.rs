//! Benchmark harness: generates seeded instances, solves each with the
//! exact solver and the adaptive-grouping heuristic, cross-checks every
//! plan (legality replay plus the integer-model checker), and aggregates
//! optimality gaps, time ratios and state reductions.
//!
//! The time ratio column divides exact-solver time by heuristic time; no
//! external solver is involved. Per-instance failures (state caps,
//! heuristic misses) are recorded and never abort the suite.

use crate::argdp::{solve_argdp, ArgdpConfig};
use crate::counting::{big_ratio, count_states, StateCountParams};
use crate::exact::{solve_exact, ExactConfig, ExactError};
use crate::generator::{gaia, generate, GeneratorParams};
use crate::mip::{check_feasibility, horizon_for_plan, plan_to_assignment};
use crate::yard::{is_final, plan_cost, replay_plan, Plan, YardInstance};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub mixed: usize,
    pub non_mixed: usize,
    /// Use the fixed 14-track layout instead of random layouts.
    pub gaia: bool,
    pub seed: u64,
    pub exact_max_states: usize,
    pub argdp_max_states: usize,
    /// Resample instances until they have at least this many classification
    /// tracks (two are needed for the horizon bound used in the model check).
    pub min_classification: usize,
    pub jobs: usize,
    /// Verify every produced plan against the integer model.
    pub check_model: bool,
    /// Skip the exact solver (heuristic-only runs, e.g. large layouts).
    pub skip_exact: bool,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            mixed: 30,
            non_mixed: 30,
            gaia: false,
            seed: 20_240_001,
            exact_max_states: 5_000_000,
            argdp_max_states: 1_000_000,
            min_classification: 2,
            jobs: 2,
            check_model: true,
            skip_exact: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub id: usize,
    pub seed: u64,
    pub mixed: bool,
    pub tracks: usize,
    pub groups: usize,
    pub exact_cost: Option<f64>,
    pub exact_millis: u128,
    pub exact_states: Option<usize>,
    pub exact_status: String,
    pub argdp_cost: Option<f64>,
    pub argdp_millis: u128,
    pub preprocessing_cost: Option<f64>,
    pub reduced_vertices: Option<usize>,
    /// Closed-form full state count (decimal string; it can be astronomic).
    pub full_states: String,
    pub argdp_status: String,
    pub gap_percent: Option<f64>,
    pub time_ratio: Option<f64>,
    pub reduction_percent: Option<f64>,
    /// Model cross-check over every produced plan: "ok", "skipped", or the
    /// first violation.
    pub model_check: String,
}

impl BenchRecord {
    pub fn failed(&self) -> bool {
        self.exact_status == "error"
            || self.argdp_status != "ok"
            || self.model_check.starts_with("violated")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub label: String,
    pub instances: usize,
    pub mean_exact_cost: Option<f64>,
    pub mean_exact_seconds: Option<f64>,
    pub max_exact_seconds: Option<f64>,
    pub mean_argdp_cost: Option<f64>,
    pub mean_argdp_seconds: Option<f64>,
    pub max_argdp_seconds: Option<f64>,
    pub mean_time_ratio: Option<f64>,
    pub percent_optimal: Option<f64>,
    pub mean_gap_percent: Option<f64>,
    pub max_gap_percent: Option<f64>,
    pub mean_reduction_percent: Option<f64>,
    /// Instances excluded from gap statistics (solver capped or failed).
    pub excluded: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub aggregates: Vec<Aggregate>,
}

pub fn run_suite(spec: &SuiteSpec) -> BenchReport {
    let jobs: Vec<(usize, bool)> = (0..spec.mixed)
        .map(|i| (i, true))
        .chain((0..spec.non_mixed).map(|i| (spec.mixed + i, false)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .expect("thread pool");
    let mut records: Vec<BenchRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(id, mixed)| run_one(spec, id, mixed))
            .collect()
    });
    records.sort_by_key(|r| r.id);
    let aggregates = vec![
        aggregate("mixed", records.iter().filter(|r| r.mixed)),
        aggregate("non-mixed", records.iter().filter(|r| !r.mixed)),
        aggregate("overall", records.iter()),
    ];
    BenchReport {
        records,
        aggregates,
    }
}

pub fn bench_instance(spec: &SuiteSpec, id: usize, instance: &YardInstance, mixed: bool, seed: u64) -> BenchRecord {
    let mut record = BenchRecord {
        id,
        seed,
        mixed,
        tracks: instance.num_tracks(),
        groups: instance.groups.len(),
        exact_cost: None,
        exact_millis: 0,
        exact_states: None,
        exact_status: "skipped".into(),
        argdp_cost: None,
        argdp_millis: 0,
        preprocessing_cost: None,
        reduced_vertices: None,
        full_states: full_state_count(instance)
            .map(|v| v.to_string())
            .unwrap_or_else(|| "?".into()),
        argdp_status: "ok".into(),
        gap_percent: None,
        time_ratio: None,
        reduction_percent: None,
        model_check: "skipped".into(),
    };

    let mut plans: Vec<Plan> = Vec::new();
    if !spec.skip_exact {
        let t0 = Instant::now();
        match solve_exact(
            instance,
            &ExactConfig {
                max_states: spec.exact_max_states,
                ..ExactConfig::default()
            },
        ) {
            Ok(sol) => {
                record.exact_millis = t0.elapsed().as_millis();
                record.exact_cost = Some(sol.plan.total_cost);
                record.exact_states = Some(sol.stats.states);
                record.exact_status = "ok".into();
                plans.push(sol.plan);
            }
            Err(ExactError::ResourceLimit { states }) => {
                record.exact_millis = t0.elapsed().as_millis();
                record.exact_states = Some(states);
                record.exact_status = "capped".into();
            }
            Err(e) => {
                record.exact_millis = t0.elapsed().as_millis();
                record.exact_status = "error".into();
                record.model_check = format!("exact: {e}");
            }
        }
    }

    let t0 = Instant::now();
    match solve_argdp(
        instance,
        &ArgdpConfig {
            max_states: spec.argdp_max_states,
            ..ArgdpConfig::default()
        },
    ) {
        Ok(sol) => {
            record.argdp_millis = t0.elapsed().as_millis();
            record.argdp_cost = Some(sol.stats.total_cost);
            record.preprocessing_cost = Some(sol.stats.preprocessing_cost);
            record.reduced_vertices = Some(sol.stats.reduced_vertices);
            record.reduction_percent = Some(sol.stats.reduction_percent);
            plans.push(sol.plan);
        }
        Err(e) => {
            record.argdp_millis = t0.elapsed().as_millis();
            record.argdp_status = format!("{e}");
        }
    }

    if let (Some(exact), Some(heur)) = (record.exact_cost, record.argdp_cost) {
        record.gap_percent = Some(if exact > 0.0 {
            (heur - exact) / exact * 100.0
        } else {
            0.0
        });
    }
    if record.exact_status == "ok" && record.argdp_cost.is_some() {
        let num = record.exact_millis.max(1) as f64;
        let den = record.argdp_millis.max(1) as f64;
        record.time_ratio = Some(num / den);
    }

    if spec.check_model {
        record.model_check = check_plans(instance, &plans);
    }
    record
}

fn run_one(spec: &SuiteSpec, id: usize, mixed: bool) -> BenchRecord {
    let seed = spec.seed.wrapping_add(id as u64);
    let params = GeneratorParams::default()
        .mixed(mixed)
        .min_classification(spec.min_classification);
    let instance = if spec.gaia {
        gaia(&params, seed)
    } else {
        generate(&params, seed)
    };
    bench_instance(spec, id, &instance, mixed, seed)
}

fn full_state_count(instance: &YardInstance) -> Option<BigUint> {
    count_states(&StateCountParams::from_instance(instance)).ok()
}

/// Replays every plan and checks it against the integer model.
fn check_plans(instance: &YardInstance, plans: &[Plan]) -> String {
    if plans.is_empty() {
        return "skipped".into();
    }
    for plan in plans {
        match replay_plan(instance, plan, true) {
            Ok(end) if is_final(&end, instance) => {}
            Ok(_) => return "violated: plan does not end final".into(),
            Err(e) => return format!("violated: {e}"),
        }
        if (plan_cost(plan, instance) - plan.total_cost).abs() > 1e-6 {
            return "violated: recorded cost differs from replay".into();
        }
        let horizon = horizon_for_plan(instance, plan, crate::horizon::DEFAULT_DELTA);
        match plan_to_assignment(instance, plan, horizon) {
            Ok((model, assignment)) => {
                let report = check_feasibility(&model, &assignment);
                if !report.feasible {
                    let v = &report.violations[0];
                    return format!("violated: row {} (family {})", v.row, v.family);
                }
                if (report.objective - plan.total_cost).abs() > 1e-6 {
                    return "violated: model objective differs from plan cost".into();
                }
            }
            Err(e) => return format!("violated: {e}"),
        }
    }
    "ok".into()
}

fn aggregate<'a>(label: &str, records: impl Iterator<Item = &'a BenchRecord>) -> Aggregate {
    let records: Vec<&BenchRecord> = records.collect();
    let n = records.len();
    let comparable: Vec<&&BenchRecord> = records
        .iter()
        .filter(|r| r.gap_percent.is_some())
        .collect();
    let excluded = n - comparable.len();
    let mean = |xs: &[f64]| {
        if xs.is_empty() {
            None
        } else {
            Some(xs.iter().sum::<f64>() / xs.len() as f64)
        }
    };
    let max = |xs: &[f64]| xs.iter().copied().fold(None, |m: Option<f64>, x| {
        Some(m.map_or(x, |m| m.max(x)))
    });

    let exact_costs: Vec<f64> = records.iter().filter_map(|r| r.exact_cost).collect();
    let exact_secs: Vec<f64> = records
        .iter()
        .filter(|r| r.exact_status == "ok")
        .map(|r| r.exact_millis as f64 / 1000.0)
        .collect();
    let argdp_costs: Vec<f64> = records.iter().filter_map(|r| r.argdp_cost).collect();
    let argdp_secs: Vec<f64> = records
        .iter()
        .filter(|r| r.argdp_cost.is_some())
        .map(|r| r.argdp_millis as f64 / 1000.0)
        .collect();
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.time_ratio).collect();
    let gaps: Vec<f64> = records.iter().filter_map(|r| r.gap_percent).collect();
    let reductions: Vec<f64> = records
        .iter()
        .filter_map(|r| r.reduction_percent)
        .collect();
    let optimal = gaps.iter().filter(|&&g| g.abs() < 1e-9).count();

    Aggregate {
        label: label.to_string(),
        instances: n,
        mean_exact_cost: mean(&exact_costs),
        mean_exact_seconds: mean(&exact_secs),
        max_exact_seconds: max(&exact_secs),
        mean_argdp_cost: mean(&argdp_costs),
        mean_argdp_seconds: mean(&argdp_secs),
        max_argdp_seconds: max(&argdp_secs),
        mean_time_ratio: mean(&ratios),
        percent_optimal: if gaps.is_empty() {
            None
        } else {
            Some(optimal as f64 / gaps.len() as f64 * 100.0)
        },
        mean_gap_percent: mean(&gaps),
        max_gap_percent: max(&gaps),
        mean_reduction_percent: mean(&reductions),
        excluded,
    }
}

/// Reduction percent for a single heuristic run against the closed-form
/// state count, used by callers outside full suites.
pub fn reduction_percent(instance: &YardInstance, reduced_vertices: usize) -> Option<f64> {
    let full = full_state_count(instance)?;
    Some((1.0 - big_ratio(&BigUint::from(reduced_vertices), &full)) * 100.0)
}

const CSV_HEADER: &str = "id,seed,class,tracks,groups,exact_cost,exact_ms,exact_states,exact_status,argdp_cost,argdp_ms,preprocessing_cost,reduced_vertices,full_states,argdp_status,gap_pct,time_ratio,reduction_pct,model_check";

pub fn to_csv(report: &BenchReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.id,
            r.seed,
            if r.mixed { "mixed" } else { "non-mixed" },
            r.tracks,
            r.groups,
            opt(r.exact_cost),
            r.exact_millis,
            r.exact_states.map(|s| s.to_string()).unwrap_or_default(),
            r.exact_status,
            opt(r.argdp_cost),
            r.argdp_millis,
            opt(r.preprocessing_cost),
            r.reduced_vertices.map(|s| s.to_string()).unwrap_or_default(),
            r.full_states,
            r.argdp_status,
            opt(r.gap_percent),
            opt(r.time_ratio),
            opt(r.reduction_percent),
            r.model_check,
        );
    }
    out
}

pub fn to_table(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<4} {:<10} {:>7} {:>9} {:>8} {:>7} {:>9} {:>8} {:>8} {:>10} {:>7}",
        "id", "class", "exact", "exact_ms", "status", "argdp", "argdp_ms", "gap%", "ratio", "reduct%", "check"
    );
    let fo = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
    for r in &report.records {
        let _ = writeln!(
            out,
            "{:<4} {:<10} {:>7} {:>9} {:>8} {:>7} {:>9} {:>8} {:>8} {:>10} {:>7}",
            r.id,
            if r.mixed { "mixed" } else { "non-mixed" },
            fo(r.exact_cost),
            r.exact_millis,
            r.exact_status,
            fo(r.argdp_cost),
            r.argdp_millis,
            fo(r.gap_percent),
            fo(r.time_ratio),
            fo(r.reduction_percent),
            if r.model_check == "ok" { "ok" } else { "!" },
        );
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "{:<10} {:>4} {:>9} {:>10} {:>10} {:>9} {:>10} {:>10} {:>7} {:>7} {:>8} {:>9} {:>5}",
        "class", "n", "ex.obj", "ex.time_s", "ex.max_s", "hz.obj", "hz.time_s", "hz.max_s", "ratio", "%opt", "gap%", "maxgap%", "excl"
    );
    for a in &report.aggregates {
        let _ = writeln!(
            out,
            "{:<10} {:>4} {:>9} {:>10} {:>10} {:>9} {:>10} {:>10} {:>7} {:>7} {:>8} {:>9} {:>5}",
            a.label,
            a.instances,
            fo(a.mean_exact_cost),
            fo(a.mean_exact_seconds),
            fo(a.max_exact_seconds),
            fo(a.mean_argdp_cost),
            fo(a.mean_argdp_seconds),
            fo(a.max_argdp_seconds),
            fo(a.mean_time_ratio),
            fo(a.percent_optimal),
            fo(a.mean_gap_percent),
            fo(a.max_gap_percent),
            a.excluded,
        );
    }
    let _ = writeln!(
        out,
        "\nmean state reduction: {}",
        report
            .aggregates
            .last()
            .and_then(|a| a.mean_reduction_percent)
            .map(|v| format!("{v:.2}%"))
            .unwrap_or_else(|| "-".into())
    );
    out
}

pub fn to_json(report: &BenchReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
