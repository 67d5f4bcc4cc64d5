//! Command-line front end; every subcommand is a thin wrapper over the
//! library. See the crate examples for the same operations as code.

use clap::{Args, Parser, Subcommand};
use railshunt::argdp::{solve_argdp, ArgdpConfig};
use railshunt::bench::{run_suite, to_csv, to_json, to_table, SuiteSpec};
use railshunt::counting::{count_states, state_reduction, StateCountParams};
use railshunt::exact::{render_dot, solve_exact, ExactConfig};
use railshunt::generator::{gaia, generate, GeneratorParams};
use railshunt::horizon::{compute_horizon, DEFAULT_DELTA};
use railshunt::mip::{check_feasibility, export_mps, plan_to_assignment};
use railshunt::stacksort::{
    build_rspsc_instance, rspsc_conflicts, transform_zsss_to_rspsc, zsss_conflicts,
    DigitSequence, Provenance,
};
use railshunt::yard::{Plan, YardInstance};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "railshunt", about = "Railcar shunting solver toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Generate an instance on the fixed 14-track layout.
    Gaia(GenArgs),
    /// Solve an instance exactly or with the adaptive-grouping heuristic.
    Solve(SolveArgs),
    /// Run the constructive horizon heuristic and print T and its plan.
    Horizon {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: usize,
    },
    /// Integer-model operations.
    Mip {
        #[command(subcommand)]
        command: MipCommand,
    },
    /// Print the conflict graph of a sequence, e.g. "2 4 3 6 1 8 7 5".
    Conflicts {
        sequence: String,
        #[arg(long, default_value = "zsss")]
        flavor: String,
    },
    /// Transform a sequence so batch-move conflicts mirror its single-move
    /// conflicts.
    Transform { sequence: String },
    /// Write a certificate instance whose optimal cost is n*R exactly when
    /// the sequence sorts without shuffles.
    RspscGen {
        sequence: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 0.0, help = "re-handling cost; defaults to n*r + 1")]
        cbar: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Closed-form state-space size (and optional reduction percentages).
    CountStates(CountArgs),
    /// Run a benchmark suite comparing the exact solver and the heuristic.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    mixed: bool,
    /// Resample until at least this many classification tracks exist.
    #[arg(long, default_value_t = 1)]
    min_kc: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Exact minimum-cost search (default).
    #[arg(long, conflicts_with = "argdp")]
    exact: bool,
    /// Adaptive-grouping heuristic.
    #[arg(long)]
    argdp: bool,
    #[arg(long)]
    max_states: Option<usize>,
    /// Write the full state graph in DOT format to this path (exact only).
    #[arg(long)]
    emit_graph: Option<PathBuf>,
    /// Print solver statistics as JSON.
    #[arg(long)]
    stats: bool,
    /// Write the plan to this path instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MipCommand {
    /// Write the model as MPS text.
    Export {
        instance: PathBuf,
        /// Number of periods, or "auto" for the horizon heuristic's T.
        #[arg(long, default_value = "auto")]
        horizon: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a plan against every model constraint.
    Check {
        instance: PathBuf,
        plan: PathBuf,
        #[arg(long, default_value = "auto")]
        horizon: String,
    },
}

#[derive(Args)]
struct CountArgs {
    /// Instance file to read the parameters from.
    #[arg(long, conflicts_with_all = ["groups", "free", "tracks", "kc", "per_departure"])]
    instance: Option<PathBuf>,
    #[arg(long)]
    groups: Option<u64>,
    #[arg(long, default_value_t = 0)]
    free: u64,
    #[arg(long)]
    tracks: Option<u64>,
    #[arg(long)]
    kc: Option<u64>,
    /// Comma-separated group counts per departure track, e.g. "5,1,6".
    #[arg(long)]
    per_departure: Option<String>,
    /// Remove this many free groups in the reduction.
    #[arg(long, default_value_t = 0)]
    cut_free: u64,
    /// Remove this many classification tracks in the reduction.
    #[arg(long, default_value_t = 0)]
    cut_tracks: u64,
    /// Comma-separated per-departure group cuts.
    #[arg(long)]
    cut_per_departure: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 30)]
    mixed: usize,
    #[arg(long, default_value_t = 30)]
    non_mixed: usize,
    #[arg(long)]
    gaia: bool,
    #[arg(long, default_value_t = 20_240_001)]
    seed: u64,
    #[arg(long, default_value_t = 5_000_000)]
    exact_max_states: usize,
    #[arg(long, default_value_t = 1_000_000)]
    argdp_max_states: usize,
    #[arg(long, default_value_t = 2)]
    min_kc: usize,
    #[arg(long, default_value_t = 2)]
    jobs: usize,
    /// Skip the exact solver (heuristic-only run).
    #[arg(long)]
    skip_exact: bool,
    /// Skip the per-plan integer-model cross-check.
    #[arg(long)]
    no_model_check: bool,
    /// csv, table or json.
    #[arg(long, default_value = "table")]
    format: String,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Gen(args) => {
            let params = GeneratorParams::default()
                .mixed(args.mixed)
                .min_classification(args.min_kc);
            let inst = generate(&params, args.seed);
            emit(&args.out, &serde_json::to_string_pretty(&inst)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gaia(args) => {
            let params = GeneratorParams::default()
                .mixed(args.mixed)
                .min_classification(args.min_kc);
            let inst = gaia(&params, args.seed);
            emit(&args.out, &serde_json::to_string_pretty(&inst)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => solve_command(args),
        Command::Horizon { instance, delta } => {
            let inst = read_instance(&instance)?;
            let res = compute_horizon(&inst, delta)?;
            println!("T = {}", res.t);
            for (step, mv) in res.plan.moves.iter().enumerate() {
                println!("  {:>3}: {}", step + 1, mv);
            }
            println!("plan cost = {}", res.plan.total_cost);
            Ok(ExitCode::SUCCESS)
        }
        Command::Mip { command } => mip_command(command),
        Command::Conflicts { sequence, flavor } => {
            let values = parse_sequence(&sequence)?;
            let graph = match flavor.as_str() {
                "zsss" => zsss_conflicts(&values),
                "rspsc" => rspsc_conflicts(&DigitSequence::from_values(&values)),
                other => return Err(format!("unknown flavor {other:?}").into()),
            };
            for (a, b) in &graph.edges {
                println!("{a} -- {b}");
            }
            println!("{} conflicts", graph.edges.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform { sequence } => {
            let values = parse_sequence(&sequence)?;
            let res = transform_zsss_to_rspsc(&values)?;
            let rendered: Vec<String> = res
                .sequence
                .items
                .iter()
                .map(|it| match it.provenance {
                    Provenance::Original => it.value.to_string(),
                    Provenance::SetV => format!("{}v", it.value),
                    Provenance::Dummy => format!("{}d", it.value),
                })
                .collect();
            println!("{}", rendered.join(" "));
            for (orig, new) in &res.value_map {
                println!("  {orig} -> {new}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::RspscGen {
            sequence,
            k,
            cbar,
            r,
            out,
        } => {
            let values = parse_sequence(&sequence)?;
            let cbar = if cbar > 0.0 {
                cbar
            } else {
                values.len() as f64 * r + 1.0
            };
            let inst = build_rspsc_instance(&values, k, cbar, r)?;
            emit(&out, &serde_json::to_string_pretty(&inst)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CountStates(args) => count_command(args),
        Command::Bench(args) => bench_command(args),
    }
}

fn solve_command(args: SolveArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let inst = read_instance(&args.instance)?;
    if args.argdp {
        let mut config = ArgdpConfig::default();
        if let Some(m) = args.max_states {
            config.max_states = m;
        }
        let sol = solve_argdp(&inst, &config)?;
        if args.stats {
            let stats = serde_json::json!({
                "pc": sol.stats.preprocessing_cost,
                "path_cost": sol.stats.path_cost,
                "total": sol.stats.total_cost,
                "v_hat": sol.stats.reduced_vertices,
                "v_full": sol.stats.full_states.to_string(),
                "reduction_pct": sol.stats.reduction_percent,
            });
            eprintln!("{stats}");
        }
        emit(&args.out, &serde_json::to_string_pretty(&sol.plan)?)?;
    } else {
        let mut config = ExactConfig::default();
        if let Some(m) = args.max_states {
            config.max_states = m;
        }
        if let Some(path) = &args.emit_graph {
            let dot = render_dot(&inst, &config)?;
            std::fs::write(path, dot)?;
        }
        let sol = solve_exact(&inst, &config)?;
        if args.stats {
            let stats = serde_json::json!({
                "total": sol.plan.total_cost,
                "moves": sol.plan.moves.len(),
                "states": sol.stats.states,
                "expanded": sol.stats.expanded,
                "edges": sol.stats.edges,
            });
            eprintln!("{stats}");
        }
        emit(&args.out, &serde_json::to_string_pretty(&sol.plan)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn mip_command(command: MipCommand) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        MipCommand::Export {
            instance,
            horizon,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let t = parse_horizon(&inst, &horizon)?;
            let model = railshunt::mip::build_mip(&inst, t)?;
            emit(&out, &export_mps(&model))?;
            Ok(ExitCode::SUCCESS)
        }
        MipCommand::Check {
            instance,
            plan,
            horizon,
        } => {
            let inst = read_instance(&instance)?;
            let plan: Plan = serde_json::from_str(&std::fs::read_to_string(plan)?)?;
            let t = parse_horizon(&inst, &horizon)?.max(plan.moves.len());
            let (model, assignment) = plan_to_assignment(&inst, &plan, t)?;
            let report = check_feasibility(&model, &assignment);
            println!(
                "feasible: {} (objective {}, {} rows checked)",
                report.feasible, report.objective, report.rows_checked
            );
            for v in report.violations.iter().take(20) {
                println!(
                    "  violated family ({}) row {}: lhs {} vs rhs {}",
                    v.family, v.row, v.lhs, v.rhs
                );
            }
            Ok(if report.feasible {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn count_command(args: CountArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let params = if let Some(path) = &args.instance {
        StateCountParams::from_instance(&read_instance(path)?)
    } else {
        let per: Vec<u64> = match &args.per_departure {
            Some(s) => s
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let tracks = args.tracks.ok_or("--tracks required without --instance")?;
        let kc = args.kc.ok_or("--kc required without --instance")?;
        let groups = args
            .groups
            .unwrap_or(args.free + per.iter().sum::<u64>());
        StateCountParams {
            total_groups: groups,
            free_groups: args.free,
            tracks,
            classification_tracks: kc,
            n_per_departure: per,
        }
    };
    let total = count_states(&params)?;
    println!("|V| = {total}");
    if args.cut_free > 0 || args.cut_tracks > 0 || args.cut_per_departure.is_some() {
        let cuts: Vec<u64> = match &args.cut_per_departure {
            Some(s) => s
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()?,
            None => vec![0; params.n_per_departure.len()],
        };
        let red = state_reduction(&params, &cuts, args.cut_free, args.cut_tracks)?;
        println!("ratio = {:.6}", red.ratio);
        println!("decrease = {:.2}%", red.percent_decrease);
    }
    Ok(ExitCode::SUCCESS)
}

fn bench_command(args: BenchArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let spec = SuiteSpec {
        mixed: args.mixed,
        non_mixed: args.non_mixed,
        gaia: args.gaia,
        seed: args.seed,
        exact_max_states: args.exact_max_states,
        argdp_max_states: args.argdp_max_states,
        min_classification: args.min_kc,
        jobs: args.jobs,
        check_model: !args.no_model_check,
        skip_exact: args.skip_exact,
    };
    let report = run_suite(&spec);
    let rendered = match args.format.as_str() {
        "csv" => to_csv(&report),
        "json" => to_json(&report),
        "table" => to_table(&report),
        other => return Err(format!("unknown format {other:?}").into()),
    };
    emit(&args.out, &rendered)?;
    let failures = report.records.iter().filter(|r| r.failed()).count();
    if failures > 0 {
        eprintln!("{failures} instance(s) failed");
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn read_instance(path: &Path) -> Result<YardInstance, Box<dyn std::error::Error>> {
    let inst: YardInstance = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    inst.validate()?;
    Ok(inst)
}

fn parse_horizon(
    inst: &YardInstance,
    text: &str,
) -> Result<usize, Box<dyn std::error::Error>> {
    if text == "auto" {
        Ok(compute_horizon(inst, DEFAULT_DELTA)?.t.max(1))
    } else {
        Ok(text.parse()?)
    }
}

fn parse_sequence(text: &str) -> Result<Vec<u32>, Box<dyn std::error::Error>> {
    text.split_whitespace()
        .map(|x| x.parse().map_err(Into::into))
        .collect()
}

fn emit(path: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}
