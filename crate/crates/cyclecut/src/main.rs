use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cyclecut::io::{
    parse_instance, render_instance, run_generate, run_solve, run_verify, GenerateParams,
    ProblemKind, ReportStatus, ResultReport, StatsReport,
};

/// Exact solver for parameterized directed feedback vertex set and ordered
/// multicut in DAGs.
#[derive(Parser)]
#[command(name = "cyclecut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print a JSON report.
    ///
    /// Exit code 0 on "solution", 1 on "no", 2 on error.
    Solve {
        /// Instance file in the documented text format.
        file: PathBuf,
        /// Override the parameter k from the instance header.
        #[arg(long)]
        k: Option<usize>,
        /// Also print a human-readable statistics summary to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Generate an instance deterministically and print it to stdout.
    Generate {
        /// Problem kind: dfvs or ordmc.
        #[arg(long)]
        kind: String,
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// Edge probability in [0, 1].
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        /// Parameter k written into the header (and plant size with --planted).
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// RNG seed; identical seeds give byte-identical instances.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Construct the instance around a known solution of size k.
        #[arg(long)]
        planted: bool,
        /// Terminal pairs for ordmc instances.
        #[arg(long, default_value_t = 1)]
        terminals: usize,
    },
    /// Verify a proposed solution against an instance.
    ///
    /// Exit code 0 if valid, 1 if invalid, 2 on error.
    Verify {
        /// Instance file.
        file: PathBuf,
        /// File with the proposed solution: whitespace-separated labels.
        solution: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn print_stats(stats: &StatsReport) {
    eprintln!(
        "nodes={} leaves={} flow_calls={} shrink_steps={} branch_steps={} orderings_tried={}",
        stats.nodes,
        stats.leaves,
        stats.flow_calls,
        stats.shrink_steps,
        stats.branch_steps,
        stats.orderings_tried
    );
}

fn run() -> Result<u8, String> {
    match Cli::parse().command {
        Command::Solve { file, k, stats } => {
            let inst = read(&file).and_then(|text| {
                parse_instance(&text).map_err(|e| format!("{}: {e}", file.display()))
            })?;
            let report = run_solve(&inst, k).map_err(|e| e.to_string())?;
            if stats {
                print_stats(&report.stats);
                eprintln!(
                    "leaf_bound_ok={} wall_time_ms={}",
                    report.leaf_bound_ok, report.wall_time_ms
                );
            }
            println!("{}", serde_json::to_string(&report).expect("serializable report"));
            Ok(match report.status {
                ReportStatus::Solution => 0,
                ReportStatus::No => 1,
                ReportStatus::Error => 2,
            })
        }
        Command::Generate {
            kind,
            n,
            density,
            k,
            seed,
            planted,
            terminals,
        } => {
            let kind = match kind.as_str() {
                "dfvs" => ProblemKind::Dfvs,
                "ordmc" => ProblemKind::Ordmc,
                other => return Err(format!("unknown kind {other:?} (dfvs or ordmc)")),
            };
            let params = GenerateParams {
                kind,
                n,
                density,
                k,
                seed,
                planted,
                terminal_pairs: terminals,
            };
            let inst = run_generate(&params).map_err(|e| e.to_string())?;
            print!("{}", render_instance(&inst));
            Ok(0)
        }
        Command::Verify { file, solution } => {
            let inst = read(&file).and_then(|text| {
                parse_instance(&text).map_err(|e| format!("{}: {e}", file.display()))
            })?;
            let proposed: Vec<usize> = read(&solution)?
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| format!("bad label {f:?}")))
                .collect::<Result<_, _>>()?;
            let report = run_verify(&inst, &proposed);
            println!("{}", serde_json::to_string(&report).expect("serializable report"));
            Ok(if report.valid { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            let report = ResultReport {
                status: ReportStatus::Error,
                solution: None,
                stats: StatsReport::default(),
                leaf_bound_ok: true,
                wall_time_ms: 0,
                message: Some(message),
            };
            println!("{}", serde_json::to_string(&report).expect("serializable report"));
            ExitCode::from(2)
        }
    }
}
