use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rmc_cli::bench::{bench_dir, BenchFlags};
use rmc_cli::commands::{self, Output, SolveFlags, Status};
use rmc_cli::generate::{generate, GenOptions, Geometry, MatroidKind};
use rmc_core::exact::DEFAULT_MAX_ENUM;

/// Robust Matroid Center solver.
///
/// Exit codes: 0 feasible or all checks passed, 1 input error,
/// 2 infeasible or some check failed.
#[derive(Parser)]
#[command(name = "rmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the greedy radius search and print a JSON report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        out: OutArg,
        /// Reject instances whose distances violate the metric axioms.
        #[arg(long)]
        validate_metric: bool,
        /// Run the greedy once at this radius guess instead of searching.
        #[arg(long, value_name = "R")]
        fixed_r: Option<f64>,
        /// Include the per-iteration trace.
        #[arg(long)]
        trace: bool,
        /// Include wall time (makes the output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Solve exactly by enumerating independent sets.
    Exact {
        instance: PathBuf,
        #[command(flatten)]
        out: OutArg,
        /// Maximum number of independent sets to enumerate.
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
        #[arg(long)]
        validate_metric: bool,
    },
    /// Generate a random instance from a seed.
    Gen(GenArgs),
    /// Re-check a solution (or a `solve` report) against an instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Solve every `*.json` instance in a directory and print a CSV table.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
        /// Skip the exact solver.
        #[arg(long)]
        no_exact: bool,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    weight_min: u32,
    #[arg(long, default_value_t = 5)]
    weight_max: u32,
    /// Absolute coverage target.
    #[arg(long)]
    m: Option<f64>,
    /// Coverage target as a fraction of the total weight (default 0.7).
    #[arg(long)]
    m_fraction: Option<f64>,
    #[arg(long, value_enum, default_value_t = MatroidKind::Uniform)]
    matroid: MatroidKind,
    /// Upper bound on the matroid rank.
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// Number of partition classes.
    #[arg(long)]
    classes: Option<usize>,
    #[arg(long, value_enum, default_value_t = Geometry::RandomMetric)]
    geometry: Geometry,
    /// Euclidean dimension (default 2).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 20)]
    coord_max: u32,
    #[arg(long, default_value_t = 10)]
    edge_max: u32,
    #[command(flatten)]
    out: OutArg,
}

impl GenArgs {
    fn options(&self) -> GenOptions {
        GenOptions {
            seed: self.seed,
            n: self.n,
            weight_min: self.weight_min,
            weight_max: self.weight_max,
            m: self.m,
            m_fraction: self.m_fraction,
            matroid: self.matroid,
            rank: self.rank,
            classes: self.classes,
            geometry: self.geometry,
            dim: self.dim,
            coord_max: self.coord_max,
            edge_max: self.edge_max,
        }
    }
}

fn emit(out: &OutArg, text: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let (out, result): (&OutArg, Output) = match &cli.command {
        Command::Solve { instance, out, validate_metric, fixed_r, trace, timing } => {
            let flags = SolveFlags {
                validate_metric: *validate_metric,
                fixed_r: *fixed_r,
                trace: *trace,
                timing: *timing,
            };
            (out, commands::solve(instance, &flags)?)
        }
        Command::Exact { instance, out, max_enum, validate_metric } => {
            (out, commands::exact(instance, *max_enum, *validate_metric)?)
        }
        Command::Gen(args) => {
            let file = generate(&args.options())?;
            (&args.out, Output { text: file.to_json(), status: Status::Ok })
        }
        Command::Verify { instance, solution, out } => (out, commands::verify(instance, solution)?),
        Command::Bench { dir, out, max_enum, no_exact } => {
            let res = bench_dir(dir, BenchFlags { max_enum: *max_enum, skip_exact: *no_exact })?;
            for e in &res.errors {
                eprintln!("error: {}: {}", e.file, e.message);
            }
            let status = if !res.all_passed() {
                Status::Failed
            } else if !res.errors.is_empty() {
                Status::InputError
            } else {
                Status::Ok
            };
            (out, Output { text: res.to_csv(), status })
        }
    };
    emit(out, &result.text)?;
    Ok(result.status)
}

fn main() -> ExitCode {
    // clap's own usage-error code is 2, which means "infeasible" here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::InputError.code() as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::InputError.code() as u8)
        }
    }
}
