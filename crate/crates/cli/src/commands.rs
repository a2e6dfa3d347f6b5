//! Subcommand implementations. Each returns the text to emit and the exit
//! status; `main` only parses flags and writes output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use rmc_core::exact::{exact_solve, ExactResult};
use rmc_core::solver::{RadiusProbe, RadiusSearch, SearchOutcome};
use rmc_core::{greedy_fixed_radius, verify_solution, AnyMatroid, Matroid, MetricInstance};
use serde::Serialize;

use crate::format::{
    parse_solution, to_pretty_json, InstanceFile, Instrumentation, RunReport, SolutionFile,
    FORMAT_VERSION,
};

/// Stable exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Feasible, or every check passed.
    Ok = 0,
    /// Malformed input, guardrail hit or I/O failure.
    InputError = 1,
    /// Infeasible, or some check failed.
    Failed = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub status: Status,
}

fn load(path: &Path, validate_metric: bool) -> anyhow::Result<(MetricInstance, AnyMatroid)> {
    let (mut inst, matroid) = InstanceFile::load(path)?.build()?;
    if validate_metric {
        let violations = inst.validate_metric();
        if !violations.is_empty() {
            let shown: Vec<String> = violations.iter().take(5).map(|v| format!("{v:?}")).collect();
            bail!(
                "{}: not a metric ({} violations): {}",
                path.display(),
                violations.len(),
                shown.join(", ")
            );
        }
    }
    Ok((inst, matroid))
}

#[derive(Debug, Clone, Default)]
pub struct SolveFlags {
    pub validate_metric: bool,
    /// Run the greedy at this radius guess only.
    pub fixed_r: Option<f64>,
    pub trace: bool,
    /// Record wall time in the report. Off by default so reports are
    /// byte-reproducible.
    pub timing: bool,
}

pub fn solve_report(path: &Path, flags: &SolveFlags) -> anyhow::Result<RunReport> {
    let (inst, matroid) = load(path, flags.validate_metric)?;
    let start = Instant::now();
    let (solution, probes) = match flags.fixed_r {
        Some(r) => {
            let run = greedy_fixed_radius(&inst, &matroid, r)?;
            let sol = run.to_solution(&inst);
            let probe = RadiusProbe {
                r,
                success: sol.feasible,
                covered_weight: sol.covered_weight,
                iterations: run.trace.len(),
                rado_probes: run.rado_probes(),
                max_probes_per_iteration: run.max_probes_per_iteration(),
                base_oracle_calls: run.base_oracle_calls,
            };
            (sol, vec![probe])
        }
        None => {
            let search = RadiusSearch::run(&inst, &matroid)?;
            let sol = match search.outcome {
                SearchOutcome::Feasible(s) | SearchOutcome::Infeasible(s) => s,
            };
            (sol, search.probes)
        }
    };
    let mut instrumentation = Instrumentation::new(inst.len(), matroid.rank(), &probes);
    if flags.timing {
        instrumentation.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(RunReport {
        format: FORMAT_VERSION,
        status: if solution.feasible { "feasible" } else { "infeasible" }.to_string(),
        solution: SolutionFile::from_solution(&solution, flags.trace),
        instrumentation,
    })
}

pub fn solve(path: &Path, flags: &SolveFlags) -> anyhow::Result<Output> {
    let report = solve_report(path, flags)?;
    let status = if report.solution.feasible { Status::Ok } else { Status::Failed };
    Ok(Output { text: to_pretty_json(&report), status })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageRow {
    pub r: f64,
    pub best_weight: f64,
    pub best_set: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub format: u32,
    pub status: String,
    pub opt_radius: Option<f64>,
    pub witness: Option<Vec<usize>>,
    pub enumerated: usize,
    pub coverage_table: Vec<CoverageRow>,
}

impl From<&ExactResult> for ExactReport {
    fn from(res: &ExactResult) -> Self {
        Self {
            format: FORMAT_VERSION,
            status: if res.is_feasible() { "feasible" } else { "infeasible" }.to_string(),
            opt_radius: res.opt_radius,
            witness: res.witness.clone(),
            enumerated: res.enumerated,
            coverage_table: res
                .coverage_table
                .iter()
                .map(|row| CoverageRow {
                    r: row.r,
                    best_weight: row.best_weight,
                    best_set: row.best_set.clone(),
                })
                .collect(),
        }
    }
}

pub fn exact(path: &Path, max_enum: usize, validate_metric: bool) -> anyhow::Result<Output> {
    let (inst, matroid) = load(path, validate_metric)?;
    let res = exact_solve(&inst, &matroid, max_enum)
        .with_context(|| format!("{}: exact solve refused (raise --max-enum)", path.display()))?;
    let status = if res.is_feasible() { Status::Ok } else { Status::Failed };
    Ok(Output { text: to_pretty_json(&ExactReport::from(&res)), status })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub format: u32,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

pub fn verify(instance: &Path, solution: &Path) -> anyhow::Result<Output> {
    let (inst, matroid) = load(instance, false)?;
    let text = std::fs::read_to_string(solution)
        .with_context(|| format!("reading {}", solution.display()))?;
    let sol = parse_solution(&text, &solution.display().to_string())?.to_solution();
    let report = verify_solution(&inst, &matroid, &sol);
    let out = VerifyReport {
        format: FORMAT_VERSION,
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckRecord { name: c.name.to_string(), passed: c.passed, detail: c.detail.clone() })
            .collect(),
    };
    let status = if out.passed { Status::Ok } else { Status::Failed };
    Ok(Output { text: to_pretty_json(&out), status })
}

/// Instance files (`*.json`) in `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}
