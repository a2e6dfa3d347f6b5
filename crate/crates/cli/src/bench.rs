//! Corpus benchmark: solve every instance in a directory, compare with the
//! exact optimum when it is within the guardrail, and emit one CSV row per
//! instance.
//!
//! Rows come out in file-name order even though instances are solved in
//! parallel. Files that fail to load or solve produce an error line instead
//! of a row.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use rmc_core::exact::exact_solve;
use rmc_core::solver::{RadiusSearch, SearchOutcome, RADIUS_FACTOR};
use rmc_core::Matroid;
use serde::Serialize;

use crate::commands::corpus_files;
use crate::format::{InstanceFile, Instrumentation};

#[derive(Debug, Clone, Copy)]
pub struct BenchFlags {
    pub max_enum: usize,
    /// Skip the exact solver; `opt` and `ratio` stay empty.
    pub skip_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub file: String,
    pub n: usize,
    pub rank: usize,
    pub matroid: String,
    /// The distance matrix passed the metric check.
    pub metric: bool,
    pub status: String,
    pub opt: Option<f64>,
    pub r: Option<f64>,
    pub radius: Option<f64>,
    pub ratio: Option<f64>,
    pub radius_probes: usize,
    pub rado_probes: usize,
    pub max_probes_per_iteration: usize,
    pub base_oracle_calls: u64,
    /// Every greedy run did `rank` iterations with at most `n` probes each.
    pub bounds_ok: bool,
    pub ms: f64,
}

impl BenchRow {
    /// Ratio at most the radius factor on metric instances, instrumentation
    /// within bounds, and no exact-feasible instance reported infeasible.
    pub fn passed(&self) -> bool {
        let ratio_ok = !self.metric || self.ratio.is_none_or(|q| q <= RADIUS_FACTOR);
        let missed = self.opt.is_some() && self.radius.is_none();
        ratio_ok && self.bounds_ok && !missed
    }
}

#[derive(Debug, Clone)]
pub struct BenchError {
    pub file: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub errors: Vec<BenchError>,
}

impl BenchResult {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(HEADER).expect("in-memory write");
        }
        for row in &self.rows {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(BenchRow::passed)
    }
}

pub const HEADER: [&str; 16] = [
    "file",
    "n",
    "rank",
    "matroid",
    "metric",
    "status",
    "opt",
    "r",
    "radius",
    "ratio",
    "radius_probes",
    "rado_probes",
    "max_probes_per_iteration",
    "base_oracle_calls",
    "bounds_ok",
    "ms",
];

/// `radius / opt`, with `0/0 = 1`.
pub fn ratio(radius: f64, opt: f64) -> f64 {
    if opt == 0.0 {
        if radius == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        radius / opt
    }
}

fn bench_file(path: &Path, flags: BenchFlags) -> Result<BenchRow, String> {
    let start = Instant::now();
    let file = InstanceFile::load(path).map_err(|e| e.to_string())?;
    let (mut inst, matroid) = file.build().map_err(|e| e.to_string())?;
    let metric = inst.validate_metric().is_empty();
    let search = RadiusSearch::run(&inst, &matroid).map_err(|e| e.to_string())?;
    let rank = matroid.rank();
    let instr = Instrumentation::new(inst.len(), rank, &search.probes);
    let (status, r, radius) = match &search.outcome {
        SearchOutcome::Feasible(s) => ("feasible", Some(s.r), Some(s.radius)),
        SearchOutcome::Infeasible(_) => ("infeasible", None, None),
    };
    let opt = if flags.skip_exact {
        None
    } else {
        match exact_solve(&inst, &matroid, flags.max_enum) {
            Ok(res) => res.opt_radius,
            Err(rmc_core::exact::ExactError::TooManySets { .. }) => None,
            Err(e) => return Err(e.to_string()),
        }
    };
    let ratio = match (radius, opt) {
        (Some(rad), Some(o)) => Some(ratio(rad, o)),
        _ => None,
    };
    Ok(BenchRow {
        file: path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()),
        n: inst.len(),
        rank,
        matroid: matroid.kind().to_string(),
        metric,
        status: status.to_string(),
        opt,
        r,
        radius,
        ratio,
        radius_probes: instr.radius_probes.len(),
        rado_probes: instr.total_rado_probes,
        max_probes_per_iteration: instr
            .radius_probes
            .iter()
            .map(|p| p.max_probes_per_iteration)
            .max()
            .unwrap_or(0),
        base_oracle_calls: instr.total_base_oracle_calls,
        bounds_ok: instr.within_bounds(),
        ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn bench_files(files: &[PathBuf], flags: BenchFlags) -> BenchResult {
    let results: Vec<(String, Result<BenchRow, String>)> = files
        .par_iter()
        .map(|p| (p.display().to_string(), bench_file(p, flags)))
        .collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (file, res) in results {
        match res {
            Ok(row) => rows.push(row),
            Err(message) => errors.push(BenchError { file, message }),
        }
    }
    BenchResult { rows, errors }
}

pub fn bench_dir(dir: &Path, flags: BenchFlags) -> anyhow::Result<BenchResult> {
    Ok(bench_files(&corpus_files(dir)?, flags))
}
