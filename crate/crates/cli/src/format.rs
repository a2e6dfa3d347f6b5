//! JSON file formats: instances, solutions and run reports.
//!
//! Instance files look like
//!
//! ```json
//! {"format": 1,
//!  "points": {"matrix": [[0, 1], [1, 0]]},
//!  "weights": [1, 1],
//!  "m": 2,
//!  "matroid": {"type": "uniform", "k": 1}}
//! ```
//!
//! `points` is either `{"matrix": [[...], ...]}` or
//! `{"euclidean": [[x, y, ...], ...]}`. The matroid ground set is always the
//! point set; per type the remaining fields are
//!
//! | type          | fields                                            |
//! |---------------|---------------------------------------------------|
//! | `uniform`     | `k`                                               |
//! | `partition`   | `classes` (class per point), `capacities`         |
//! | `graphic`     | `vertices`, `edges` (one `[a, b]` per point)      |
//! | `transversal` | `family` (list of point lists)                    |
//! | `explicit`    | `independent_sets` (every independent set)        |

use std::path::Path;

use rmc_core::solver::{GreedyStep, RadiusProbe, Solution};
use rmc_core::{
    AnyMatroid, ExplicitMatroid, GraphicMatroid, MatroidError, MetricError, MetricInstance,
    PartitionMatroid, TransversalMatroid, UniformMatroid,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}: field `{field}`: {message} (line {line}, column {column})")]
    Schema { file: String, field: String, message: String, line: usize, column: usize },
    #[error("unsupported format version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("matroid: {0}")]
    Matroid(#[from] MatroidError),
    #[error("matroid: {0}")]
    MatroidShape(String),
    #[error("instance: {0}")]
    Metric(#[from] MetricError),
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub points: Points,
    pub weights: Vec<f64>,
    pub m: f64,
    pub matroid: MatroidSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Points {
    Matrix(Vec<Vec<f64>>),
    Euclidean(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform { k: usize },
    Partition { classes: Vec<usize>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Transversal { family: Vec<Vec<usize>> },
    Explicit { independent_sets: Vec<Vec<usize>> },
}

impl MatroidSpec {
    /// Builds the matroid over a ground set of `n` points.
    pub fn build(&self, n: usize) -> Result<AnyMatroid, FormatError> {
        let m = match self {
            MatroidSpec::Uniform { k } => AnyMatroid::Uniform(UniformMatroid::new(n, *k)),
            MatroidSpec::Partition { classes, capacities } => {
                if classes.len() != n {
                    return Err(FormatError::MatroidShape(format!(
                        "partition lists {} classes for {n} points",
                        classes.len()
                    )));
                }
                AnyMatroid::Partition(PartitionMatroid::new(classes.clone(), capacities.clone())?)
            }
            MatroidSpec::Graphic { vertices, edges } => {
                if edges.len() != n {
                    return Err(FormatError::MatroidShape(format!(
                        "graphic matroid has {} edges for {n} points",
                        edges.len()
                    )));
                }
                AnyMatroid::Graphic(GraphicMatroid::new(*vertices, edges.clone())?)
            }
            MatroidSpec::Transversal { family } => {
                AnyMatroid::Transversal(TransversalMatroid::new(n, family.clone())?)
            }
            MatroidSpec::Explicit { independent_sets } => {
                AnyMatroid::Explicit(ExplicitMatroid::new(n, independent_sets)?)
            }
        };
        Ok(m)
    }
}

impl InstanceFile {
    pub fn parse(text: &str, file: &str) -> Result<Self, FormatError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let parsed: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            FormatError::Schema {
                file: file.to_string(),
                field,
                message: inner.to_string(),
                line: inner.line(),
                column: inner.column(),
            }
        })?;
        if parsed.format != FORMAT_VERSION {
            return Err(FormatError::Version(parsed.format));
        }
        Ok(parsed)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn instance(&self) -> Result<MetricInstance, FormatError> {
        let inst = match &self.points {
            Points::Matrix(m) => MetricInstance::from_matrix(m.clone(), self.weights.clone(), self.m)?,
            Points::Euclidean(p) => MetricInstance::from_euclidean(p, self.weights.clone(), self.m)?,
        };
        Ok(inst)
    }

    pub fn build(&self) -> Result<(MetricInstance, AnyMatroid), FormatError> {
        let inst = self.instance()?;
        let matroid = self.matroid.build(inst.len())?;
        Ok((inst, matroid))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub center: usize,
    pub marginal_weight: f64,
    pub uncovered_after: usize,
    pub probes: usize,
}

impl From<&GreedyStep> for TraceStep {
    fn from(s: &GreedyStep) -> Self {
        Self {
            center: s.center,
            marginal_weight: s.marginal_weight,
            uncovered_after: s.uncovered_after,
            probes: s.probes,
        }
    }
}

/// Solution as written by `solve` and read by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub r: f64,
    pub radius: f64,
    pub centers: Vec<usize>,
    pub representative_map: Vec<(usize, usize)>,
    pub covered_weight: f64,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl SolutionFile {
    pub fn from_solution(sol: &Solution, with_trace: bool) -> Self {
        Self {
            r: sol.r,
            radius: sol.radius,
            centers: sol.centers.clone(),
            representative_map: sol.representative_map.clone(),
            covered_weight: sol.covered_weight,
            feasible: sol.feasible,
            trace: with_trace.then(|| sol.trace.iter().map(TraceStep::from).collect()),
        }
    }

    /// Back to a core [`Solution`]; a missing trace becomes empty.
    pub fn to_solution(&self) -> Solution {
        Solution {
            r: self.r,
            radius: self.radius,
            centers: self.centers.clone(),
            representative_map: self.representative_map.clone(),
            covered_weight: self.covered_weight,
            feasible: self.feasible,
            trace: self
                .trace
                .iter()
                .flatten()
                .map(|s| GreedyStep {
                    center: s.center,
                    marginal_weight: s.marginal_weight,
                    uncovered_after: s.uncovered_after,
                    probes: s.probes,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub r: f64,
    pub success: bool,
    pub covered_weight: f64,
    pub iterations: usize,
    pub rado_probes: usize,
    pub max_probes_per_iteration: usize,
    pub base_oracle_calls: u64,
}

impl From<&RadiusProbe> for ProbeRecord {
    fn from(p: &RadiusProbe) -> Self {
        Self {
            r: p.r,
            success: p.success,
            covered_weight: p.covered_weight,
            iterations: p.iterations,
            rado_probes: p.rado_probes,
            max_probes_per_iteration: p.max_probes_per_iteration,
            base_oracle_calls: p.base_oracle_calls,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instrumentation {
    pub n: usize,
    pub rank: usize,
    pub radius_probes: Vec<ProbeRecord>,
    pub total_rado_probes: usize,
    pub total_base_oracle_calls: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl Instrumentation {
    pub fn new(n: usize, rank: usize, probes: &[RadiusProbe]) -> Self {
        Self {
            n,
            rank,
            radius_probes: probes.iter().map(ProbeRecord::from).collect(),
            total_rado_probes: probes.iter().map(|p| p.rado_probes).sum(),
            total_base_oracle_calls: probes.iter().map(|p| p.base_oracle_calls).sum(),
            wall_ms: None,
        }
    }

    /// Every greedy run did `rank` iterations with at most `n` probes each.
    pub fn within_bounds(&self) -> bool {
        self.radius_probes
            .iter()
            .all(|p| p.iterations == self.rank && p.max_probes_per_iteration <= self.n)
    }
}

/// Output of `solve`: the solution fields plus instrumentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format: u32,
    pub status: String,
    #[serde(flatten)]
    pub solution: SolutionFile,
    pub instrumentation: Instrumentation,
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Reads a solution from a `solve` report or a bare solution object.
pub fn parse_solution(text: &str, file: &str) -> Result<SolutionFile, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        FormatError::Schema {
            file: file.to_string(),
            field,
            message: inner.to_string(),
            line: inner.line(),
            column: inner.column(),
        }
    })
}
