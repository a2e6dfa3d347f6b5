//! Greedy selection over the relaxed matroid for a fixed radius guess, and
//! the boundary search over candidate radii that turns it into a
//! 5-approximation.

use std::collections::HashMap;

use thiserror::Error;

use crate::matroid::{check_set, CountingOracle, Matroid};
use crate::metric::{MetricError, MetricInstance};
use crate::rado::{RadoError, RadoSystem, RepresentativeMap};

/// Factor between the radius guess and the radius of the returned solution.
pub const RADIUS_FACTOR: f64 = 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("base matroid has {base} elements but the instance has {points} points")]
    SizeMismatch { base: usize, points: usize },
    #[error("radius {0} is negative or not finite")]
    BadRadius(f64),
    #[error("no Rado-independent candidate in iteration {iteration} although rank is {rank}; the independence oracle is inconsistent")]
    NoCandidate { iteration: usize, rank: usize },
    #[error("infeasible: best coverage {covered_weight} at radius {radius} is below the target {target}")]
    Infeasible { radius: f64, covered_weight: f64, target: f64 },
    #[error(transparent)]
    Rado(#[from] RadoError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// One iteration of the greedy loop.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    pub center: usize,
    /// `w(B(center, r) ∩ U)` before removal
    pub marginal_weight: f64,
    /// `|U|` after removing `B(center, 3r)`
    pub uncovered_after: usize,
    /// Rado independence probes spent in this iteration
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyRun {
    pub r: f64,
    /// Picked centers in pick order.
    pub centers: Vec<usize>,
    pub trace: Vec<GreedyStep>,
    pub representatives: RepresentativeMap,
    pub rank: usize,
    /// Queries answered by the base oracle during the run.
    pub base_oracle_calls: u64,
}

impl GreedyRun {
    /// Representatives of the picked centers, sorted.
    pub fn representative_set(&self) -> Vec<usize> {
        self.representatives.image()
    }

    pub fn rado_probes(&self) -> usize {
        self.trace.iter().map(|s| s.probes).sum()
    }

    pub fn max_probes_per_iteration(&self) -> usize {
        self.trace.iter().map(|s| s.probes).max().unwrap_or(0)
    }

    pub fn to_solution(&self, inst: &MetricInstance) -> Solution {
        let centers = self.representative_set();
        let radius = RADIUS_FACTOR * self.r;
        let covered_weight = inst
            .ball_union_weight(&centers, radius)
            .expect("representatives are points of the instance");
        Solution {
            r: self.r,
            radius,
            centers,
            representative_map: self.representatives.pairs().to_vec(),
            covered_weight,
            feasible: covered_weight >= inst.coverage_target(),
            trace: self.trace.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Radius guess the greedy ran with.
    pub r: f64,
    /// `5r`
    pub radius: f64,
    /// Independent center set, sorted.
    pub centers: Vec<usize>,
    /// `(picked point, representative)` pairs, sorted by picked point.
    pub representative_map: Vec<(usize, usize)>,
    /// `w(B(centers, radius))`
    pub covered_weight: f64,
    pub feasible: bool,
    pub trace: Vec<GreedyStep>,
}

/// Runs the greedy selection for radius guess `r`.
///
/// Each of the `rank(base)` iterations picks, among points not yet picked
/// that keep the picked set independent in the relaxed matroid, one
/// maximizing the uncovered weight within distance `r` (ties to the smaller
/// index), then marks everything within `3r` of it as covered. Candidates
/// are probed in order of decreasing uncovered weight, so the first accepted
/// one is the maximizer.
pub fn greedy_fixed_radius(
    inst: &MetricInstance,
    base: &dyn Matroid,
    r: f64,
) -> Result<GreedyRun, SolveError> {
    if !r.is_finite() || r < 0.0 {
        return Err(SolveError::BadRadius(r));
    }
    if base.ground_size() != inst.len() {
        return Err(SolveError::SizeMismatch { base: base.ground_size(), points: inst.len() });
    }
    let counted = CountingOracle::new(base);
    let rank = counted.rank();
    let system = RadoSystem::build_relax(inst, &counted, r)?;
    let mut extender = system.extender();

    let n = inst.len();
    let mut uncovered = vec![true; n];
    let mut uncovered_count = n;
    let mut picked = vec![false; n];
    let mut centers = Vec::with_capacity(rank);
    let mut trace = Vec::with_capacity(rank);

    for iteration in 0..rank {
        let mut order: Vec<(f64, usize)> = (0..n)
            .filter(|&t| !picked[t])
            .map(|t| {
                let gain = inst
                    .ball_iter(t, r)
                    .filter(|&v| uncovered[v])
                    .fold(0.0, |acc, v| acc + inst.weight(v));
                (gain, t)
            })
            .collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut probes = 0;
        let mut chosen = None;
        for &(gain, t) in &order {
            probes += 1;
            if extender.try_extend(t)? {
                chosen = Some((gain, t));
                break;
            }
        }
        let Some((marginal_weight, center)) = chosen else {
            return Err(SolveError::NoCandidate { iteration, rank });
        };

        picked[center] = true;
        centers.push(center);
        for v in inst.ball_iter(center, 3.0 * r) {
            if uncovered[v] {
                uncovered[v] = false;
                uncovered_count -= 1;
            }
        }
        trace.push(GreedyStep { center, marginal_weight, uncovered_after: uncovered_count, probes });
    }

    let representatives = system.representatives(&centers)?;
    Ok(GreedyRun {
        r,
        centers,
        trace,
        representatives,
        rank,
        base_oracle_calls: counted.calls(),
    })
}

/// One evaluated radius during the boundary search.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProbe {
    pub r: f64,
    pub success: bool,
    pub covered_weight: f64,
    pub iterations: usize,
    pub rado_probes: usize,
    pub max_probes_per_iteration: usize,
    pub base_oracle_calls: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Feasible(Solution),
    /// The greedy fails even at the largest candidate radius; carries that run.
    Infeasible(Solution),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSearch {
    /// Radii in the order they were evaluated, each at most once.
    pub probes: Vec<RadiusProbe>,
    pub outcome: SearchOutcome,
}

impl RadiusSearch {
    /// Finds adjacent candidate radii `r_{i-1} < r_i` where the greedy fails
    /// at `r_{i-1}` and succeeds at `r_i`, or succeeds at `0`.
    ///
    /// Success need not be monotone in the radius; bisection keeps a failing
    /// lower end and a succeeding upper end and stops when they are adjacent.
    pub fn run(inst: &MetricInstance, base: &dyn Matroid) -> Result<Self, SolveError> {
        let radii = inst.candidate_radii();
        let radii = radii.values();
        let mut memo: HashMap<usize, Solution> = HashMap::new();
        let mut probes = Vec::new();
        let mut eval = |i: usize| -> Result<bool, SolveError> {
            if let Some(sol) = memo.get(&i) {
                return Ok(sol.feasible);
            }
            let run = greedy_fixed_radius(inst, base, radii[i])?;
            let sol = run.to_solution(inst);
            probes.push(RadiusProbe {
                r: radii[i],
                success: sol.feasible,
                covered_weight: sol.covered_weight,
                iterations: run.trace.len(),
                rado_probes: run.rado_probes(),
                max_probes_per_iteration: run.max_probes_per_iteration(),
                base_oracle_calls: run.base_oracle_calls,
            });
            let ok = sol.feasible;
            memo.insert(i, sol);
            Ok(ok)
        };

        let last = radii.len() - 1;
        let chosen = if eval(0)? {
            Some(0)
        } else if !eval(last)? {
            None
        } else {
            let (mut lo, mut hi) = (0, last);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if eval(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(hi)
        };
        let outcome = match chosen {
            Some(i) => SearchOutcome::Feasible(memo.remove(&i).expect("evaluated")),
            None => SearchOutcome::Infeasible(memo.remove(&last).expect("evaluated")),
        };
        Ok(Self { probes, outcome })
    }
}

/// Boundary search returning the feasible solution, or
/// [`SolveError::Infeasible`] when even the largest radius fails.
pub fn search_radius(inst: &MetricInstance, base: &dyn Matroid) -> Result<Solution, SolveError> {
    match RadiusSearch::run(inst, base)?.outcome {
        SearchOutcome::Feasible(sol) => Ok(sol),
        SearchOutcome::Infeasible(sol) => Err(SolveError::Infeasible {
            radius: sol.radius,
            covered_weight: sol.covered_weight,
            target: inst.coverage_target(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check { name, passed, detail });
    }
}

/// Recomputes everything a [`Solution`] claims. Never fails; problems are
/// reported as failed checks.
pub fn verify_solution(
    inst: &MetricInstance,
    base: &dyn Matroid,
    sol: &Solution,
) -> VerificationReport {
    let mut report = VerificationReport::default();

    let ground_ok = base.ground_size() == inst.len();
    report.push(
        "ground_size",
        ground_ok,
        format!("matroid {} / points {}", base.ground_size(), inst.len()),
    );

    let valid = check_set(inst.len(), &sol.centers);
    report.push(
        "centers_valid",
        valid.is_ok(),
        valid.err().map_or_else(|| "ok".to_string(), |e| e.to_string()),
    );
    let centers_ok = ground_ok && check_set(inst.len(), &sol.centers).is_ok();

    let independent = centers_ok && base.independent(&sol.centers);
    report.push("centers_independent", independent, format!("{:?}", sol.centers));

    let radius_ok = sol.radius == RADIUS_FACTOR * sol.r;
    report.push("radius_factor", radius_ok, format!("radius {} for r {}", sol.radius, sol.r));

    let recomputed = if centers_ok {
        inst.ball_union_weight(&sol.centers, sol.radius).ok()
    } else {
        None
    };
    match recomputed {
        Some(w) => {
            report.push(
                "covered_weight",
                w == sol.covered_weight,
                format!("reported {} recomputed {}", sol.covered_weight, w),
            );
            report.push(
                "coverage_target",
                w >= inst.coverage_target(),
                format!("covered {} target {}", w, inst.coverage_target()),
            );
            report.push(
                "feasible_flag",
                sol.feasible == (w >= inst.coverage_target()),
                format!("flag {}", sol.feasible),
            );
        }
        None => {
            for name in ["covered_weight", "coverage_target", "feasible_flag"] {
                report.push(name, false, "centers invalid".into());
            }
        }
    }

    if !sol.representative_map.is_empty() {
        let mut image: Vec<usize> = sol.representative_map.iter().map(|&(_, rep)| rep).collect();
        image.sort_unstable();
        let n = inst.len();
        let in_range = sol.representative_map.iter().all(|&(t, rep)| t < n && rep < n);
        let matches = image == sol.centers;
        let reach = 2.0 * sol.r;
        let close = in_range && sol.representative_map.iter().all(|&(t, rep)| inst.dist(t, rep) <= reach);
        report.push("representatives_match_centers", in_range && matches, format!("{image:?}"));
        report.push("representatives_within_2r", close, format!("reach {reach}"));
    }
    report
}
