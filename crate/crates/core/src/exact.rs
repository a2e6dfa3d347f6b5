//! Brute-force reference answers: exact Robust Matroid Center by enumerating
//! independent sets, exhaustive Rado and intersection checks, and matroid
//! axiom checks. Only meant for small instances; every routine refuses
//! oversized input instead of truncating.

use thiserror::Error;

use crate::matroid::{check_set, elements_of, Matroid, MatroidError};
use crate::metric::MetricInstance;
use crate::rado::RadoSystem;

/// Default cap on the number of independent sets enumerated.
pub const DEFAULT_MAX_ENUM: usize = 1 << 20;
/// Largest `|J|` accepted by [`exhaustive_rado_check`].
pub const MAX_RADO_CHECK: usize = 7;
/// Largest ground set for subset enumeration.
pub const MAX_SUBSET_GROUND: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("enumeration exceeded the cap of {cap} sets")]
    TooManySets { cap: usize },
    #[error("set of size {size} exceeds the exhaustive limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("base matroid has {base} elements but the instance has {points} points")]
    SizeMismatch { base: usize, points: usize },
    #[error(transparent)]
    Set(#[from] MatroidError),
}

/// Every independent set of `base`, each sorted, in lexicographic order.
///
/// Depth-first extension in ascending element order; an element is only
/// tried on top of an independent prefix.
pub fn independent_sets(base: &dyn Matroid, cap: usize) -> Result<Vec<Vec<usize>>, ExactError> {
    fn walk(
        base: &dyn Matroid,
        from: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<(), ExactError> {
        if out.len() >= cap {
            return Err(ExactError::TooManySets { cap });
        }
        out.push(current.clone());
        for e in from..base.ground_size() {
            current.push(e);
            if base.independent(current) {
                walk(base, e + 1, current, out, cap)?;
            }
            current.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(base, 0, &mut Vec::new(), &mut out, cap)?;
    Ok(out)
}

/// Largest `w(B(F, r))` over the given sets and the first set attaining it.
fn best_over(inst: &MetricInstance, sets: &[Vec<usize>], r: f64) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for f in sets {
        let w = inst.ball_union_weight(f, r).expect("sets come from the matroid ground");
        if w > best.0 {
            best = (w, f.clone());
        }
    }
    best
}

fn check_sizes(inst: &MetricInstance, base: &dyn Matroid) -> Result<(), ExactError> {
    if base.ground_size() != inst.len() {
        return Err(ExactError::SizeMismatch { base: base.ground_size(), points: inst.len() });
    }
    Ok(())
}

/// `max w(B(F, r))` over independent `F`, with the lexicographically
/// smallest maximizer.
pub fn best_coverage_at(
    inst: &MetricInstance,
    base: &dyn Matroid,
    r: f64,
    cap: usize,
) -> Result<(f64, Vec<usize>), ExactError> {
    check_sizes(inst, base)?;
    let sets = independent_sets(base, cap)?;
    Ok(best_over(inst, &sets, r))
}

/// Best coverage attainable at one candidate radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusCoverage {
    pub r: f64,
    pub best_weight: f64,
    pub best_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    /// Smallest candidate radius with a covering independent set; `None` if
    /// even the largest radius is not enough.
    pub opt_radius: Option<f64>,
    /// Lexicographically smallest best-coverage set at `opt_radius`.
    pub witness: Option<Vec<usize>>,
    /// One row per candidate radius, ascending.
    pub coverage_table: Vec<RadiusCoverage>,
    /// Number of independent sets enumerated.
    pub enumerated: usize,
}

impl ExactResult {
    pub fn is_feasible(&self) -> bool {
        self.opt_radius.is_some()
    }

    /// Best coverage at candidate radius `r`.
    pub fn best_at(&self, r: f64) -> Option<&RadiusCoverage> {
        self.coverage_table.iter().find(|row| row.r == r)
    }
}

/// Exact optimum over all candidate radii.
pub fn exact_solve(
    inst: &MetricInstance,
    base: &dyn Matroid,
    cap: usize,
) -> Result<ExactResult, ExactError> {
    check_sizes(inst, base)?;
    let sets = independent_sets(base, cap)?;
    let m = inst.coverage_target();
    let coverage_table: Vec<RadiusCoverage> = inst
        .candidate_radii()
        .values()
        .iter()
        .map(|&r| {
            let (best_weight, best_set) = best_over(inst, &sets, r);
            RadiusCoverage { r, best_weight, best_set }
        })
        .collect();
    let hit = coverage_table.iter().find(|row| row.best_weight >= m);
    Ok(ExactResult {
        opt_radius: hit.map(|row| row.r),
        witness: hit.map(|row| row.best_set.clone()),
        enumerated: sets.len(),
        coverage_table,
    })
}

/// Rado independence by definition: tries every injection `φ: J → X` with
/// `φ(y) ∈ X_y` and asks the base oracle about each image.
pub fn exhaustive_rado_check(system: &RadoSystem<'_>, j: &[usize]) -> Result<bool, ExactError> {
    if j.len() > MAX_RADO_CHECK {
        return Err(ExactError::TooLarge { size: j.len(), limit: MAX_RADO_CHECK });
    }
    check_set(system.len(), j)?;

    fn assign(system: &RadoSystem<'_>, j: &[usize], image: &mut Vec<usize>) -> bool {
        let Some(&y) = j.get(image.len()) else {
            return system.base().independent(image);
        };
        for &x in system.candidate_set(y) {
            if image.contains(&x) {
                continue;
            }
            image.push(x);
            let found = assign(system, j, image);
            image.pop();
            if found {
                return true;
            }
        }
        false
    }
    Ok(assign(system, j, &mut Vec::with_capacity(j.len())))
}

/// Size of the largest set independent in both matroids, by checking every
/// subset of the ground set.
pub fn brute_force_intersection(
    first: &dyn Matroid,
    second: &dyn Matroid,
) -> Result<usize, ExactError> {
    let n = first.ground_size();
    if n > MAX_SUBSET_GROUND {
        return Err(ExactError::TooLarge { size: n, limit: MAX_SUBSET_GROUND });
    }
    Ok((0usize..1 << n)
        .map(elements_of)
        .filter(|s| first.independent(s) && second.independent(s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0))
}

/// A failed matroid axiom, with the sets involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptySetDependent,
    /// `subset ⊆ set`, `set` independent, `subset` not.
    NotDownwardClosed { set: Vec<usize>, subset: Vec<usize> },
    /// No element of `larger ∖ smaller` extends `smaller`.
    Exchange { smaller: Vec<usize>, larger: Vec<usize> },
}

/// Exhaustively checks the matroid axioms for the family accepted by `m`.
pub fn check_axioms(m: &dyn Matroid) -> Result<(), AxiomViolation> {
    let n = m.ground_size();
    assert!(n <= 16, "axiom check enumerates 4^n pairs; ground {n} is too large");
    let member: Vec<bool> = (0usize..1 << n).map(|mask| m.independent(&elements_of(mask))).collect();
    if !member[0] {
        return Err(AxiomViolation::EmptySetDependent);
    }
    for mask in 0..member.len() {
        if !member[mask] {
            continue;
        }
        for e in 0..n {
            let sub = mask & !(1 << e);
            if sub != mask && !member[sub] {
                return Err(AxiomViolation::NotDownwardClosed {
                    set: elements_of(mask),
                    subset: elements_of(sub),
                });
            }
        }
    }
    for small in 0..member.len() {
        if !member[small] {
            continue;
        }
        for large in 0..member.len() {
            if !member[large] || large.count_ones() <= small.count_ones() {
                continue;
            }
            let ok = elements_of(large & !small).into_iter().any(|e| member[small | (1 << e)]);
            if !ok {
                return Err(AxiomViolation::Exchange {
                    smaller: elements_of(small),
                    larger: elements_of(large),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{PartitionMatroid, UniformMatroid};

    fn line(xs: &[f64], m: f64) -> MetricInstance {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        MetricInstance::from_euclidean(&pts, vec![1.0; xs.len()], m).unwrap()
    }

    #[test]
    fn single_point_optimum_is_zero() {
        let inst = line(&[0.0], 1.0);
        let res = exact_solve(&inst, &UniformMatroid::new(1, 1), DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(res.opt_radius, Some(0.0));
        assert_eq!(res.witness, Some(vec![0]));
    }

    #[test]
    fn unreachable_target() {
        let inst = line(&[0.0, 1.0], 2.5);
        let res = exact_solve(&inst, &UniformMatroid::new(2, 2), DEFAULT_MAX_ENUM).unwrap();
        assert!(!res.is_feasible());
        assert_eq!(res.witness, None);
    }

    #[test]
    fn three_points_on_a_line() {
        // singletons {0},{1},{2} at radii 0,1,2: coverage 1,1,1 / 2,3,2 / 3,3,3
        let inst = line(&[0.0, 1.0, 2.0], 3.0);
        let res = exact_solve(&inst, &UniformMatroid::new(3, 1), DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(res.opt_radius, Some(1.0));
        assert_eq!(res.witness, Some(vec![1]));
        let weights: Vec<f64> = res.coverage_table.iter().map(|row| row.best_weight).collect();
        assert_eq!(weights, vec![1.0, 3.0, 3.0]);
        assert_eq!(res.best_at(2.0).unwrap().best_set, vec![0]);
    }

    #[test]
    fn enumeration_is_lexicographic_and_capped() {
        let sets = independent_sets(&UniformMatroid::new(3, 2), 100).unwrap();
        assert_eq!(
            sets,
            vec![vec![], vec![0], vec![0, 1], vec![0, 2], vec![1], vec![1, 2], vec![2]]
        );
        assert_eq!(
            independent_sets(&UniformMatroid::new(3, 2), 5),
            Err(ExactError::TooManySets { cap: 5 })
        );
    }

    #[test]
    fn rado_check_basics() {
        let base = UniformMatroid::new(3, 3);
        let sys = RadoSystem::new(&base, vec![vec![0, 1], vec![], vec![1]]).unwrap();
        assert!(exhaustive_rado_check(&sys, &[]).unwrap());
        assert!(!exhaustive_rado_check(&sys, &[1]).unwrap());
        assert!(exhaustive_rado_check(&sys, &[0, 2]).unwrap());
        let big: Vec<usize> = (0..8).collect();
        let base = UniformMatroid::new(8, 8);
        let sys = RadoSystem::new(&base, vec![vec![0]; 8]).unwrap();
        assert!(matches!(exhaustive_rado_check(&sys, &big), Err(ExactError::TooLarge { .. })));
    }

    #[test]
    fn axiom_checker_detects_violations() {
        assert_eq!(check_axioms(&UniformMatroid::new(4, 2)), Ok(()));
        assert_eq!(check_axioms(&PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap()), Ok(()));

        struct PairsOnly;
        impl Matroid for PairsOnly {
            fn ground_size(&self) -> usize {
                3
            }
            fn independent(&self, set: &[usize]) -> bool {
                set.len() != 1
            }
        }
        assert!(matches!(check_axioms(&PairsOnly), Err(AxiomViolation::NotDownwardClosed { .. })));

        struct Lopsided;
        impl Matroid for Lopsided {
            fn ground_size(&self) -> usize {
                3
            }
            fn independent(&self, set: &[usize]) -> bool {
                set.len() <= 1 || set == [0, 1]
            }
        }
        assert!(matches!(check_axioms(&Lopsided), Err(AxiomViolation::Exchange { .. })));
    }
}
