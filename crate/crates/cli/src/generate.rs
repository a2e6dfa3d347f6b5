//! Seeded instance generator.
//!
//! All randomness comes from one `ChaCha8Rng` created with
//! `rand_chacha::ChaCha8Rng::seed_from_u64(seed)`. Values are drawn in a fixed
//! order: geometry first, then point weights, then the matroid. Integer
//! ranges are sampled with `Rng::gen_range` and coin flips with
//! `Rng::gen_bool`, so the same seed and flags always give the same file.
//!
//! Geometries:
//! - `euclidean`: integer coordinates in `0..=coord_max` in `dim` dimensions.
//! - `random-metric`: a random spanning tree plus `n` extra random edges with
//!   integer lengths in `1..=edge_max`, closed under shortest paths, so every
//!   distance is an integer and the triangle inequality holds by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{InstanceFile, MatroidSpec, Points, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Geometry {
    Euclidean,
    RandomMetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatroidKind {
    Uniform,
    Partition,
    Graphic,
    Transversal,
}

impl MatroidKind {
    pub const ALL: [MatroidKind; 4] =
        [MatroidKind::Uniform, MatroidKind::Partition, MatroidKind::Graphic, MatroidKind::Transversal];
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenOptions {
    pub seed: u64,
    pub n: usize,
    pub weight_min: u32,
    pub weight_max: u32,
    /// Absolute coverage target; overrides `m_fraction`.
    pub m: Option<f64>,
    /// Target as a fraction of the total weight, rounded down.
    pub m_fraction: Option<f64>,
    pub matroid: MatroidKind,
    /// Upper bound on the rank of the generated matroid.
    pub rank: usize,
    pub classes: Option<usize>,
    pub geometry: Geometry,
    pub dim: Option<usize>,
    pub coord_max: u32,
    pub edge_max: u32,
}

impl Default for GenOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 10,
            weight_min: 1,
            weight_max: 5,
            m: None,
            m_fraction: None,
            matroid: MatroidKind::Uniform,
            rank: 3,
            classes: None,
            geometry: Geometry::RandomMetric,
            dim: None,
            coord_max: 20,
            edge_max: 10,
        }
    }
}

pub const DEFAULT_M_FRACTION: f64 = 0.7;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("--n must be at least 1")]
    NoPoints,
    #[error("--rank must be at least 1")]
    ZeroRank,
    #[error("weight range {0}..={1} is empty")]
    WeightRange(u32, u32),
    #[error("--m and --m-fraction are mutually exclusive")]
    TwoTargets,
    #[error("--m-fraction must lie in [0, 1], got {0}")]
    Fraction(f64),
    #[error("--m must be a nonnegative number, got {0}")]
    Target(f64),
    #[error("--classes only applies to --matroid partition")]
    ClassesWithoutPartition,
    #[error("--classes must be at least 1")]
    ZeroClasses,
    #[error("--dim only applies to --geometry euclidean")]
    DimWithoutEuclidean,
    #[error("--dim must be at least 1")]
    ZeroDim,
    #[error("--edge-max must be at least 1")]
    ZeroEdge,
}

impl GenOptions {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::NoPoints);
        }
        if self.rank == 0 {
            return Err(GenError::ZeroRank);
        }
        if self.weight_min > self.weight_max {
            return Err(GenError::WeightRange(self.weight_min, self.weight_max));
        }
        if self.m.is_some() && self.m_fraction.is_some() {
            return Err(GenError::TwoTargets);
        }
        if let Some(f) = self.m_fraction {
            if !(0.0..=1.0).contains(&f) {
                return Err(GenError::Fraction(f));
            }
        }
        if let Some(m) = self.m {
            if !m.is_finite() || m < 0.0 {
                return Err(GenError::Target(m));
            }
        }
        match self.classes {
            Some(_) if self.matroid != MatroidKind::Partition => {
                return Err(GenError::ClassesWithoutPartition)
            }
            Some(0) => return Err(GenError::ZeroClasses),
            _ => {}
        }
        match self.dim {
            Some(_) if self.geometry != Geometry::Euclidean => {
                return Err(GenError::DimWithoutEuclidean)
            }
            Some(0) => return Err(GenError::ZeroDim),
            _ => {}
        }
        if self.geometry == Geometry::RandomMetric && self.edge_max == 0 {
            return Err(GenError::ZeroEdge);
        }
        Ok(())
    }
}

pub fn generate(opts: &GenOptions) -> Result<InstanceFile, GenError> {
    opts.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = opts.n;

    let points = match opts.geometry {
        Geometry::Euclidean => {
            let dim = opts.dim.unwrap_or(2);
            Points::Euclidean(
                (0..n)
                    .map(|_| (0..dim).map(|_| rng.gen_range(0..=opts.coord_max) as f64).collect())
                    .collect(),
            )
        }
        Geometry::RandomMetric => Points::Matrix(random_metric(&mut rng, n, opts.edge_max)),
    };

    let weights: Vec<f64> =
        (0..n).map(|_| rng.gen_range(opts.weight_min..=opts.weight_max) as f64).collect();
    let matroid = random_matroid(&mut rng, opts, n);

    let total: f64 = weights.iter().fold(0.0, |a, w| a + w);
    let m = match opts.m {
        Some(m) => m,
        None => (opts.m_fraction.unwrap_or(DEFAULT_M_FRACTION) * total).floor(),
    };
    Ok(InstanceFile { format: FORMAT_VERSION, points, weights, m, matroid })
}

/// Shortest-path closure of a random connected graph with integer edge lengths.
fn random_metric(rng: &mut ChaCha8Rng, n: usize, edge_max: u32) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let add = |d: &mut Vec<Vec<f64>>, a: usize, b: usize, w: f64| {
        if a != b && w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    };
    for i in 1..n {
        let a = order[i];
        let b = order[rng.gen_range(0..i)];
        let w = rng.gen_range(1..=edge_max) as f64;
        add(&mut d, a, b, w);
    }
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let w = rng.gen_range(1..=edge_max) as f64;
        add(&mut d, a, b, w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn random_matroid(rng: &mut ChaCha8Rng, opts: &GenOptions, n: usize) -> MatroidSpec {
    let rank = opts.rank;
    match opts.matroid {
        MatroidKind::Uniform => MatroidSpec::Uniform { k: rank },
        MatroidKind::Partition => {
            let c = opts.classes.unwrap_or(rank.min(3));
            let classes: Vec<usize> = (0..n).map(|_| rng.gen_range(0..c)).collect();
            // capacity goes to the class of a random point, so rank is at least 1
            let mut capacities = vec![0; c];
            for _ in 0..rank {
                capacities[classes[rng.gen_range(0..n)]] += 1;
            }
            MatroidSpec::Partition { classes, capacities }
        }
        MatroidKind::Graphic => {
            let vertices = rank + 1;
            let edges = (0..n)
                .map(|_| {
                    let a = rng.gen_range(0..vertices);
                    let b = (a + rng.gen_range(1..vertices)) % vertices;
                    (a, b)
                })
                .collect();
            MatroidSpec::Graphic { vertices, edges }
        }
        MatroidKind::Transversal => {
            let family = (0..rank)
                .map(|_| {
                    let mut member: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                    if member.is_empty() {
                        member.push(rng.gen_range(0..n));
                    }
                    member
                })
                .collect();
            MatroidSpec::Transversal { family }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rmc_core::Matroid;

    #[test]
    fn same_seed_same_file() {
        for kind in MatroidKind::ALL {
            let opts = GenOptions { seed: 7, matroid: kind, ..Default::default() };
            assert_eq!(generate(&opts).unwrap().to_json(), generate(&opts).unwrap().to_json());
        }
        let a = generate(&GenOptions { seed: 1, ..Default::default() }).unwrap();
        let b = generate(&GenOptions { seed: 2, ..Default::default() }).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn euclidean_instances_are_metric() {
        let opts = GenOptions { geometry: Geometry::Euclidean, dim: Some(2), ..Default::default() };
        let mut inst = generate(&opts).unwrap().instance().unwrap();
        assert!(inst.validate_metric().is_empty());
    }

    #[test]
    fn random_metrics_are_integer_metrics() {
        for seed in 0..20 {
            let opts = GenOptions { seed, n: 12, ..Default::default() };
            let mut inst = generate(&opts).unwrap().instance().unwrap();
            assert!(inst.validate_metric().is_empty());
            assert!(inst.candidate_radii().values().iter().all(|r| r.fract() == 0.0));
        }
    }

    #[test]
    fn partition_capacities_are_positive() {
        for seed in 0..20 {
            let opts = GenOptions {
                seed,
                matroid: MatroidKind::Partition,
                classes: Some(3),
                ..Default::default()
            };
            let file = generate(&opts).unwrap();
            let MatroidSpec::Partition { capacities, .. } = &file.matroid else { unreachable!() };
            assert!(capacities.iter().sum::<usize>() >= 1);
        }
    }

    #[test]
    fn generated_ranks_respect_the_bound() {
        for seed in 0..40 {
            for kind in MatroidKind::ALL {
                let opts = GenOptions { seed, n: 8, matroid: kind, rank: 4, ..Default::default() };
                let (_, m) = generate(&opts).unwrap().build().unwrap();
                assert!(m.rank() <= 4 && m.rank() >= 1, "{kind:?}");
            }
        }
    }

    #[test]
    fn contradictory_flags() {
        let bad = [
            GenOptions { classes: Some(2), ..Default::default() },
            GenOptions { dim: Some(2), ..Default::default() },
            GenOptions { m: Some(1.0), m_fraction: Some(0.5), ..Default::default() },
            GenOptions { weight_min: 3, weight_max: 1, ..Default::default() },
            GenOptions { n: 0, ..Default::default() },
            GenOptions { m_fraction: Some(1.5), ..Default::default() },
        ];
        for opts in &bad {
            assert!(generate(opts).is_err(), "{opts:?}");
        }
    }
}
