//! Finite weighted metric spaces, closed balls and candidate radii.

use thiserror::Error;

/// Absolute slack allowed by [`MetricInstance::validate_metric`].
pub const METRIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("distance matrix row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("{n} points but {len} weights")]
    WeightCount { n: usize, len: usize },
    #[error("distance d({i},{j}) = {value} is negative or not finite")]
    BadDistance { i: usize, j: usize, value: f64 },
    #[error("weight of point {i} = {value} is negative or not finite")]
    BadWeight { i: usize, value: f64 },
    #[error("coverage target {0} is negative or not finite")]
    BadTarget(f64),
    #[error("point {0} has {1} coordinates, expected {2}")]
    Dimension(usize, usize, usize),
    #[error("coordinate of point {0} is not finite")]
    BadCoordinate(usize),
    #[error("point index {index} out of range for {n} points")]
    OutOfRange { index: usize, n: usize },
}

/// A problem instance: `n` points with a distance matrix, nonnegative
/// weights and the weight `m` that has to be covered.
///
/// The matrix is only checked for shape and sign at construction. Symmetry,
/// zero diagonal and the triangle inequality are verified on request by
/// [`MetricInstance::validate_metric`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricInstance {
    n: usize,
    dist: Vec<f64>,
    weights: Vec<f64>,
    coverage_target: f64,
    metric_checked: bool,
}

/// One way in which a distance matrix fails to be a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricViolation {
    /// `d(i,i) != 0`.
    Diagonal { i: usize, value: f64 },
    /// `d(i,j) != d(j,i)`, reported once with `i < j`.
    Asymmetric { i: usize, j: usize },
    /// `d(i,j) > d(i,k) + d(k,j)` beyond [`METRIC_TOLERANCE`].
    Triangle { i: usize, j: usize, k: usize },
}

impl MetricInstance {
    pub fn from_matrix(
        matrix: Vec<Vec<f64>>,
        weights: Vec<f64>,
        coverage_target: f64,
    ) -> Result<Self, MetricError> {
        let n = matrix.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in matrix.into_iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::NotSquare { row: i, len: row.len(), n });
            }
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(MetricError::BadDistance { i, j, value });
                }
            }
            dist.extend(row);
        }
        Self::from_flat(n, dist, weights, coverage_target)
    }

    /// Expands Euclidean coordinates into a distance matrix.
    pub fn from_euclidean(
        points: &[Vec<f64>],
        weights: Vec<f64>,
        coverage_target: f64,
    ) -> Result<Self, MetricError> {
        let n = points.len();
        let dim = points.first().map_or(0, Vec::len);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::Dimension(i, p.len(), dim));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(MetricError::BadCoordinate(i));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let sq: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                let d = sq.sqrt();
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::from_flat(n, dist, weights, coverage_target)
    }

    fn from_flat(
        n: usize,
        dist: Vec<f64>,
        weights: Vec<f64>,
        coverage_target: f64,
    ) -> Result<Self, MetricError> {
        if weights.len() != n {
            return Err(MetricError::WeightCount { n, len: weights.len() });
        }
        if let Some((i, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(MetricError::BadWeight { i, value });
        }
        if !coverage_target.is_finite() || coverage_target < 0.0 {
            return Err(MetricError::BadTarget(coverage_target));
        }
        Ok(Self { n, dist, weights, coverage_target, metric_checked: false })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn coverage_target(&self) -> f64 {
        self.coverage_target
    }

    /// Returns a copy with a different coverage target.
    pub fn with_coverage_target(&self, m: f64) -> Result<Self, MetricError> {
        if !m.is_finite() || m < 0.0 {
            return Err(MetricError::BadTarget(m));
        }
        Ok(Self { coverage_target: m, ..self.clone() })
    }

    /// Sum of all weights, ascending index order.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().fold(0.0, |acc, w| acc + w)
    }

    /// Whether [`validate_metric`](Self::validate_metric) has returned no
    /// violations for this instance.
    pub fn metric_checked(&self) -> bool {
        self.metric_checked
    }

    fn check_index(&self, index: usize) -> Result<(), MetricError> {
        if index < self.n {
            Ok(())
        } else {
            Err(MetricError::OutOfRange { index, n: self.n })
        }
    }

    /// Closed ball `{v : d(center, v) <= radius}` in ascending order.
    pub fn ball(&self, center: usize, radius: f64) -> Result<Vec<usize>, MetricError> {
        self.check_index(center)?;
        Ok(self.ball_iter(center, radius).collect())
    }

    pub(crate) fn ball_iter(&self, center: usize, radius: f64) -> impl Iterator<Item = usize> + '_ {
        self.row(center)
            .iter()
            .enumerate()
            .filter(move |(_, &d)| d <= radius)
            .map(|(v, _)| v)
    }

    /// Membership mask of `B(centers, radius)`.
    pub fn ball_union_mask(&self, centers: &[usize], radius: f64) -> Result<Vec<bool>, MetricError> {
        let mut covered = vec![false; self.n];
        for &c in centers {
            self.check_index(c)?;
            for v in self.ball_iter(c, radius) {
                covered[v] = true;
            }
        }
        Ok(covered)
    }

    /// `w(B(centers, radius))`, each point counted once.
    pub fn ball_union_weight(&self, centers: &[usize], radius: f64) -> Result<f64, MetricError> {
        let covered = self.ball_union_mask(centers, radius)?;
        Ok(self.masked_weight(&covered))
    }

    /// Weight of the points flagged in `mask`, summed in ascending index order.
    /// Starts from `+0.0` so an empty sum never yields `-0.0`.
    pub fn masked_weight(&self, mask: &[bool]) -> f64 {
        mask.iter()
            .zip(&self.weights)
            .filter(|(&m, _)| m)
            .fold(0.0, |acc, (_, &w)| acc + w)
    }

    /// Zero plus every distinct off-diagonal distance, strictly increasing.
    pub fn candidate_radii(&self) -> RadiusList {
        let mut values = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2 + 1);
        values.push(0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    values.push(self.dist(i, j));
                }
            }
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        RadiusList { values }
    }

    /// Exhaustive O(n³) scan for diagonal, symmetry and triangle violations.
    /// An empty result marks the instance as checked.
    pub fn validate_metric(&mut self) -> Vec<MetricViolation> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            let value = self.dist(i, i);
            if value != 0.0 {
                out.push(MetricViolation::Diagonal { i, value });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (self.dist(i, j) - self.dist(j, i)).abs() > METRIC_TOLERANCE {
                    out.push(MetricViolation::Asymmetric { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dij = self.dist(i, j);
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if dij > self.dist(i, k) + self.dist(k, j) + METRIC_TOLERANCE {
                        out.push(MetricViolation::Triangle { i, j, k });
                    }
                }
            }
        }
        self.metric_checked = out.is_empty();
        out
    }
}

/// Sorted, deduplicated candidate radii starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusList {
    values: Vec<f64>,
}

impl RadiusList {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, r: f64) -> bool {
        self.values.binary_search_by(|v| v.total_cmp(&r)).is_ok()
    }

    /// Largest candidate radius strictly below `r`.
    pub fn predecessor(&self, r: f64) -> Option<f64> {
        let idx = self.values.partition_point(|&v| v < r);
        idx.checked_sub(1).map(|i| self.values[i])
    }
}
