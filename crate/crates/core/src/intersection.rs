//! Maximum-cardinality matroid intersection by shortest augmenting paths in
//! the exchange graph.
//!
//! For a common independent set `I` the exchange graph has a node per ground
//! element. Sources are the `y ∉ I` with `I + y` independent in the first
//! matroid, sinks those with `I + y` independent in the second. For `x ∈ I`
//! and `y ∉ I` there is an arc `x → y` when `I - x + y` is independent in the
//! first matroid and an arc `y → x` when it is independent in the second. A
//! shortest source-to-sink path flips membership along the path and grows `I`
//! by one; no path means `I` is maximum.

use thiserror::Error;

use crate::matroid::{check_set, Matroid, MatroidError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("matroids have different ground sizes ({left} vs {right})")]
    GroundMismatch { left: usize, right: usize },
    #[error("starting set is not independent in both matroids")]
    NotCommonIndependent,
    #[error("augmenting path produced a set that is not common independent; an oracle violates the matroid axioms")]
    OracleInconsistency,
    #[error(transparent)]
    Set(#[from] MatroidError),
}

/// A common independent set of two matroids over the same ground set,
/// grown one element at a time by [`augment`](Self::augment).
pub struct IntersectionState<'a> {
    first: &'a dyn Matroid,
    second: &'a dyn Matroid,
    current: Vec<usize>,
}

impl<'a> IntersectionState<'a> {
    pub fn new(first: &'a dyn Matroid, second: &'a dyn Matroid) -> Result<Self, IntersectionError> {
        Self::with_current(first, second, Vec::new())
    }

    pub fn with_current(
        first: &'a dyn Matroid,
        second: &'a dyn Matroid,
        mut current: Vec<usize>,
    ) -> Result<Self, IntersectionError> {
        let (left, right) = (first.ground_size(), second.ground_size());
        if left != right {
            return Err(IntersectionError::GroundMismatch { left, right });
        }
        check_set(left, &current)?;
        if !first.independent(&current) || !second.independent(&current) {
            return Err(IntersectionError::NotCommonIndependent);
        }
        current.sort_unstable();
        Ok(Self { first, second, current })
    }

    /// Sorted ascending.
    pub fn current(&self) -> &[usize] {
        &self.current
    }

    pub fn into_current(self) -> Vec<usize> {
        self.current
    }

    /// Grows the current set by one element along the lexicographically
    /// smallest shortest augmenting path. Returns `false` (leaving the state
    /// untouched) when the current set is already maximum.
    pub fn augment(&mut self) -> Result<bool, IntersectionError> {
        let n = self.first.ground_size();
        let mut inside = vec![false; n];
        for &x in &self.current {
            inside[x] = true;
        }
        let outside: Vec<usize> = (0..n).filter(|&y| !inside[y]).collect();

        let mut is_source = vec![false; n];
        let mut is_sink = vec![false; n];
        let mut probe = self.current.clone();
        for &y in &outside {
            probe.push(y);
            is_source[y] = self.first.independent(&probe);
            is_sink[y] = self.second.independent(&probe);
            probe.pop();
        }

        // out_arcs[v]: ascending successors of v
        let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut in_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
        if !self.current.is_empty() {
            for (pos, &x) in self.current.iter().enumerate() {
                for &y in &outside {
                    probe.clone_from(&self.current);
                    probe[pos] = y;
                    if self.first.independent(&probe) {
                        out_arcs[x].push(y);
                        in_arcs[y].push(x);
                    }
                    if self.second.independent(&probe) {
                        out_arcs[y].push(x);
                        in_arcs[x].push(y);
                    }
                }
            }
            for arcs in out_arcs.iter_mut() {
                arcs.sort_unstable();
            }
        }

        // BFS backwards from the sinks: to_sink[v] = arcs from v to a sink
        let mut to_sink = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &y in &outside {
            if is_sink[y] {
                to_sink[y] = 0;
                queue.push_back(y);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &in_arcs[v] {
                if to_sink[u] == usize::MAX {
                    to_sink[u] = to_sink[v] + 1;
                    queue.push_back(u);
                }
            }
        }

        let start = outside
            .iter()
            .copied()
            .filter(|&y| is_source[y] && to_sink[y] != usize::MAX)
            .min_by_key(|&y| (to_sink[y], y));
        let Some(start) = start else {
            return Ok(false);
        };

        let mut path = vec![start];
        let mut at = start;
        while to_sink[at] > 0 {
            at = out_arcs[at]
                .iter()
                .copied()
                .find(|&v| to_sink[v] == to_sink[at] - 1)
                .expect("distance labels are consistent with the arcs");
            path.push(at);
        }

        for &v in &path {
            inside[v] = !inside[v];
        }
        let next: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
        if next.len() != self.current.len() + 1
            || !self.first.independent(&next)
            || !self.second.independent(&next)
        {
            return Err(IntersectionError::OracleInconsistency);
        }
        self.current = next;
        Ok(true)
    }

    /// Augments until no augmenting path remains.
    pub fn run_to_maximum(&mut self) -> Result<(), IntersectionError> {
        while self.augment()? {}
        Ok(())
    }
}

/// Maximum-cardinality set independent in both matroids, sorted.
pub fn max_common_independent(
    first: &dyn Matroid,
    second: &dyn Matroid,
) -> Result<Vec<usize>, IntersectionError> {
    let mut state = IntersectionState::new(first, second)?;
    state.run_to_maximum()?;
    Ok(state.into_current())
}
