//! Independence oracles and the concrete matroid classes used to model
//! instances and to test the solver.
//!
//! Sets are passed as slices of element indices. Order does not matter, but
//! elements must be distinct and below [`Matroid::ground_size`]; the checked
//! entry point [`Matroid::is_independent`] enforces that, while
//! [`Matroid::independent`] trusts the caller.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("element {element} out of range for ground set of size {ground}")]
    OutOfRange { element: usize, ground: usize },
    #[error("element {0} appears twice in the set")]
    Duplicate(usize),
    #[error("set is not independent")]
    NotIndependent,
    #[error("invalid matroid: {0}")]
    Invalid(String),
}

/// Set-based independence oracle.
pub trait Matroid: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Independence of `set`, whose elements are assumed distinct and in range.
    fn independent(&self, set: &[usize]) -> bool;

    fn is_independent(&self, set: &[usize]) -> Result<bool, MatroidError> {
        check_set(self.ground_size(), set)?;
        Ok(self.independent(set))
    }

    /// Size of the set built by scanning the ground set in ascending order and
    /// keeping every element that preserves independence.
    fn rank(&self) -> usize {
        greedy_basis(self).len()
    }

    /// Smallest candidate `e` outside `base` with `base + e` independent.
    fn extend(&self, base: &[usize], candidates: &[usize]) -> Result<Option<usize>, MatroidError> {
        check_set(self.ground_size(), base)?;
        for &c in candidates {
            if c >= self.ground_size() {
                return Err(MatroidError::OutOfRange { element: c, ground: self.ground_size() });
            }
        }
        if !self.independent(base) {
            return Err(MatroidError::NotIndependent);
        }
        let mut sorted = candidates.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut probe = base.to_vec();
        for e in sorted {
            if base.contains(&e) {
                continue;
            }
            probe.push(e);
            if self.independent(&probe) {
                return Ok(Some(e));
            }
            probe.pop();
        }
        Ok(None)
    }
}

/// Basis obtained from the ascending greedy scan.
pub fn greedy_basis<M: Matroid + ?Sized>(m: &M) -> Vec<usize> {
    let mut basis = Vec::new();
    for e in 0..m.ground_size() {
        basis.push(e);
        if !m.independent(&basis) {
            basis.pop();
        }
    }
    basis
}

/// Verifies that `set` has distinct elements below `ground`.
pub fn check_set(ground: usize, set: &[usize]) -> Result<(), MatroidError> {
    let mut seen = vec![false; ground];
    for &e in set {
        if e >= ground {
            return Err(MatroidError::OutOfRange { element: e, ground });
        }
        if seen[e] {
            return Err(MatroidError::Duplicate(e));
        }
        seen[e] = true;
    }
    Ok(())
}

impl<M: Matroid + ?Sized> Matroid for &M {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn independent(&self, set: &[usize]) -> bool {
        (**self).independent(set)
    }
}

/// `|S| <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformMatroid {
    ground: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(ground: usize, k: usize) -> Self {
        Self { ground, k }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }
    fn independent(&self, set: &[usize]) -> bool {
        set.len() <= self.k
    }
    fn rank(&self) -> usize {
        self.k.min(self.ground)
    }
}

/// Each element belongs to one class; a set is independent when no class
/// exceeds its capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    class_of: Vec<usize>,
    capacity: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(class_of: Vec<usize>, capacity: Vec<usize>) -> Result<Self, MatroidError> {
        if let Some((e, &c)) = class_of.iter().enumerate().find(|(_, &c)| c >= capacity.len()) {
            return Err(MatroidError::Invalid(format!(
                "element {e} assigned to class {c} but only {} capacities given",
                capacity.len()
            )));
        }
        Ok(Self { class_of, capacity })
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacity
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.class_of.len()
    }
    fn independent(&self, set: &[usize]) -> bool {
        let mut used = vec![0usize; self.capacity.len()];
        for &e in set {
            let c = self.class_of[e];
            used[c] += 1;
            if used[c] > self.capacity[c] {
                return false;
            }
        }
        true
    }
}

/// Edges of a multigraph; a set is independent when it is a forest.
/// Self-loops are always dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, MatroidError> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= vertices || b >= vertices) {
            return Err(MatroidError::Invalid(format!(
                "edge ({a},{b}) references a vertex outside 0..{vertices}"
            )));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// false if `a` and `b` were already connected
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

impl Matroid for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }
    fn independent(&self, set: &[usize]) -> bool {
        let mut dsu = DisjointSets::new(self.vertices);
        set.iter().all(|&e| {
            let (a, b) = self.edges[e];
            dsu.union(a, b)
        })
    }
}

/// Partial transversals of a family `A_1..A_k` of subsets of the ground set:
/// `S` is independent when its elements can be matched to distinct members
/// `A_i` containing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalMatroid {
    ground: usize,
    family: Vec<Vec<usize>>,
    /// family members containing each element, ascending
    members_of: Vec<Vec<usize>>,
}

impl TransversalMatroid {
    pub fn new(ground: usize, family: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        let mut members_of = vec![Vec::new(); ground];
        for (i, member) in family.iter().enumerate() {
            for &e in member {
                if e >= ground {
                    return Err(MatroidError::Invalid(format!(
                        "family member {i} contains element {e} outside 0..{ground}"
                    )));
                }
                if members_of[e].last() != Some(&i) {
                    members_of[e].push(i);
                }
            }
        }
        Ok(Self { ground, family, members_of })
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    /// Matching witnessing independence: `result[i]` is the family member
    /// assigned to `set[i]`. `None` when `set` is dependent.
    ///
    /// Augmenting-path bipartite matching, elements processed in the given
    /// order and family members tried in ascending index.
    pub fn matching(&self, set: &[usize]) -> Option<Vec<usize>> {
        if set.len() > self.family.len() {
            return None;
        }
        let mut owner: Vec<Option<usize>> = vec![None; self.family.len()];
        let mut visited = vec![usize::MAX; self.family.len()];
        for slot in 0..set.len() {
            if !self.augment(set, slot, slot, &mut owner, &mut visited) {
                return None;
            }
        }
        let mut assigned = vec![0; set.len()];
        for (member, o) in owner.iter().enumerate() {
            if let Some(slot) = *o {
                assigned[slot] = member;
            }
        }
        Some(assigned)
    }

    fn augment(
        &self,
        set: &[usize],
        slot: usize,
        round: usize,
        owner: &mut [Option<usize>],
        visited: &mut [usize],
    ) -> bool {
        for &member in &self.members_of[set[slot]] {
            if visited[member] == round {
                continue;
            }
            visited[member] = round;
            let free = match owner[member] {
                None => true,
                Some(other) => self.augment(set, other, round, owner, visited),
            };
            if free {
                owner[member] = Some(slot);
                return true;
            }
        }
        false
    }
}

impl Matroid for TransversalMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }
    fn independent(&self, set: &[usize]) -> bool {
        self.matching(set).is_some()
    }
}

/// Largest ground set accepted by [`ExplicitMatroid`].
pub const EXPLICIT_MAX_GROUND: usize = 12;

/// A matroid given by the full list of its independent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitMatroid {
    ground: usize,
    /// indexed by bitmask
    member: Vec<bool>,
}

impl ExplicitMatroid {
    /// Validates that the family contains the empty set, is downward closed
    /// and satisfies the exchange axiom.
    pub fn new(ground: usize, sets: &[Vec<usize>]) -> Result<Self, MatroidError> {
        if ground > EXPLICIT_MAX_GROUND {
            return Err(MatroidError::Invalid(format!(
                "explicit matroids are limited to {EXPLICIT_MAX_GROUND} elements, got {ground}"
            )));
        }
        let mut member = vec![false; 1 << ground];
        for s in sets {
            check_set(ground, s)?;
            member[mask_of(s)] = true;
        }
        let m = Self { ground, member };
        m.validate()?;
        Ok(m)
    }

    /// Collects every subset accepted by `pred` and validates the result.
    pub fn from_predicate(
        ground: usize,
        mut pred: impl FnMut(&[usize]) -> bool,
    ) -> Result<Self, MatroidError> {
        if ground > EXPLICIT_MAX_GROUND {
            return Err(MatroidError::Invalid(format!(
                "explicit matroids are limited to {EXPLICIT_MAX_GROUND} elements, got {ground}"
            )));
        }
        let member = (0..1usize << ground).map(|mask| pred(&elements_of(mask))).collect();
        let m = Self { ground, member };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), MatroidError> {
        if !self.member[0] {
            return Err(MatroidError::Invalid("empty set must be independent".into()));
        }
        let full = self.member.len();
        for mask in 0..full {
            if !self.member[mask] {
                continue;
            }
            for e in 0..self.ground {
                if mask & (1 << e) != 0 && !self.member[mask & !(1 << e)] {
                    return Err(MatroidError::Invalid(format!(
                        "family is not downward closed at {:?}",
                        elements_of(mask)
                    )));
                }
            }
        }
        // With downward closure, exchange between sizes k and k+1 suffices.
        for small in 0..full {
            if !self.member[small] {
                continue;
            }
            let k = small.count_ones();
            for big in 0..full {
                if !self.member[big] || big.count_ones() != k + 1 {
                    continue;
                }
                let extendable = elements_of(big & !small)
                    .into_iter()
                    .any(|e| self.member[small | (1 << e)]);
                if !extendable {
                    return Err(MatroidError::Invalid(format!(
                        "exchange fails for {:?} and {:?}",
                        elements_of(small),
                        elements_of(big)
                    )));
                }
            }
        }
        Ok(())
    }

    /// All independent sets, each sorted, in increasing bitmask order.
    pub fn independent_sets(&self) -> Vec<Vec<usize>> {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(mask, _)| elements_of(mask))
            .collect()
    }
}

impl Matroid for ExplicitMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }
    fn independent(&self, set: &[usize]) -> bool {
        self.member[mask_of(set)]
    }
}

pub(crate) fn mask_of(set: &[usize]) -> usize {
    set.iter().fold(0, |acc, &e| acc | (1 << e))
}

pub(crate) fn elements_of(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&e| mask & (1 << e) != 0).collect()
}

/// Closed set of concrete matroid classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyMatroid {
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Graphic(GraphicMatroid),
    Transversal(TransversalMatroid),
    Explicit(ExplicitMatroid),
}

impl AnyMatroid {
    fn inner(&self) -> &dyn Matroid {
        match self {
            AnyMatroid::Uniform(m) => m,
            AnyMatroid::Partition(m) => m,
            AnyMatroid::Graphic(m) => m,
            AnyMatroid::Transversal(m) => m,
            AnyMatroid::Explicit(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyMatroid::Uniform(_) => "uniform",
            AnyMatroid::Partition(_) => "partition",
            AnyMatroid::Graphic(_) => "graphic",
            AnyMatroid::Transversal(_) => "transversal",
            AnyMatroid::Explicit(_) => "explicit",
        }
    }
}

impl Matroid for AnyMatroid {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }
    fn independent(&self, set: &[usize]) -> bool {
        self.inner().independent(set)
    }
    fn rank(&self) -> usize {
        self.inner().rank()
    }
}

/// Wraps an oracle and counts the queries it answers.
pub struct CountingOracle<M> {
    inner: M,
    calls: AtomicU64,
}

impl<M: Matroid> CountingOracle<M> {
    pub fn new(inner: M) -> Self {
        Self { inner, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

impl<M: Matroid> Matroid for CountingOracle<M> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn independent(&self, set: &[usize]) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.independent(set)
    }
}
