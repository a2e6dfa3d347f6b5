//! Rado matroids induced by a base matroid and per-element candidate sets.
//!
//! `J` is independent when its elements can be assigned distinct
//! representatives `φ(y) ∈ X_y` whose image is independent in the base
//! matroid. Queries intersect the base matroid with the transversal matroid
//! of `{X_y : y ∈ J}`; `J` is independent exactly when the maximum common
//! independent set has `|J|` elements, and the transversal matching of that
//! set is the representative map.

use thiserror::Error;

use crate::intersection::{max_common_independent, IntersectionError, IntersectionState};
use crate::matroid::{check_set, Matroid, MatroidError, TransversalMatroid};
use crate::metric::MetricInstance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadoError {
    #[error("base matroid has {base} elements but the instance has {points} points")]
    SizeMismatch { base: usize, points: usize },
    #[error("candidate set of {element} contains {member}, outside the base ground set of size {ground}")]
    CandidateOutOfRange { element: usize, member: usize, ground: usize },
    #[error("radius {0} is negative or not finite")]
    BadRadius(f64),
    #[error("no system of distinct representatives exists")]
    NoRepresentatives,
    #[error(transparent)]
    Set(#[from] MatroidError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

/// Base matroid plus candidate sets `X_y` for every `y` in `0..len()`.
#[derive(Clone)]
pub struct RadoSystem<'a> {
    base: &'a dyn Matroid,
    candidate_sets: Vec<Vec<usize>>,
}

impl std::fmt::Debug for RadoSystem<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadoSystem")
            .field("base_ground", &self.base.ground_size())
            .field("candidate_sets", &self.candidate_sets)
            .finish()
    }
}

impl<'a> RadoSystem<'a> {
    pub fn new(base: &'a dyn Matroid, candidate_sets: Vec<Vec<usize>>) -> Result<Self, RadoError> {
        let ground = base.ground_size();
        let mut sets = candidate_sets;
        for (element, set) in sets.iter_mut().enumerate() {
            if let Some(&member) = set.iter().find(|&&m| m >= ground) {
                return Err(RadoError::CandidateOutOfRange { element, member, ground });
            }
            set.sort_unstable();
            set.dedup();
        }
        Ok(Self { base, candidate_sets: sets })
    }

    /// The relaxed matroid on the points of `inst`: `X_e = B(e, 2r)`.
    pub fn build_relax(
        inst: &MetricInstance,
        base: &'a dyn Matroid,
        r: f64,
    ) -> Result<Self, RadoError> {
        if !r.is_finite() || r < 0.0 {
            return Err(RadoError::BadRadius(r));
        }
        if base.ground_size() != inst.len() {
            return Err(RadoError::SizeMismatch { base: base.ground_size(), points: inst.len() });
        }
        let reach = 2.0 * r;
        let sets = (0..inst.len()).map(|e| inst.ball_iter(e, reach).collect()).collect();
        Ok(Self { base, candidate_sets: sets })
    }

    pub fn base(&self) -> &'a dyn Matroid {
        self.base
    }

    /// Number of elements of the Rado ground set.
    pub fn len(&self) -> usize {
        self.candidate_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidate_sets.is_empty()
    }

    pub fn candidate_set(&self, y: usize) -> &[usize] {
        &self.candidate_sets[y]
    }

    pub fn candidate_sets(&self) -> &[Vec<usize>] {
        &self.candidate_sets
    }

    fn transversal_for(&self, members: &[usize]) -> TransversalMatroid {
        let family = members.iter().map(|&y| self.candidate_sets[y].clone()).collect();
        TransversalMatroid::new(self.base.ground_size(), family)
            .expect("candidate sets were range-checked on construction")
    }

    /// Maximum common independent set of the base and the transversal
    /// matroid of `j`, together with that transversal matroid.
    fn common_witness(&self, j: &[usize]) -> Result<(Vec<usize>, TransversalMatroid), RadoError> {
        check_set(self.len(), j)?;
        let transversal = self.transversal_for(j);
        let common = max_common_independent(self.base, &transversal)?;
        Ok((common, transversal))
    }

    pub fn is_rado_independent(&self, j: &[usize]) -> Result<bool, RadoError> {
        let (common, _) = self.common_witness(j)?;
        Ok(common.len() == j.len())
    }

    /// System of distinct representatives for `j`.
    pub fn representatives(&self, j: &[usize]) -> Result<RepresentativeMap, RadoError> {
        let (common, transversal) = self.common_witness(j)?;
        if common.len() != j.len() {
            return Err(RadoError::NoRepresentatives);
        }
        Ok(map_from_matching(j, &common, &transversal))
    }

    /// Incremental independence context starting from the empty set.
    pub fn extender(&self) -> RadoExtender<'_, 'a> {
        RadoExtender { system: self, members: Vec::new(), representatives: Vec::new() }
    }
}

fn map_from_matching(
    members: &[usize],
    common: &[usize],
    transversal: &TransversalMatroid,
) -> RepresentativeMap {
    let matching = transversal
        .matching(common)
        .expect("common independent set is independent in the transversal matroid");
    let mut pairs: Vec<(usize, usize)> = common
        .iter()
        .zip(matching)
        .map(|(&rep, family_index)| (members[family_index], rep))
        .collect();
    pairs.sort_unstable();
    RepresentativeMap { pairs }
}

impl Matroid for RadoSystem<'_> {
    fn ground_size(&self) -> usize {
        self.len()
    }

    /// Panics if the base oracle violates the matroid axioms.
    fn independent(&self, set: &[usize]) -> bool {
        match self.is_rado_independent(set) {
            Ok(answer) => answer,
            Err(e) => panic!("rado independence query failed: {e}"),
        }
    }
}

/// Injective assignment `y ↦ φ(y)` from Rado elements to base elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepresentativeMap {
    /// `(y, φ(y))`, sorted by `y`
    pairs: Vec<(usize, usize)>,
}

/// A broken [`RepresentativeMap`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepresentativeIssue {
    /// Two elements share a representative.
    NotInjective { representative: usize },
    /// `φ(y) ∉ X_y`.
    OutsideCandidates { element: usize, representative: usize },
    /// The image is dependent in the base matroid.
    DependentImage,
    /// The map does not cover exactly the expected elements.
    WrongDomain,
}

impl RepresentativeMap {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, y: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&y, |&(k, _)| k)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// Representatives, sorted.
    pub fn image(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.pairs.iter().map(|&(_, r)| r).collect();
        out.sort_unstable();
        out
    }

    /// Checks the map against `system` for the domain `j`.
    pub fn validate(&self, system: &RadoSystem<'_>, j: &[usize]) -> Vec<RepresentativeIssue> {
        let mut issues = Vec::new();
        let mut domain: Vec<usize> = self.pairs.iter().map(|&(y, _)| y).collect();
        domain.dedup();
        let mut expected = j.to_vec();
        expected.sort_unstable();
        if domain != expected || domain.len() != self.pairs.len() {
            issues.push(RepresentativeIssue::WrongDomain);
        }
        let image = self.image();
        for w in image.windows(2) {
            if w[0] == w[1] {
                issues.push(RepresentativeIssue::NotInjective { representative: w[0] });
            }
        }
        for &(element, representative) in &self.pairs {
            let allowed = element < system.len()
                && system.candidate_set(element).binary_search(&representative).is_ok();
            if !allowed {
                issues.push(RepresentativeIssue::OutsideCandidates { element, representative });
            }
        }
        let in_range = image.iter().all(|&r| r < system.base().ground_size());
        let distinct = image.windows(2).all(|w| w[0] != w[1]);
        if !(in_range && distinct && system.base().independent(&image)) {
            issues.push(RepresentativeIssue::DependentImage);
        }
        issues
    }
}

/// Incremental Rado independence: keeps a witness for the accepted elements
/// and tries one intersection augmentation per new element.
///
/// Every answer of [`try_extend`](Self::try_extend) equals
/// `is_rado_independent(members ∪ {t})`.
pub struct RadoExtender<'s, 'a> {
    system: &'s RadoSystem<'a>,
    /// accepted elements in insertion order
    members: Vec<usize>,
    /// common independent set of the base and the members' transversal
    /// matroid, with `|representatives| == |members|`
    representatives: Vec<usize>,
}

impl RadoExtender<'_, '_> {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Adds `t` if the members stay Rado-independent. On rejection the
    /// context is left unchanged. An element that is already a member is
    /// accepted without change.
    pub fn try_extend(&mut self, t: usize) -> Result<bool, RadoError> {
        if t >= self.system.len() {
            return Err(MatroidError::OutOfRange { element: t, ground: self.system.len() }.into());
        }
        if self.members.contains(&t) {
            return Ok(true);
        }
        let mut members = self.members.clone();
        members.push(t);
        let transversal = self.system.transversal_for(&members);
        let mut state = IntersectionState::with_current(
            self.system.base,
            &transversal,
            self.representatives.clone(),
        )?;
        if !state.augment()? {
            return Ok(false);
        }
        self.members = members;
        self.representatives = state.into_current();
        Ok(true)
    }

    /// Representative map for the current members.
    pub fn representatives(&self) -> RepresentativeMap {
        let transversal = self.system.transversal_for(&self.members);
        map_from_matching(&self.members, &self.representatives, &transversal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{PartitionMatroid, UniformMatroid};

    fn line(xs: &[f64]) -> MetricInstance {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        MetricInstance::from_euclidean(&pts, vec![1.0; xs.len()], 0.0).unwrap()
    }

    #[test]
    fn relax_candidate_sets_on_a_line() {
        let inst = line(&[0.0, 1.0, 2.0]);
        let base = UniformMatroid::new(3, 2);
        let sys = RadoSystem::build_relax(&inst, &base, 0.5).unwrap();
        assert_eq!(sys.candidate_sets(), &[vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
        let wide = RadoSystem::build_relax(&inst, &base, 1.0).unwrap();
        assert!(wide.candidate_sets().iter().all(|s| s == &[0, 1, 2]));
    }

    #[test]
    fn zero_radius_matches_base() {
        let inst = line(&[0.0, 1.0, 2.0, 5.0]);
        let base = PartitionMatroid::new(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let sys = RadoSystem::build_relax(&inst, &base, 0.0).unwrap();
        for mask in 0usize..16 {
            let set: Vec<usize> = (0..4).filter(|&e| mask & (1 << e) != 0).collect();
            assert_eq!(sys.is_rado_independent(&set).unwrap(), base.independent(&set));
            if base.independent(&set) {
                let map = sys.representatives(&set).unwrap();
                assert!(map.pairs().iter().all(|&(y, r)| y == r));
            }
        }
    }

    #[test]
    fn relax_errors() {
        let inst = line(&[0.0, 1.0]);
        let base = UniformMatroid::new(3, 1);
        assert!(matches!(
            RadoSystem::build_relax(&inst, &base, 1.0),
            Err(RadoError::SizeMismatch { base: 3, points: 2 })
        ));
        let base = UniformMatroid::new(2, 1);
        assert!(matches!(RadoSystem::build_relax(&inst, &base, -1.0), Err(RadoError::BadRadius(_))));
    }

    #[test]
    fn empty_set_and_missing_representatives() {
        let base = UniformMatroid::new(3, 3);
        let sys = RadoSystem::new(&base, vec![vec![0], vec![0], vec![]]).unwrap();
        assert!(sys.is_rado_independent(&[]).unwrap());
        assert!(sys.representatives(&[]).unwrap().is_empty());
        assert!(sys.is_rado_independent(&[0]).unwrap());
        assert!(!sys.is_rado_independent(&[0, 1]).unwrap());
        assert!(!sys.is_rado_independent(&[2]).unwrap());
        assert_eq!(sys.representatives(&[0, 1]), Err(RadoError::NoRepresentatives));
        assert!(sys.is_rado_independent(&[3]).is_err());
        assert!(RadoSystem::new(&base, vec![vec![3]]).is_err());
    }

    #[test]
    fn base_independence_is_required_of_the_image() {
        // Hall's condition holds for {0,1} but every SDR is a dependent pair.
        let base = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        let sys = RadoSystem::new(&base, vec![vec![0, 1], vec![0, 1], vec![2]]).unwrap();
        assert!(!sys.is_rado_independent(&[0, 1]).unwrap());
        assert!(sys.is_rado_independent(&[0, 2]).unwrap());
        let map = sys.representatives(&[0, 2]).unwrap();
        assert!(map.validate(&sys, &[0, 2]).is_empty());
        assert_eq!(map.get(2), Some(2));
    }

    #[test]
    fn validate_flags_broken_maps() {
        let base = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        let sys = RadoSystem::new(&base, vec![vec![0, 1], vec![0, 1], vec![2]]).unwrap();
        let bad = RepresentativeMap { pairs: vec![(0, 0), (1, 1)] };
        assert!(bad.validate(&sys, &[0, 1]).contains(&RepresentativeIssue::DependentImage));
        let bad = RepresentativeMap { pairs: vec![(0, 0), (2, 0)] };
        let issues = bad.validate(&sys, &[0, 2]);
        assert!(issues.contains(&RepresentativeIssue::NotInjective { representative: 0 }));
        assert!(issues.contains(&RepresentativeIssue::OutsideCandidates { element: 2, representative: 0 }));
        let bad = RepresentativeMap { pairs: vec![(0, 0)] };
        assert!(bad.validate(&sys, &[0, 2]).contains(&RepresentativeIssue::WrongDomain));
    }

    #[test]
    fn extender_follows_rank_cap() {
        let inst = line(&[0.0, 1.0, 2.0, 3.0]);
        let base = UniformMatroid::new(4, 2);
        let sys = RadoSystem::build_relax(&inst, &base, 0.5).unwrap();
        let mut ext = sys.extender();
        assert!(ext.try_extend(1).unwrap());
        assert!(ext.try_extend(1).unwrap());
        assert!(ext.try_extend(3).unwrap());
        for t in [0, 2] {
            assert!(!ext.try_extend(t).unwrap());
        }
        assert_eq!(ext.members(), &[1, 3]);
        let map = ext.representatives();
        assert!(map.validate(&sys, &[1, 3]).is_empty());
        assert!(ext.try_extend(9).is_err());
    }
}
