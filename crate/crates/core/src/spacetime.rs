//! Discrete spacetimes: periodic line lattices and the circle lattice.
//!
//! Sites are points `spacing` apart. Distances use the minimal periodic
//! image, so only overlapping regions are at distance zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("lattice needs at least 4 sites, got {0}")]
    TooFewSites(usize),
    #[error("spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("site {site} outside lattice of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("translation ({time}, {shift}) is not spacelike")]
    NotSpacelike { time: f64, shift: i64 },
    #[error("infeasible family request: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, SpacetimeError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// Minkowski-like: no preferred rest frame.
    LineIsotropic,
    /// Newtonian with a distinguished timelike direction.
    LineDistinguishedFrame,
    /// Spatial slices are circles (cylinder spacetime).
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceModel {
    pub kind: SpaceKind,
    pub sites: usize,
    pub spacing: f64,
    pub light_speed: f64,
}

impl SpaceModel {
    pub fn new(kind: SpaceKind, sites: usize, spacing: f64) -> Result<Self> {
        if sites < 4 {
            return Err(SpacetimeError::TooFewSites(sites));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(SpacetimeError::BadSpacing(spacing));
        }
        Ok(Self {
            kind,
            sites,
            spacing,
            light_speed: 1.0,
        })
    }

    /// Physical length of a spatial slice.
    pub fn length(&self) -> f64 {
        self.sites as f64 * self.spacing
    }

    /// Same kind and physical length with a different number of sites.
    pub fn refined(&self, sites: usize) -> Result<Self> {
        let mut m = Self::new(self.kind, sites, self.length() / sites as f64)?;
        m.light_speed = self.light_speed;
        Ok(m)
    }

    /// Normalized counting measure `|Δ| / N`.
    pub fn measure(&self, region: &Region) -> f64 {
        region.len() as f64 / self.sites as f64
    }

    pub fn validate(&self, region: &Region) -> Result<()> {
        match region.sites().last() {
            Some(&s) if s >= self.sites => Err(SpacetimeError::SiteOutOfRange {
                site: s,
                sites: self.sites,
            }),
            _ => Ok(()),
        }
    }

    /// Minimal periodic image of the index difference.
    pub fn site_separation(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j) % self.sites;
        d.min(self.sites - d)
    }

    pub fn all_sites(&self) -> Region {
        Region((0..self.sites).collect())
    }

    /// Classifies a translation against the light cone of this model.
    pub fn causal_character(&self, a: &Translation) -> CausalCharacter {
        let temporal = self.light_speed * a.time.abs();
        let spatial = a.shift.unsigned_abs() as f64 * self.spacing;
        if temporal > spatial {
            CausalCharacter::Timelike
        } else if temporal < spatial {
            CausalCharacter::Spacelike
        } else {
            CausalCharacter::Lightlike
        }
    }
}

/// Ordered set of site indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Region(Vec<usize>);

impl Region {
    pub fn new(sites: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Region(v)
    }

    pub fn empty() -> Self {
        Region(Vec::new())
    }

    /// `len` consecutive sites from `start`, wrapping modulo `sites`.
    pub fn interval(start: usize, len: usize, sites: usize) -> Self {
        Region::new((0..len.min(sites)).map(|k| (start + k) % sites))
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.0.binary_search(&site).is_ok()
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn intersection(&self, other: &Region) -> Region {
        Region(self.0.iter().copied().filter(|s| other.contains(*s)).collect())
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.0.iter().all(|s| !other.contains(*s))
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.0.iter().all(|s| other.contains(*s))
    }

    /// Sites within `k` cells of the region (periodic).
    pub fn neighborhood(&self, k: usize, sites: usize) -> Region {
        let mut out = Vec::with_capacity(self.len() + 2 * k);
        for &s in &self.0 {
            for d in 0..=k {
                out.push((s + d) % sites);
                out.push((s + sites - d % sites) % sites);
            }
        }
        Region::new(out)
    }

    /// Start and length if the region is a single periodic arc.
    pub fn as_arc(&self, sites: usize) -> Option<(usize, usize)> {
        if self.is_empty() || self.len() >= sites {
            return None;
        }
        let starts: Vec<usize> = self
            .0
            .iter()
            .copied()
            .filter(|&s| !self.contains((s + sites - 1) % sites))
            .collect();
        match starts.as_slice() {
            [start] => Some((*start, self.len())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub time: f64,
    pub shift: i64,
}

impl Translation {
    pub fn new(time: f64, shift: i64) -> Self {
        Self { time, shift }
    }

    pub fn minus(&self, other: &Translation) -> Translation {
        Translation::new(self.time - other.time, self.shift - other.shift)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCharacter {
    Timelike,
    Lightlike,
    Spacelike,
}

/// Gap between two regions in length units.
///
/// Returns `f64::INFINITY` when either region is empty: nothing can be
/// signalled to or from an empty region.
pub fn region_distance(m: &SpaceModel, d1: &Region, d2: &Region) -> f64 {
    let mut best = usize::MAX;
    for &i in d1.sites() {
        for &j in d2.sites() {
            best = best.min(m.site_separation(i, j));
            if best == 0 {
                return 0.0;
            }
        }
    }
    if best == usize::MAX {
        return f64::INFINITY;
    }
    best as f64 * m.spacing
}

/// True iff a luminal signal cannot bridge the gap within time `t` (`t >= 0`).
pub fn is_spacelike_clear(m: &SpaceModel, d1: &Region, d2: &Region, t: f64) -> bool {
    debug_assert!(t >= 0.0);
    m.light_speed * t < region_distance(m, d1, d2)
}

pub fn shift_region(m: &SpaceModel, d: &Region, s: i64) -> Region {
    let n = m.sites as i64;
    Region::new(d.sites().iter().map(|&x| (x as i64 + s).rem_euclid(n) as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NavDecomposition {
    Decomposed { b: Translation, c: Translation },
    /// The model has a preferred frame.
    Absent,
    NotApplicable,
}

/// Writes a spacelike translation as a difference of two timelike ones.
pub fn nav_decompose(m: &SpaceModel, a: &Translation) -> Result<NavDecomposition> {
    if m.causal_character(a) != CausalCharacter::Spacelike {
        return Err(SpacetimeError::NotSpacelike {
            time: a.time,
            shift: a.shift,
        });
    }
    Ok(match m.kind {
        SpaceKind::LineIsotropic => {
            let base = a.shift.unsigned_abs() as f64 * m.spacing / m.light_speed + 1.0 + a.time.abs();
            let c = Translation::new(base, 0);
            let b = Translation::new(base + a.time, a.shift);
            NavDecomposition::Decomposed { b, c }
        }
        SpaceKind::LineDistinguishedFrame => NavDecomposition::Absent,
        SpaceKind::Circle => NavDecomposition::NotApplicable,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    /// Partition into consecutive blocks of the given width.
    DisjointCovering { block: usize },
    /// Decreasing chain of collars ending at the region itself.
    NestedTo(Region),
    /// Disjoint covering that contains the region as a member.
    CoveringWith(Region),
    /// Pairs `{Δ ∪ left_k, Δ ∪ right_k}` of proper supersets whose
    /// intersection is exactly `Δ`, one family per collar depth `k`.
    Approaching(Region),
}

pub fn make_families(m: &SpaceModel, mode: &FamilyMode) -> Result<Vec<Vec<Region>>> {
    let n = m.sites;
    match mode {
        FamilyMode::DisjointCovering { block } => {
            if *block == 0 || *block > n {
                return Err(SpacetimeError::Infeasible(format!("block width {block}")));
            }
            let covering = (0..n)
                .step_by(*block)
                .map(|s| Region::new(s..(s + block).min(n)))
                .collect();
            Ok(vec![covering])
        }
        FamilyMode::NestedTo(d) => {
            m.validate(d)?;
            if d.is_empty() || d.len() >= n {
                return Err(SpacetimeError::Infeasible(
                    "nested family needs a nonempty proper region".into(),
                ));
            }
            let mut chain = Vec::new();
            let mut k = 0;
            while d.neighborhood(k + 1, n).len() < n {
                k += 1;
            }
            for depth in (0..=k).rev() {
                chain.push(d.neighborhood(depth, n));
            }
            Ok(vec![chain])
        }
        FamilyMode::CoveringWith(d) => {
            m.validate(d)?;
            if d.is_empty() {
                return Err(SpacetimeError::Infeasible("covering member is empty".into()));
            }
            let mut covering = vec![d.clone()];
            // complement split into its maximal arcs
            let rest: Vec<usize> = (0..n).filter(|s| !d.contains(*s)).collect();
            let mut run: Vec<usize> = Vec::new();
            for s in rest {
                if let Some(&last) = run.last() {
                    if s != last + 1 {
                        covering.push(Region::new(run.drain(..)));
                    }
                }
                run.push(s);
            }
            if !run.is_empty() {
                covering.push(Region::new(run));
            }
            Ok(vec![covering])
        }
        FamilyMode::Approaching(d) => {
            m.validate(d)?;
            let (start, len) = d.as_arc(n).ok_or_else(|| {
                SpacetimeError::Infeasible("approaching families need a proper arc".into())
            })?;
            let max_depth = (n - len) / 2;
            if max_depth == 0 {
                return Err(SpacetimeError::Infeasible("no room for collars".into()));
            }
            let mut depths: Vec<usize> = std::iter::successors(Some(1usize), |k| Some(k * 2))
                .take_while(|&k| k < max_depth)
                .collect();
            depths.push(max_depth);
            Ok(depths
                .into_iter()
                .map(|k| {
                    let left = Region::interval((start + n - k) % n, k, n);
                    let right = Region::interval((start + len) % n, k, n);
                    vec![d.union(&left), d.union(&right)]
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize, a: f64) -> SpaceModel {
        SpaceModel::new(SpaceKind::LineIsotropic, n, a).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(matches!(
            SpaceModel::new(SpaceKind::Circle, 3, 1.0),
            Err(SpacetimeError::TooFewSites(3))
        ));
        assert!(SpaceModel::new(SpaceKind::Circle, 8, 0.0).is_err());
        let m = line(8, 1.0);
        assert!(m.validate(&Region::new([9])).is_err());
        assert!(m.validate(&Region::empty()).is_ok());
    }

    #[test]
    fn distance_examples() {
        let m = line(16, 0.5);
        assert_eq!(region_distance(&m, &Region::new([2, 3]), &Region::new([3, 4])), 0.0);
        assert_eq!(region_distance(&m, &Region::new([2]), &Region::new([3])), 0.5);
        assert_eq!(region_distance(&m, &Region::new([0]), &Region::new([3])), 1.5);
        assert_eq!(region_distance(&m, &Region::new([0, 1]), &Region::new([4, 15])), 0.5);
        assert!(region_distance(&m, &Region::empty(), &Region::new([1])).is_infinite());
    }

    #[test]
    fn antipodal_distance_brute_force() {
        let m = SpaceModel::new(SpaceKind::Circle, 8, 1.0).unwrap();
        let mut best = usize::MAX;
        for wind in [-1i64, 0, 1] {
            let d = (4 + 8 * wind).unsigned_abs() as usize;
            best = best.min(d);
        }
        let expected = best as f64;
        assert_eq!(region_distance(&m, &Region::new([0]), &Region::new([4])), expected);
        assert_eq!(expected, 4.0);
    }

    #[test]
    fn spacelike_clear_cases() {
        let m = line(16, 0.5);
        let d1 = Region::new([0]);
        let d2 = Region::new([3]);
        assert!(is_spacelike_clear(&m, &d1, &d2, 0.0));
        assert!(!is_spacelike_clear(&m, &d1, &d2, 1.5));
        assert!(is_spacelike_clear(&m, &d1, &d2, 1.49));
    }

    #[test]
    fn shift_examples() {
        let m = line(8, 1.0);
        let d = Region::new([0, 1]);
        assert_eq!(shift_region(&m, &d, 0), d);
        assert_eq!(shift_region(&m, &d, 8), d);
        assert_eq!(shift_region(&m, &d, -1), Region::new([7, 0]));
    }

    #[test]
    fn nav_examples() {
        let m = line(16, 1.0);
        match nav_decompose(&m, &Translation::new(0.0, 3)).unwrap() {
            NavDecomposition::Decomposed { b, c } => {
                assert_eq!(b, Translation::new(4.0, 3));
                assert_eq!(c, Translation::new(4.0, 0));
            }
            other => panic!("{other:?}"),
        }
        match nav_decompose(&m, &Translation::new(0.0, -2)).unwrap() {
            NavDecomposition::Decomposed { b, c } => {
                assert_eq!(b, Translation::new(3.0, -2));
                assert_eq!(c, Translation::new(3.0, 0));
            }
            other => panic!("{other:?}"),
        }
        let dist = SpaceModel::new(SpaceKind::LineDistinguishedFrame, 16, 1.0).unwrap();
        assert_eq!(
            nav_decompose(&dist, &Translation::new(0.0, 3)).unwrap(),
            NavDecomposition::Absent
        );
        let circ = SpaceModel::new(SpaceKind::Circle, 16, 1.0).unwrap();
        assert_eq!(
            nav_decompose(&circ, &Translation::new(0.0, 3)).unwrap(),
            NavDecomposition::NotApplicable
        );
        assert!(matches!(
            nav_decompose(&m, &Translation::new(5.0, 1)),
            Err(SpacetimeError::NotSpacelike { .. })
        ));
    }

    #[test]
    fn families_examples() {
        let m = line(8, 1.0);
        let cov = make_families(&m, &FamilyMode::DisjointCovering { block: 2 }).unwrap();
        assert_eq!(
            cov[0],
            vec![
                Region::new([0, 1]),
                Region::new([2, 3]),
                Region::new([4, 5]),
                Region::new([6, 7])
            ]
        );

        let nested = make_families(&m, &FamilyMode::NestedTo(Region::new([3, 4]))).unwrap();
        assert_eq!(
            nested[0],
            vec![
                Region::new(1..=6),
                Region::new(2..=5),
                Region::new([3, 4])
            ]
        );

        let with = make_families(&m, &FamilyMode::CoveringWith(Region::new([3, 4]))).unwrap();
        assert!(with[0].contains(&Region::new([3, 4])));
        let union = with[0].iter().fold(Region::empty(), |acc, r| acc.union(r));
        assert_eq!(union, m.all_sites());

        assert!(make_families(&m, &FamilyMode::NestedTo(m.all_sites())).is_err());
        assert!(make_families(&m, &FamilyMode::NestedTo(Region::empty())).is_err());
    }

    #[test]
    fn approaching_families_meet_exactly_at_target() {
        let m = SpaceModel::new(SpaceKind::Circle, 16, 1.0).unwrap();
        let d = Region::interval(14, 4, 16);
        let fams = make_families(&m, &FamilyMode::Approaching(d.clone())).unwrap();
        assert!(!fams.is_empty());
        for fam in fams {
            assert_eq!(fam.len(), 2);
            assert!(fam.iter().all(|r| d.is_subset(r) && r != &d));
            assert_eq!(fam[0].intersection(&fam[1]), d);
        }
        assert!(make_families(&m, &FamilyMode::Approaching(Region::new([0, 2]))).is_err());
    }

    #[test]
    fn arc_detection() {
        assert_eq!(Region::new([7, 0, 1]).as_arc(8), Some((7, 3)));
        assert_eq!(Region::new([2, 3]).as_arc(8), Some((2, 2)));
        assert_eq!(Region::new([1, 3]).as_arc(8), None);
    }
}
