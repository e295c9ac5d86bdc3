//! Numerical checks of the localization conditions.
//!
//! Every check returns [`Verdict`]s whose residual is the largest violation
//! found over a fixed, reproducible sample of regions and times.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modelzoo::{AnySystem, Boost, GeneratorSpec, SystemCore, Variant, ZooError};
use crate::opkernel::{self, KernelError, Operator};
use crate::spacetime::{
    self, make_families, region_distance, CausalCharacter, FamilyMode, NavDecomposition, Region,
    SpaceKind, Translation,
};

#[derive(Debug, Error)]
pub enum AxiomError {
    #[error("sampling plan produced no {0}")]
    EmptyPlan(&'static str),
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Spacetime(#[from] spacetime::SpacetimeError),
}

pub type Result<T> = std::result::Result<T, AxiomError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    Localizability,
    Additivity,
    Covariance,
    SpatialCovariance,
    EnergyBoundedBelow,
    Microcausality,
    StrongCausality,
    Niws,
    Monotonicity,
    ProbabilityConservation,
    NumberConservation,
    NoAbsoluteVelocity,
}

impl ConditionId {
    pub const ALL: [ConditionId; 12] = [
        ConditionId::Localizability,
        ConditionId::Additivity,
        ConditionId::Covariance,
        ConditionId::SpatialCovariance,
        ConditionId::EnergyBoundedBelow,
        ConditionId::Microcausality,
        ConditionId::StrongCausality,
        ConditionId::Niws,
        ConditionId::Monotonicity,
        ConditionId::ProbabilityConservation,
        ConditionId::NumberConservation,
        ConditionId::NoAbsoluteVelocity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::Localizability => "localizability",
            ConditionId::Additivity => "additivity",
            ConditionId::Covariance => "covariance",
            ConditionId::SpatialCovariance => "spatial_covariance",
            ConditionId::EnergyBoundedBelow => "energy_bounded_below",
            ConditionId::Microcausality => "microcausality",
            ConditionId::StrongCausality => "strong_causality",
            ConditionId::Niws => "niws",
            ConditionId::Monotonicity => "monotonicity",
            ConditionId::ProbabilityConservation => "probability_conservation",
            ConditionId::NumberConservation => "number_conservation",
            ConditionId::NoAbsoluteVelocity => "no_absolute_velocity",
        }
    }
}

impl std::fmt::Display for ConditionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Residual between the pass and fail tolerances.
    Inconclusive,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub regions: Vec<Region>,
    pub times: Vec<f64>,
    pub detail: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: ConditionId,
    pub outcome: Outcome,
    pub holds: bool,
    pub residual: f64,
    pub witness: Option<Witness>,
    pub samples_examined: usize,
}

impl Verdict {
    /// Classifies `residual` against the policy. The witness is kept only
    /// when the condition does not hold.
    pub fn judged(
        condition: ConditionId,
        residual: f64,
        witness: Option<Witness>,
        samples_examined: usize,
        p: &TolerancePolicy,
    ) -> Self {
        let holds = residual <= p.pass_tol;
        let outcome = if holds {
            Outcome::Pass
        } else if residual > p.fail_tol {
            Outcome::Fail
        } else {
            Outcome::Inconclusive
        };
        Verdict {
            condition,
            outcome,
            holds,
            residual,
            witness: if holds { None } else { witness },
            samples_examined,
        }
    }

    /// The condition is undefined for this system; `holds` is false and the
    /// residual zero.
    pub fn not_applicable(condition: ConditionId, reason: &str) -> Self {
        Verdict {
            condition,
            outcome: Outcome::NotApplicable,
            holds: false,
            residual: 0.0,
            witness: Some(Witness {
                regions: Vec::new(),
                times: Vec::new(),
                detail: reason.to_string(),
                value: 0.0,
            }),
            samples_examined: 0,
        }
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

/// Sampling plan for regions, expressed as divisors of the lattice size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionPlan {
    pub width_divisors: Vec<usize>,
    pub gap_divisors: Vec<usize>,
    pub adjacent_pairs: bool,
    pub antipodal: bool,
}

impl Default for RegionPlan {
    fn default() -> Self {
        Self {
            width_divisors: vec![8, 4],
            gap_divisors: vec![8, 4],
            adjacent_pairs: true,
            antipodal: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancePolicy {
    pub pass_tol: f64,
    pub fail_tol: f64,
    /// Times for covariance, conservation and conclusion checks.
    pub time_grid: Vec<f64>,
    /// Fractions of the light-crossing time sampled by the causality checks.
    pub causal_fractions: Vec<f64>,
    pub region_pairs: RegionPlan,
    /// Lattice sizes for the energy refinement scan.
    pub refinement: Vec<usize>,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            pass_tol: 1e-8,
            fail_tol: 1e-6,
            time_grid: vec![0.1, 0.3, 0.5, 1.0],
            causal_fractions: vec![1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 0.6, 0.9],
            region_pairs: RegionPlan::default(),
            refinement: vec![32, 64, 128, 256],
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(self.pass_tol > 0.0 && self.pass_tol < self.fail_tol) {
            return Err(format!(
                "need 0 < pass_tol < fail_tol, got {} and {}",
                self.pass_tol, self.fail_tol
            ));
        }
        if self.time_grid.is_empty() {
            return Err("time grid is empty".into());
        }
        if self.causal_fractions.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
            return Err("causal fractions must lie in (0, 1)".into());
        }
        if self.refinement.len() < 3 {
            return Err("refinement scan needs at least three lattice sizes".into());
        }
        Ok(())
    }
}

/// Regions sampled for a system and the disjoint pairs among them.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCatalog {
    pub regions: Vec<Region>,
    pub disjoint_pairs: Vec<(usize, usize)>,
}

impl RegionCatalog {
    pub fn build(s: &SystemCore, plan: &RegionPlan) -> Self {
        let n = s.model().sites;
        let mut regions: Vec<Region> = Vec::new();
        let push = |r: Region, regions: &mut Vec<Region>| {
            if !r.is_empty() && r.len() < n && !regions.contains(&r) {
                regions.push(r);
            }
        };
        let mut gaps: Vec<usize> = plan.gap_divisors.iter().map(|g| (n / g).max(1)).collect();
        if plan.adjacent_pairs {
            gaps.push(0);
        }
        let limit = s.region_width_limit().unwrap_or(n);
        let mut widths: Vec<usize> = plan.width_divisors.iter().map(|wd| (n / wd).clamp(1, limit)).collect();
        widths.dedup();
        for &w in &widths {
            for &g in &gaps {
                let span = 2 * w + g;
                if span > n {
                    continue;
                }
                let start = (n - span) / 2;
                push(Region::interval(start, w, n), &mut regions);
                push(Region::interval(start + w + g, w, n), &mut regions);
            }
        }
        let w = widths.first().copied().unwrap_or(1);
        if plan.antipodal {
            push(Region::interval((n / 4).saturating_sub(w / 2), w, n), &mut regions);
            push(Region::interval((3 * n / 4).saturating_sub(w / 2), w, n), &mut regions);
        }
        let g = plan.gap_divisors.first().map(|d| (n / d).max(1)).unwrap_or(1);
        for d in s.distinguished_regions() {
            push(d.clone(), &mut regions);
            if let Some((start, len)) = d.as_arc(n) {
                if len + 2 * (g + w) <= n {
                    push(Region::interval((start + len + g) % n, w, n), &mut regions);
                    push(Region::interval((start + 2 * n - g - w) % n, w, n), &mut regions);
                }
            }
        }
        let mut disjoint_pairs = Vec::new();
        for i in 0..regions.len() {
            for j in i + 1..regions.len() {
                if regions[i].is_disjoint(&regions[j]) {
                    disjoint_pairs.push((i, j));
                }
            }
        }
        RegionCatalog {
            regions,
            disjoint_pairs,
        }
    }
}

/// Caches evolutions and time-translated operators for one system.
pub struct Probe<'a> {
    system: &'a SystemCore,
    evolutions: HashMap<u64, Operator>,
    ops: HashMap<(Region, u64), Operator>,
}

impl<'a> Probe<'a> {
    pub fn new(system: &'a SystemCore) -> Self {
        Self {
            system,
            evolutions: HashMap::new(),
            ops: HashMap::new(),
        }
    }

    pub fn system(&self) -> &SystemCore {
        self.system
    }

    pub fn evolution(&mut self, t: f64) -> &Operator {
        let sys = self.system;
        self.evolutions
            .entry(t.to_bits())
            .or_insert_with(|| sys.unitaries().evolution(t))
    }

    /// Operator for `d` on the hypersurface at time `t`.
    pub fn op(&mut self, d: &Region, t: f64) -> Result<Operator> {
        let key = (d.clone(), t.to_bits());
        if let Some(op) = self.ops.get(&key) {
            return Ok(op.clone());
        }
        let op = if t == 0.0 || self.system.is_frozen() {
            self.system.localize(d)?
        } else {
            let u = self.evolution(t).clone();
            self.system.localize_evolved(d, &u)?
        };
        self.ops.insert(key, op.clone());
        Ok(op)
    }
}

/// Running maximum of operator norms that skips the eigensolve whenever the
/// Frobenius bound cannot beat the current maximum. Values far below the
/// pass tolerance are recorded by their Frobenius bound.
struct MaxNorm {
    best: f64,
    witness: Option<Witness>,
    samples: usize,
    floor: f64,
}

impl MaxNorm {
    fn new(p: &TolerancePolicy) -> Self {
        Self {
            best: 0.0,
            witness: None,
            samples: 0,
            floor: p.pass_tol * 1e-3,
        }
    }

    fn offer(&mut self, op: &Operator, witness: impl FnOnce(f64) -> Witness) {
        self.samples += 1;
        let frob = op.frobenius_norm();
        if frob <= self.best {
            return;
        }
        let value = if frob <= self.floor { frob } else { op.norm() };
        self.update(value, witness);
    }

    fn offer_value(&mut self, value: f64, witness: impl FnOnce(f64) -> Witness) {
        self.samples += 1;
        self.update(value, witness);
    }

    fn update(&mut self, value: f64, witness: impl FnOnce(f64) -> Witness) {
        if value > self.best {
            self.best = value;
            self.witness = Some(witness(value));
        }
    }

    fn verdict(self, condition: ConditionId, p: &TolerancePolicy) -> Verdict {
        Verdict::judged(condition, self.best, self.witness, self.samples, p)
    }
}

fn witness(regions: &[&Region], times: &[f64], detail: &str, value: f64) -> Witness {
    Witness {
        regions: regions.iter().map(|r| (*r).clone()).collect(),
        times: times.to_vec(),
        detail: detail.to_string(),
        value,
    }
}

/// Localizability, additivity and monotonicity.
pub fn check_statics(s: &AnySystem, p: &TolerancePolicy) -> Result<Vec<Verdict>> {
    let core = s.core();
    let catalog = RegionCatalog::build(core, &p.region_pairs);
    if catalog.disjoint_pairs.is_empty() {
        return Err(AxiomError::EmptyPlan("disjoint region pairs"));
    }
    let ops: Vec<Operator> = catalog
        .regions
        .iter()
        .map(|r| core.localize(r))
        .collect::<std::result::Result<_, _>>()?;
    let n = core.dim();

    let localizability = match core.variant() {
        Variant::Sharp => {
            let mut acc = MaxNorm::new(p);
            for &(i, j) in &catalog.disjoint_pairs {
                let prod = ops[i].compose(&ops[j])?;
                let (a, b) = (&catalog.regions[i], &catalog.regions[j]);
                acc.offer(&prod, |v| witness(&[a, b], &[0.0], "norm of E_a E_b for disjoint a, b", v));
            }
            acc.verdict(ConditionId::Localizability, p)
        }
        Variant::Unsharp => {
            let mut acc = MaxNorm::new(p);
            let eye = Operator::identity(n);
            for &(i, j) in &catalog.disjoint_pairs {
                let excess = ops[i].add(&ops[j])?.sub(&eye)?;
                let top = opkernel::eig_hermitian(&excess)?.max_eigenvalue().max(0.0);
                let (a, b) = (&catalog.regions[i], &catalog.regions[j]);
                acc.offer_value(top, |v| {
                    witness(&[a, b], &[0.0], "largest eigenvalue of A_a + A_b - I", v)
                });
            }
            acc.verdict(ConditionId::Localizability, p)
        }
        Variant::Number => Verdict::not_applicable(
            ConditionId::Localizability,
            "number operators are not bounded by the identity",
        ),
    };

    let mut acc = MaxNorm::new(p);
    for &(i, j) in &catalog.disjoint_pairs {
        let (a, b) = (&catalog.regions[i], &catalog.regions[j]);
        let joint = core.localize(&a.union(b))?;
        let defect = ops[i].add(&ops[j])?.sub(&joint)?;
        acc.offer(&defect, |v| {
            witness(&[a, b], &[0.0], "norm of op(a) + op(b) - op(a u b)", v)
        });
    }
    let additivity = acc.verdict(ConditionId::Additivity, p);

    let monotonicity = if core.variant() == Variant::Sharp {
        check_monotonicity(core, &catalog, p)?
    } else {
        Verdict::not_applicable(ConditionId::Monotonicity, "defined for projections only")
    };
    Ok(vec![localizability, additivity, monotonicity])
}

fn monotone_targets(core: &SystemCore, catalog: &RegionCatalog) -> Vec<Region> {
    let mut targets: Vec<Region> = core.distinguished_regions().to_vec();
    for r in &catalog.regions {
        if !targets.contains(r) {
            targets.push(r.clone());
        }
    }
    targets
}

fn check_monotonicity(core: &SystemCore, catalog: &RegionCatalog, p: &TolerancePolicy) -> Result<Verdict> {
    let m = core.model();
    let mut acc = MaxNorm::new(p);
    for target in monotone_targets(core, catalog) {
        for mode in [FamilyMode::NestedTo(target.clone()), FamilyMode::Approaching(target.clone())] {
            let Ok(families) = make_families(m, &mode) else {
                continue;
            };
            for family in families {
                let limit = family
                    .iter()
                    .skip(1)
                    .fold(family[0].clone(), |acc, r| acc.intersection(r));
                let ops: Vec<Operator> = family
                    .iter()
                    .map(|r| core.localize(r))
                    .collect::<std::result::Result<_, _>>()?;
                let meet = opkernel::lattice_meet(&ops)?;
                let defect = meet.sub(&core.localize(&limit)?)?;
                let members: Vec<&Region> = family.iter().collect();
                acc.offer(&defect, |v| {
                    let mut w = witness(&members, &[0.0], "norm of meet over the family minus op(intersection)", v);
                    w.regions.push(limit.clone());
                    w
                });
            }
        }
    }
    if acc.samples == 0 {
        return Err(AxiomError::EmptyPlan("nested families"));
    }
    Ok(acc.verdict(ConditionId::Monotonicity, p))
}

/// Time-translation and spatial covariance.
pub fn check_covariance(s: &AnySystem, p: &TolerancePolicy) -> Result<Vec<Verdict>> {
    let core = s.core();
    let catalog = RegionCatalog::build(core, &p.region_pairs);
    let mut probe = Probe::new(core);

    let mut acc = MaxNorm::new(p);
    for &t in &p.time_grid {
        let u = probe.evolution(t).clone();
        for r in &catalog.regions {
            let moved = core.localize(r)?.conjugate_by(&u)?;
            let assigned = probe.op(r, t)?;
            let defect = moved.sub(&assigned)?;
            acc.offer(&defect, |v| {
                witness(&[r], &[t], "norm of U_t op(r) U_-t - op(r + t)", v)
            });
        }
    }
    let time = acc.verdict(ConditionId::Covariance, p);

    let n = core.model().sites as i64;
    let mut acc = MaxNorm::new(p);
    let mut shifts = vec![1i64, (n / 8).max(1)];
    shifts.dedup();
    for s_ in shifts {
        let u = core.unitaries().translation(&Translation::new(0.0, s_))?;
        for r in &catalog.regions {
            let moved = core.localize(r)?.conjugate_by(&u)?;
            let target_region = spacetime::shift_region(core.model(), r, s_);
            let defect = moved.sub(&core.localize(&target_region)?)?;
            acc.offer(&defect, |v| {
                let mut w = witness(&[r, &target_region], &[], "norm of U(s) op(r) U(s)* - op(r + s)", v);
                w.detail.push_str(&format!(" with s = {s_}"));
                w
            });
        }
    }
    let spatial = acc.verdict(ConditionId::SpatialCovariance, p);
    Ok(vec![time, spatial])
}

/// Spectrum floors of `H(b)` across the refinement scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyScan {
    pub sizes: Vec<usize>,
    pub floors: Vec<f64>,
    pub unbounded: bool,
}

/// Sampled timelike directions for boosted generators.
pub fn boost_samples(kind: SpaceKind) -> Vec<Boost> {
    match kind {
        SpaceKind::LineIsotropic => vec![
            Boost::new(1.0, 0.0),
            Boost::new(1.0, 0.5),
            Boost::new(1.0, -0.5),
            Boost::new(1.0, 0.9),
            Boost::new(1.0, -0.9),
        ],
        _ => vec![Boost::new(1.0, 0.0)],
    }
}

/// Floors keep falling, by steps that do not shrink faster than by half,
/// and end below −10.
pub fn diverges_downward(floors: &[f64]) -> bool {
    if floors.len() < 3 {
        return false;
    }
    let steps: Vec<f64> = floors.windows(2).map(|w| w[0] - w[1]).collect();
    steps.iter().all(|&d| d > 0.0)
        && steps.windows(2).all(|w| w[1] >= 0.5 * w[0])
        && *floors.last().unwrap() < -10.0
}

pub fn energy_scan(core: &SystemCore, refinement: &[usize]) -> EnergyScan {
    let spec = core.unitaries().spec();
    match spec {
        GeneratorSpec::Dispersion { .. } => {
            let boosts = boost_samples(core.model().kind);
            let floors: Vec<f64> = refinement
                .iter()
                .map(|&n| {
                    boosts
                        .iter()
                        .filter_map(|b| spec.floor_at(b, n))
                        .fold(f64::INFINITY, f64::min)
                })
                .collect();
            EnergyScan {
                sizes: refinement.to_vec(),
                unbounded: diverges_downward(&floors),
                floors,
            }
        }
        GeneratorSpec::Fixed => EnergyScan {
            sizes: vec![core.dim()],
            floors: vec![core.unitaries().generator().min_eigenvalue()],
            unbounded: false,
        },
    }
}

pub fn check_energy(s: &AnySystem, p: &TolerancePolicy) -> Result<Verdict> {
    let scan = energy_scan(s.core(), &p.refinement);
    let residual = if scan.unbounded {
        (scan.floors.last().unwrap() - scan.floors[0]).abs()
    } else {
        0.0
    };
    let w = Witness {
        regions: Vec::new(),
        times: Vec::new(),
        detail: format!(
            "spectrum floors {:?} at lattice sizes {:?}",
            scan.floors, scan.sizes
        ),
        value: *scan.floors.last().unwrap(),
    };
    Ok(Verdict::judged(
        ConditionId::EnergyBoundedBelow,
        residual,
        Some(w),
        scan.floors.len(),
        p,
    ))
}

/// Sub-light-crossing times for a separation `dist`, snapped to the
/// system's commensurate steps when it has them.
pub fn causal_times(core: &SystemCore, dist: f64, p: &TolerancePolicy) -> Vec<f64> {
    let c = core.model().light_speed;
    if !dist.is_finite() || dist <= 0.0 {
        return Vec::new();
    }
    let crossing = dist / c;
    let mut times: Vec<f64> = vec![0.0];
    match core.time_step() {
        Some(step) => {
            let mut k = 1.0;
            while k * step < crossing {
                times.push(k * step);
                k += 1.0;
            }
        }
        None => times.extend(p.causal_fractions.iter().map(|f| f * crossing)),
    }
    times.retain(|&t| c * t < dist);
    times.dedup();
    times
}

/// Microcausality, strong causality and no instantaneous spreading.
pub fn check_causality(s: &AnySystem, p: &TolerancePolicy) -> Result<Vec<Verdict>> {
    let core = s.core();
    let m = core.model();
    let catalog = RegionCatalog::build(core, &p.region_pairs);
    let mut probe = Probe::new(core);
    let sharp = core.variant() == Variant::Sharp;

    let mut micro = MaxNorm::new(p);
    let mut strong = MaxNorm::new(p);
    for &(i, j) in &catalog.disjoint_pairs {
        for (a, b) in [(i, j), (j, i)] {
            let (ra, rb) = (&catalog.regions[a], &catalog.regions[b]);
            let dist = region_distance(m, ra, rb);
            for t in causal_times(core, dist, p) {
                debug_assert!(spacetime::is_spacelike_clear(m, ra, rb, t));
                let x = probe.op(ra, 0.0)?;
                let y = probe.op(rb, t)?;
                let xy = x.compose(&y)?;
                let comm = xy.sub(&y.compose(&x)?)?;
                micro.offer(&comm, |v| {
                    witness(&[ra, rb], &[0.0, t], "norm of [op(a, 0), op(b, t)]", v)
                });
                if sharp {
                    strong.offer(&xy, |v| {
                        witness(&[ra, rb], &[0.0, t], "norm of E(a, 0) E(b, t)", v)
                    });
                }
            }
        }
    }
    if micro.samples == 0 {
        return Err(AxiomError::EmptyPlan("spacelike-clear configurations"));
    }
    let micro = micro.verdict(ConditionId::Microcausality, p);
    if !sharp {
        return Ok(vec![
            micro,
            Verdict::not_applicable(ConditionId::StrongCausality, "defined for projections only"),
            Verdict::not_applicable(ConditionId::Niws, "defined for projections only"),
        ]);
    }
    let strong = strong.verdict(ConditionId::StrongCausality, p);

    let n = m.sites;
    let eye = Operator::identity(core.dim());
    let mut niws = MaxNorm::new(p);
    let mut collars: Vec<usize> = vec![(n / 16).max(1), (n / 8).max(1)];
    collars.dedup();
    for r in &catalog.regions {
        for &k in &collars {
            let outer = r.neighborhood(k, n);
            if outer.len() >= n {
                continue;
            }
            let gap = k as f64 * m.spacing;
            for t in causal_times(core, gap, p) {
                let leak = eye.sub(&probe.op(&outer, t)?)?.compose(&probe.op(r, 0.0)?)?;
                niws.offer(&leak, |v| {
                    witness(&[r, &outer], &[0.0, t], "norm of (I - E(outer, t)) E(inner, 0)", v)
                });
            }
        }
    }
    if niws.samples == 0 {
        return Err(AxiomError::EmptyPlan("nested region pairs"));
    }
    Ok(vec![micro, strong, niws.verdict(ConditionId::Niws, p)])
}

/// Coverings compared by the conservation checks.
pub fn conservation_coverings(core: &SystemCore, p: &TolerancePolicy) -> Vec<Vec<Region>> {
    let m = core.model();
    let n = m.sites;
    let mut modes: Vec<FamilyMode> = p
        .region_pairs
        .width_divisors
        .iter()
        .map(|d| FamilyMode::DisjointCovering { block: (n / d).max(1) })
        .collect();
    for d in core.distinguished_regions() {
        modes.push(FamilyMode::CoveringWith(d.clone()));
    }
    let catalog = RegionCatalog::build(core, &p.region_pairs);
    if let Some(r) = catalog.regions.first() {
        modes.push(FamilyMode::CoveringWith(r.clone()));
    }
    let mut out: Vec<Vec<Region>> = Vec::new();
    for mode in modes {
        if let Ok(fams) = make_families(m, &mode) {
            for f in fams {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Probability conservation (sharp) or number conservation (number systems).
pub fn check_conservation(s: &AnySystem, p: &TolerancePolicy) -> Result<Vec<Verdict>> {
    let core = s.core();
    let coverings = conservation_coverings(core, p);
    if coverings.is_empty() {
        return Err(AxiomError::EmptyPlan("coverings"));
    }
    let mut probe = Probe::new(core);
    let mut times = vec![0.0];
    times.extend(p.time_grid.iter().copied());

    let probability = if core.variant() == Variant::Sharp {
        let mut acc = MaxNorm::new(p);
        let ops0: Vec<Operator> = coverings[0]
            .iter()
            .map(|r| probe.op(r, 0.0))
            .collect::<Result<_>>()?;
        let reference = opkernel::lattice_join(&ops0)?;
        for cov in &coverings {
            for &t in &times {
                let ops: Vec<Operator> = cov.iter().map(|r| probe.op(r, t)).collect::<Result<_>>()?;
                let defect = opkernel::lattice_join(&ops)?.sub(&reference)?;
                let members: Vec<&Region> = cov.iter().collect();
                acc.offer(&defect, |v| {
                    let mut w = witness(
                        &members,
                        &[0.0, t],
                        "norm of join(covering at t) - join(first block covering at 0)",
                        v,
                    );
                    w.regions.extend(coverings[0].iter().cloned());
                    w
                });
            }
        }
        acc.verdict(ConditionId::ProbabilityConservation, p)
    } else {
        Verdict::not_applicable(ConditionId::ProbabilityConservation, "defined for projections only")
    };

    let number = if core.variant() == Variant::Number {
        let total = core.total_number().expect("number system");
        let mut acc = MaxNorm::new(p);
        for cov in &coverings {
            let mut sum = Operator::zero(core.dim());
            for r in cov {
                sum = sum.add(&core.localize(r)?)?;
            }
            let members: Vec<&Region> = cov.iter().collect();
            acc.offer(&sum.sub(&total)?, |v| {
                witness(&members, &[0.0], "norm of sum over covering - total number", v)
            });
        }
        for &t in &p.time_grid {
            let moved = total.conjugate_by(probe.evolution(t))?;
            acc.offer(&moved.sub(&total)?, |v| {
                witness(&[], &[t], "norm of U_t N U_-t - N", v)
            });
        }
        acc.verdict(ConditionId::NumberConservation, p)
    } else {
        Verdict::not_applicable(ConditionId::NumberConservation, "defined for number systems only")
    };
    Ok(vec![probability, number])
}

/// Spacelike translations sampled by the no-absolute-velocity check.
pub fn nav_samples(core: &SystemCore) -> Vec<Translation> {
    let n = core.model().sites as i64;
    let a = core.model().spacing / core.model().light_speed;
    let mut shifts = vec![1i64, (n / 8).max(1), (n / 4).max(1)];
    shifts.dedup();
    let mut out = Vec::new();
    for s in shifts {
        for sign in [1i64, -1] {
            out.push(Translation::new(0.0, sign * s));
            out.push(Translation::new(0.5 * s as f64 * a, sign * s));
        }
    }
    out
}

pub fn check_nav(s: &AnySystem, p: &TolerancePolicy) -> Result<Verdict> {
    let core = s.core();
    let m = core.model();
    let samples = nav_samples(core);
    let mut residual: f64 = 0.0;
    let mut wit = None;
    for a in &samples {
        match spacetime::nav_decompose(m, a)? {
            NavDecomposition::NotApplicable => {
                return Ok(Verdict::not_applicable(
                    ConditionId::NoAbsoluteVelocity,
                    "the spacetime has no affine translation structure",
                ))
            }
            NavDecomposition::Absent => {
                if wit.is_none() {
                    residual = 1.0;
                    wit = Some(Witness {
                        regions: Vec::new(),
                        times: vec![a.time],
                        detail: format!(
                            "spacelike translation ({}, {}) is not a difference of timelike ones in this frame",
                            a.time, a.shift
                        ),
                        value: 1.0,
                    });
                }
            }
            NavDecomposition::Decomposed { b, c } => {
                let timelike = m.causal_character(&b) == CausalCharacter::Timelike
                    && m.causal_character(&c) == CausalCharacter::Timelike;
                let diff = b.minus(&c);
                let err = (diff.time - a.time).abs() + (diff.shift - a.shift).unsigned_abs() as f64;
                let bad = if timelike { err } else { 1.0 };
                if bad > residual {
                    residual = bad;
                    wit = Some(Witness {
                        regions: Vec::new(),
                        times: vec![a.time, b.time, c.time],
                        detail: format!("decomposition of ({}, {}) is defective", a.time, a.shift),
                        value: bad,
                    });
                }
            }
        }
    }
    Ok(Verdict::judged(
        ConditionId::NoAbsoluteVelocity,
        residual,
        wit,
        samples.len(),
        p,
    ))
}

/// Every condition, one verdict each, ordered as [`ConditionId::ALL`].
pub fn check_all(s: &AnySystem, p: &TolerancePolicy) -> Result<Vec<Verdict>> {
    let mut all = Vec::with_capacity(ConditionId::ALL.len());
    all.extend(check_statics(s, p)?);
    all.extend(check_covariance(s, p)?);
    all.push(check_energy(s, p)?);
    all.extend(check_causality(s, p)?);
    all.extend(check_conservation(s, p)?);
    all.push(check_nav(s, p)?);
    all.sort_by_key(|v| v.condition);
    debug_assert_eq!(all.len(), ConditionId::ALL.len());
    Ok(all)
}
