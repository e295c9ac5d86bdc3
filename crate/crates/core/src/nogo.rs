//! Theorem-level experiments on the model zoo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{self, AxiomError, ConditionId, Outcome, Probe, RegionCatalog, TolerancePolicy, Verdict, Witness};
use crate::modelzoo::{AnySystem, SharpSystem, SystemCore, Variant, ZooError};
use crate::opkernel::{self, KernelError, Matrix, OpClass, Operator, StateVector, Vector, C64};
use crate::spacetime::{self, Region, Translation};

#[derive(Debug, Error)]
pub enum NogoError {
    #[error("configuration is not spacelike-clear: gap {gap}, time {time}")]
    NotSpacelike { gap: f64, time: f64 },
    #[error("region {0:?} admits no strictly localized state")]
    NotLocalizable(Region),
    #[error("region must be nonempty and proper")]
    ImproperRegion,
    #[error("projections are not orthogonal: |EF| = {0:e}")]
    NotOrthogonal(f64),
    #[error("empty time grid or interval")]
    EmptyGrid,
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Result<T> = std::result::Result<T, NogoError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConclusionKind {
    TrivialDynamics,
    LocalizationVanishes,
    EffectsVanish,
    NumbersVanish,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConclusionCheck {
    pub kind: ConclusionKind,
    pub residual: f64,
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionMatrix {
    pub system_label: String,
    pub verdicts: Vec<Verdict>,
    /// Hypotheses of the theorem matching the system variant.
    pub hypotheses: Vec<ConditionId>,
    /// Every hypothesis passes; a not-applicable no-absolute-velocity
    /// verdict does not count against this.
    pub hypotheses_hold: bool,
    pub conclusion_kind: ConclusionKind,
    pub conclusion_residual: f64,
    pub conclusion_holds: bool,
    pub conclusion_witness: Option<Witness>,
    pub secondary: ConclusionCheck,
}

impl ConditionMatrix {
    pub fn verdict(&self, c: ConditionId) -> &Verdict {
        self.verdicts
            .iter()
            .find(|v| v.condition == c)
            .expect("matrix carries every condition")
    }

    /// Hypotheses whose verdict is not a pass.
    pub fn unmet_hypotheses(&self) -> Vec<ConditionId> {
        self.hypotheses
            .iter()
            .copied()
            .filter(|&c| !hypothesis_met(self.verdict(c)))
            .collect()
    }
}

fn hypothesis_met(v: &Verdict) -> bool {
    v.outcome == Outcome::Pass
        || (v.condition == ConditionId::NoAbsoluteVelocity && v.outcome == Outcome::NotApplicable)
}

/// Theorem hypotheses for each variant.
pub fn hypotheses_for(variant: Variant) -> Vec<ConditionId> {
    use ConditionId::*;
    match variant {
        Variant::Sharp => vec![
            Localizability,
            ProbabilityConservation,
            Covariance,
            EnergyBoundedBelow,
            Microcausality,
        ],
        Variant::Unsharp => vec![
            Additivity,
            Covariance,
            SpatialCovariance,
            EnergyBoundedBelow,
            Microcausality,
            NoAbsoluteVelocity,
        ],
        Variant::Number => vec![
            Additivity,
            Covariance,
            SpatialCovariance,
            EnergyBoundedBelow,
            NumberConservation,
            Microcausality,
            NoAbsoluteVelocity,
        ],
    }
}

fn conclusion_regions(core: &SystemCore, p: &TolerancePolicy) -> Vec<Region> {
    let mut regions = core.distinguished_regions().to_vec();
    for r in RegionCatalog::build(core, &p.region_pairs).regions {
        if !regions.contains(&r) {
            regions.push(r);
        }
    }
    regions
}

/// `max ‖U_t op U_-t − op‖` over sampled regions and times, using the
/// system's actual dynamics even where the assignment is frozen.
pub fn trivial_dynamics(core: &SystemCore, p: &TolerancePolicy) -> Result<ConclusionCheck> {
    let mut best = 0.0;
    let mut witness = None;
    let regions = conclusion_regions(core, p);
    let mut probe = Probe::new(core);
    for &t in &p.time_grid {
        let u = probe.evolution(t).clone();
        for r in &regions {
            let op = core.localize(r)?;
            let r_ = op.conjugate_by(&u)?.sub(&op)?.norm();
            if r_ > best {
                best = r_;
                witness = Some(Witness {
                    regions: vec![r.clone()],
                    times: vec![t],
                    detail: "norm of U_t op(r) U_-t - op(r)".into(),
                    value: r_,
                });
            }
        }
    }
    Ok(finish(ConclusionKind::TrivialDynamics, best, witness, p))
}

/// `max ‖op(Δ)‖` over sampled regions.
pub fn vanishing(core: &SystemCore, kind: ConclusionKind, p: &TolerancePolicy) -> Result<ConclusionCheck> {
    let mut best = 0.0;
    let mut witness = None;
    for r in conclusion_regions(core, p) {
        let v = core.localize(&r)?.norm();
        if v > best {
            best = v;
            witness = Some(Witness {
                regions: vec![r.clone()],
                times: vec![0.0],
                detail: "norm of op(r)".into(),
                value: v,
            });
        }
    }
    Ok(finish(kind, best, witness, p))
}

fn finish(kind: ConclusionKind, residual: f64, witness: Option<Witness>, p: &TolerancePolicy) -> ConclusionCheck {
    let holds = residual <= p.pass_tol;
    ConclusionCheck {
        kind,
        residual,
        holds,
        witness: if holds { None } else { witness },
    }
}

/// Runs every checker and the conclusion matching the system variant.
///
/// Sharp systems report trivial dynamics as the conclusion and vanishing
/// localization as the secondary check; unsharp and number systems report
/// vanishing operators with trivial dynamics as the secondary check.
pub fn condition_matrix(s: &AnySystem, p: &TolerancePolicy) -> Result<ConditionMatrix> {
    let core = s.core();
    let verdicts = axioms::check_all(s, p)?;
    let hypotheses = hypotheses_for(core.variant());
    let hypotheses_hold = hypotheses.iter().all(|&c| {
        verdicts
            .iter()
            .find(|v| v.condition == c)
            .is_some_and(hypothesis_met)
    });
    let (primary, secondary) = match core.variant() {
        Variant::Sharp => (
            trivial_dynamics(core, p)?,
            vanishing(core, ConclusionKind::LocalizationVanishes, p)?,
        ),
        Variant::Unsharp => (
            vanishing(core, ConclusionKind::EffectsVanish, p)?,
            trivial_dynamics(core, p)?,
        ),
        Variant::Number => (
            vanishing(core, ConclusionKind::NumbersVanish, p)?,
            trivial_dynamics(core, p)?,
        ),
    };
    Ok(ConditionMatrix {
        system_label: core.name().to_string(),
        verdicts,
        hypotheses,
        hypotheses_hold,
        conclusion_kind: primary.kind,
        conclusion_residual: primary.residual,
        conclusion_holds: primary.holds,
        conclusion_witness: primary.witness,
        secondary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub initial: Region,
    pub probe: Region,
    pub gap: f64,
    pub time: f64,
    pub leaked_probability: f64,
    pub spacelike_clear: bool,
}

/// Gaussian profile over an arc, cut off outside it and normalized.
pub fn truncated_gaussian(sites: usize, d: &Region) -> Result<Vector> {
    let (start, len) = d.as_arc(sites).ok_or(NogoError::ImproperRegion)?;
    let center = (len as f64 - 1.0) / 2.0;
    let sigma = (len as f64 / 4.0).max(0.5);
    let mut v = Vector::zeros(sites);
    for j in 0..len {
        let x = j as f64 - center;
        v[(start + j) % sites] = C64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0);
    }
    let norm = v.norm();
    Ok(v / C64::new(norm, 0.0))
}

/// A state with `E_d ψ = ψ` exactly.
pub fn strictly_localized_state(s: &SystemCore, d: &Region) -> Result<StateVector> {
    let n = s.model().sites;
    let base = truncated_gaussian(n, d)?;
    let amps = if s.dim() == n {
        base
    } else if s.dim() == n * n {
        let d0 = s
            .distinguished_regions()
            .first()
            .ok_or_else(|| NogoError::NotLocalizable(d.clone()))?;
        base.kronecker(&truncated_gaussian(n, d0)?)
    } else {
        return Err(NogoError::NotLocalizable(d.clone()));
    };
    let psi = StateVector::new(amps)?;
    let projected = s.localize(d)?.apply(&psi)?;
    if (projected - psi.amplitudes()).norm() > 1e-12 {
        return Err(NogoError::NotLocalizable(d.clone()));
    }
    Ok(psi)
}

/// Probability of finding a strictly localized state in a spacelike
/// separated probe region after time `t`.
pub fn superluminal_leakage(s: &SharpSystem, d: &Region, probe: &Region, t: f64) -> Result<LeakageReport> {
    let m = s.model();
    let gap = spacetime::region_distance(m, d, probe);
    if t < 0.0 || !spacetime::is_spacelike_clear(m, d, probe, t) {
        return Err(NogoError::NotSpacelike { gap, time: t });
    }
    let psi = strictly_localized_state(s.core(), d)?;
    let evolved = s.unitaries().generator().evolve_state(t, &psi)?;
    let inside = s.localize(probe)?.apply(&evolved)?;
    Ok(LeakageReport {
        initial: d.clone(),
        probe: probe.clone(),
        gap,
        time: t,
        leaked_probability: inside.norm_squared(),
        spacelike_clear: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuschReport {
    pub region: Region,
    pub max_eigenvalue: f64,
    pub min_eigenvalue: f64,
    pub gap_to_one: f64,
}

/// Extremal eigenvalues of the operator localizing in `d`.
pub fn busch_spectrum(s: &SystemCore, d: &Region) -> Result<BuschReport> {
    if d.is_empty() || d.len() >= s.model().sites {
        return Err(NogoError::ImproperRegion);
    }
    let spec = opkernel::eig_hermitian(&s.localize(d)?)?;
    Ok(BuschReport {
        region: d.clone(),
        max_eigenvalue: spec.max_eigenvalue(),
        min_eigenvalue: spec.min_eigenvalue(),
        gap_to_one: 1.0 - spec.max_eigenvalue(),
    })
}

pub const ZERO_THRESHOLD: f64 = 1e-8;
pub const SPARSE_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSetClass {
    IdenticallyZero,
    ZerosSparse,
    Anomalous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetReport {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub zero_fraction: f64,
    pub max_abs: f64,
    pub classification: ZeroSetClass,
}

/// Samples `f(t) = ⟨U_t ψ, A U_t ψ⟩` and classifies its zero set.
pub fn hegerfeldt_zero_set(h: &Operator, a: &Operator, psi: &StateVector, grid: &[f64]) -> Result<ZeroSetReport> {
    if grid.is_empty() {
        return Err(NogoError::EmptyGrid);
    }
    let spec = opkernel::eig_hermitian(h)?;
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| -> Result<f64> {
            let evolved = spec.evolve_state(t, psi)?;
            Ok(a.expectation(&evolved)?.re)
        })
        .collect::<Result<_>>()?;
    let zeros = values.iter().filter(|v| v.abs() <= ZERO_THRESHOLD).count();
    let zero_fraction = zeros as f64 / values.len() as f64;
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let classification = if max_abs <= ZERO_THRESHOLD {
        ZeroSetClass::IdenticallyZero
    } else if zero_fraction < SPARSE_FRACTION {
        ZeroSetClass::ZerosSparse
    } else {
        ZeroSetClass::Anomalous
    };
    Ok(ZeroSetReport {
        times: grid.to_vec(),
        values,
        zero_fraction,
        max_abs,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BorchersOutcome {
    /// Commutators vanish on the interval and products vanish everywhere.
    LemmaApplies,
    /// A nonvanishing product together with a nonvanishing interval
    /// commutator.
    ContrapositiveWitness,
    /// Nothing to test: a projection is zero, or products vanish anyway.
    Vacuous,
    /// Commutators vanish on the interval yet some product does not.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorchersReport {
    pub outcome: BorchersOutcome,
    pub interval_commutator: f64,
    pub max_product: f64,
    pub product_time: Option<f64>,
}

/// Checks the premise `[E, U_t F U_-t] = 0` on `interval` against
/// `E U_t F U_-t` on a wide symmetric grid.
pub fn borchers_probe(e: &Operator, f: &Operator, h: &Operator, interval: (f64, f64)) -> Result<BorchersReport> {
    let overlap = e.compose(f)?.norm();
    if overlap > 1e-10 {
        return Err(NogoError::NotOrthogonal(overlap));
    }
    let (t0, t1) = interval;
    if t1 <= t0 || t1.is_nan() || t0.is_nan() {
        return Err(NogoError::EmptyGrid);
    }
    if e.norm() <= 1e-12 || f.norm() <= 1e-12 {
        return Ok(BorchersReport {
            outcome: BorchersOutcome::Vacuous,
            interval_commutator: 0.0,
            max_product: 0.0,
            product_time: None,
        });
    }
    let spec = opkernel::eig_hermitian(h)?;
    let moved = |t: f64| f.conjugate_by(&spec.exp_i(t));
    let points = 16;
    let mut comm: f64 = 0.0;
    for k in 0..points {
        let t = t0 + (t1 - t0) * k as f64 / points as f64;
        comm = comm.max(opkernel::commutator_norm(e, &moved(t)?)?);
    }
    let reach = 10.0 * (t1.abs().max(t0.abs()) + 1.0);
    let mut product: f64 = 0.0;
    let mut product_time = None;
    for k in 0..=64 {
        let t = -reach + 2.0 * reach * k as f64 / 64.0;
        let v = e.compose(&moved(t)?)?.norm();
        if v > product {
            product = v;
            product_time = Some(t);
        }
    }
    let outcome = if comm <= 1e-8 {
        if product <= 1e-6 {
            BorchersOutcome::LemmaApplies
        } else {
            BorchersOutcome::Inconsistent
        }
    } else if product > 1e-6 {
        BorchersOutcome::ContrapositiveWitness
    } else {
        BorchersOutcome::Vacuous
    };
    Ok(BorchersReport {
        outcome,
        interval_commutator: comm,
        max_product: product,
        product_time: if product > 1e-6 { product_time } else { None },
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    Matrix::from_fn(dim, dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let a = random_matrix(rng, dim);
    Operator::trusted((&a + a.adjoint()) * C64::new(0.5, 0.0), OpClass::Hermitian)
}

pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    opkernel::eig_hermitian(&random_hermitian(rng, dim))
        .expect("hermitian by construction")
        .eigenvectors()
        .clone()
}

/// Projection onto the span of `cols` columns of `basis`.
fn span_projection(basis: &Matrix, cols: std::ops::Range<usize>) -> Operator {
    let v = basis.columns(cols.start, cols.len()).into_owned();
    Operator::trusted(opkernel::gemm(&v, false, &v, true), OpClass::Projection)
}

pub fn random_projection(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> Operator {
    span_projection(&random_unitary(rng, dim), 0..rank)
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    let v = Vector::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    StateVector::normalized(v).expect("nonzero with probability one")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary<T> {
    pub instances: usize,
    pub counts: Vec<(T, usize)>,
}

impl<T: PartialEq + Copy> BatchSummary<T> {
    fn tally(items: impl IntoIterator<Item = T>) -> Self {
        let mut counts: Vec<(T, usize)> = Vec::new();
        let mut instances = 0;
        for it in items {
            instances += 1;
            match counts.iter_mut().find(|(k, _)| *k == it) {
                Some((_, c)) => *c += 1,
                None => counts.push((it, 1)),
            }
        }
        Self { instances, counts }
    }

    pub fn count(&self, key: T) -> usize {
        self.counts.iter().find(|(k, _)| *k == key).map_or(0, |(_, c)| *c)
    }
}

/// Zero-set classification over random `(h, projection, ψ)` with dim ≤ 16.
pub fn hegerfeldt_batch(seed: u64, instances: usize) -> Result<BatchSummary<ZeroSetClass>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<f64> = (0..200).map(|k| 0.05 * k as f64).collect();
    let mut classes = Vec::with_capacity(instances);
    for _ in 0..instances {
        let dim = rng.gen_range(2..=16);
        let rank = rng.gen_range(1..dim);
        let h = random_hermitian(&mut rng, dim);
        let a = random_projection(&mut rng, dim, rank);
        let psi = random_state(&mut rng, dim);
        classes.push(hegerfeldt_zero_set(&h, &a, &psi, &grid)?.classification);
    }
    Ok(BatchSummary::tally(classes))
}

/// Borchers probes on random `E = I − F` pairs with generic `h`.
pub fn borchers_batch(seed: u64, instances: usize) -> Result<BatchSummary<BorchersOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::with_capacity(instances);
    for _ in 0..instances {
        let dim = rng.gen_range(3..=12);
        let rank = rng.gen_range(1..dim);
        let f = random_projection(&mut rng, dim, rank);
        let e = f.complement();
        let h = random_hermitian(&mut rng, dim);
        outcomes.push(borchers_probe(&e, &f, &h, (0.0, 0.1))?.outcome);
    }
    Ok(BatchSummary::tally(outcomes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaTally {
    /// Instances whose premises held and whose conclusion was tested.
    pub checked: usize,
    /// Instances whose premises failed.
    pub vacuous: usize,
    /// Checked instances whose conclusion failed.
    pub violations: usize,
    pub max_residual: f64,
}

impl LemmaTally {
    fn new() -> Self {
        Self {
            checked: 0,
            vacuous: 0,
            violations: 0,
            max_residual: 0.0,
        }
    }

    fn record(&mut self, residual: f64, fail_tol: f64) {
        self.checked += 1;
        self.max_residual = self.max_residual.max(residual);
        if residual > fail_tol {
            self.violations += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    /// Invariance under every timelike translation forces `E_Δ = 0`.
    pub invariance_forces_zero: LemmaTally,
    /// Covering joins commute with the dynamics.
    pub covering_join_invariant: LemmaTally,
    /// Block-diagonal instances keep `E_0` invariant.
    pub root_lemma: LemmaTally,
}

fn timelike_samples(core: &SystemCore) -> Vec<Translation> {
    let a = core.model().spacing / core.model().light_speed;
    vec![
        Translation::new(1.0, 0),
        Translation::new(2.5 * a, 2),
        Translation::new(2.5 * a, -2),
        Translation::new(4.5 * a, 4),
    ]
}

/// Lemma property checks: the invariance lemma on systems meeting its
/// hypotheses, the covering-join lemma on probability-conserving systems,
/// and the root lemma on seeded block-diagonal instances.
pub fn appendix_lemma_suite(systems: &[AnySystem], p: &TolerancePolicy, seed: u64) -> Result<LemmaSuiteReport> {
    let mut invariance = LemmaTally::new();
    let mut covering = LemmaTally::new();
    for s in systems {
        let core = s.core();
        if core.variant() != Variant::Sharp {
            continue;
        }
        let statics = axioms::check_statics(s, p)?;
        let cov = axioms::check_covariance(s, p)?;
        let nav = axioms::check_nav(s, p)?;
        let passes = |vs: &[Verdict], c: ConditionId| vs.iter().any(|v| v.condition == c && v.holds);
        let localizable = passes(&statics, ConditionId::Localizability);
        let covariant = passes(&cov, ConditionId::Covariance);
        if localizable && covariant && nav.holds {
            let translations: Vec<Operator> = timelike_samples(core)
                .iter()
                .map(|a| core.unitaries().translation(a))
                .collect::<std::result::Result<_, _>>()?;
            for r in conclusion_regions(core, p) {
                let e = core.localize(&r)?;
                let mut invariant = true;
                for u in &translations {
                    if e.conjugate_by(u)?.sub(&e)?.norm() > p.pass_tol {
                        invariant = false;
                        break;
                    }
                }
                if invariant {
                    invariance.record(e.norm(), p.fail_tol);
                } else {
                    invariance.vacuous += 1;
                }
            }
        } else {
            invariance.vacuous += 1;
        }

        let conservation = axioms::check_conservation(s, p)?;
        if passes(&conservation, ConditionId::ProbabilityConservation) && covariant {
            let mut probe = Probe::new(core);
            for cov_regions in axioms::conservation_coverings(core, p) {
                let ops: Vec<Operator> = cov_regions
                    .iter()
                    .map(|r| core.localize(r))
                    .collect::<std::result::Result<_, _>>()?;
                let join = opkernel::lattice_join(&ops)?;
                let mut worst: f64 = 0.0;
                for &t in &p.time_grid {
                    let u = probe.evolution(t).clone();
                    worst = worst.max(join.conjugate_by(&u)?.sub(&join)?.norm());
                }
                covering.record(worst, p.fail_tol);
            }
        } else {
            covering.vacuous += 1;
        }
    }

    let mut root = LemmaTally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let (residual, premises) = root_lemma_instance(&mut rng, p)?;
        if premises {
            root.record(residual, p.pass_tol.min(1e-10));
        } else {
            root.vacuous += 1;
        }
    }
    Ok(LemmaSuiteReport {
        invariance_forces_zero: invariance,
        covering_join_invariant: covering,
        root_lemma: root,
    })
}

/// One root-lemma instance: `E_0` spans an invariant block, `E_1 + E_2`
/// the complementary block, and `h` is block diagonal. Returns the
/// conclusion residual and whether the premises verified numerically.
pub fn root_lemma_instance(rng: &mut ChaCha8Rng, p: &TolerancePolicy) -> Result<(f64, bool)> {
    let dim = rng.gen_range(4..=16);
    let r0 = rng.gen_range(1..dim - 2);
    let rest = dim - r0;
    let r1 = rng.gen_range(1..rest);
    let basis = random_unitary(rng, dim);

    let h0 = random_hermitian(rng, r0);
    let h1 = random_hermitian(rng, rest);
    let mut block = Matrix::zeros(dim, dim);
    block.view_mut((0, 0), (r0, r0)).copy_from(h0.matrix());
    block.view_mut((r0, r0), (rest, rest)).copy_from(h1.matrix());
    let h = Operator::trusted(&basis * block * basis.adjoint(), OpClass::Hermitian);

    // E_1 is a generic subspace of the second block, E_2 its complement there
    let inner = random_unitary(rng, rest);
    let mut sub = Matrix::zeros(dim, rest);
    sub.view_mut((r0, 0), (rest, rest)).copy_from(&inner);
    let sub = &basis * sub;
    let e0 = span_projection(&basis, 0..r0);
    let e1 = span_projection(&sub, 0..r1);
    let e2 = span_projection(&sub, r1..rest);

    let spec = opkernel::eig_hermitian(&h)?;
    let join = opkernel::lattice_join(&[e0.clone(), e1.clone(), e2.clone()])?;
    let mut premise: f64 = e0.compose(&e1)?.norm().max(e0.compose(&e2)?.norm());
    let mut residual: f64 = 0.0;
    for k in 0..8 {
        let t = 0.01 * k as f64;
        let u = spec.exp_i(t);
        premise = premise.max(opkernel::commutator_norm(&e0, &e1.conjugate_by(&u)?)?);
        premise = premise.max(opkernel::commutator_norm(&e0, &e2.conjugate_by(&u)?)?);
    }
    for &t in &p.time_grid {
        let u = spec.exp_i(t);
        premise = premise.max(join.conjugate_by(&u)?.sub(&join)?.norm());
        residual = residual.max(e0.conjugate_by(&u)?.sub(&e0)?.norm());
    }
    Ok((residual, premise <= p.pass_tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureEntry {
    pub system: String,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub trivial_dynamics_residual: f64,
}

/// For every system whose theorem hypotheses hold but whose conclusion
/// fails, records whether its dynamics is trivial. Exploratory only.
pub fn conjecture_probe(matrices: &[ConditionMatrix]) -> Vec<ConjectureEntry> {
    matrices
        .iter()
        .filter(|m| m.hypotheses_hold && !m.conclusion_holds)
        .map(|m| {
            let trivial = if m.conclusion_kind == ConclusionKind::TrivialDynamics {
                m.conclusion_residual
            } else {
                m.secondary.residual
            };
            ConjectureEntry {
                system: m.system_label.clone(),
                hypotheses_hold: m.hypotheses_hold,
                conclusion_holds: m.conclusion_holds,
                trivial_dynamics_residual: trivial,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelzoo::{self, Dispersion};
    use crate::spacetime::{SpaceKind, SpaceModel};

    fn model(kind: SpaceKind, n: usize, a: f64) -> SpaceModel {
        SpaceModel::new(kind, n, a).unwrap()
    }

    #[test]
    fn leakage_examples() {
        let m = model(SpaceKind::LineIsotropic, 64, 0.25);
        let s = modelzoo::build_standard(&m, Dispersion::Relativistic { mass: 1.0 }).unwrap();
        let d = Region::interval(20, 4, 64);
        let probe = Region::interval(36, 8, 64);
        let gap = spacetime::region_distance(&m, &d, &probe);
        assert_eq!(superluminal_leakage(&s, &d, &probe, 0.0).unwrap().leaked_probability, 0.0);
        let r = superluminal_leakage(&s, &d, &probe, 0.5 * gap).unwrap();
        assert!(r.leaked_probability > 1e-12);
        assert!(matches!(
            superluminal_leakage(&s, &d, &probe, gap),
            Err(NogoError::NotSpacelike { .. })
        ));
        let zero = modelzoo::build_standard(&m, Dispersion::Zero).unwrap();
        assert_eq!(superluminal_leakage(&zero, &d, &probe, 0.5 * gap).unwrap().leaked_probability, 0.0);
    }

    #[test]
    fn truncated_gaussian_is_strictly_localized() {
        let v = truncated_gaussian(16, &Region::interval(14, 5, 16)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-14);
        for x in [3usize, 4, 10, 13] {
            assert_eq!(v[x], C64::new(0.0, 0.0));
        }
        assert!(v[0].re > 0.0);
    }

    #[test]
    fn busch_examples() {
        let m = model(SpaceKind::Circle, 16, 1.0);
        let me = modelzoo::build_measure_effect(&m).unwrap();
        let r = busch_spectrum(me.core(), &Region::new(0..8)).unwrap();
        assert_eq!(r.max_eigenvalue, 0.5);
        assert_eq!(r.min_eigenvalue, 0.5);
        let dirac = modelzoo::build_dirac_positive(&model(SpaceKind::LineIsotropic, 32, 1.0), 1.0).unwrap();
        let r = busch_spectrum(dirac.core(), &Region::interval(12, 4, 32)).unwrap();
        assert!(r.gap_to_one > 1e-8 && r.max_eigenvalue > 1e-8, "{r:?}");
        assert!(busch_spectrum(dirac.core(), &Region::empty()).is_err());
    }

    #[test]
    fn zero_set_examples() {
        let grid: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_hermitian(&mut rng, 6);
        let psi = random_state(&mut rng, 6);
        let r = hegerfeldt_zero_set(&h, &Operator::zero(6), &psi, &grid).unwrap();
        assert_eq!(r.classification, ZeroSetClass::IdenticallyZero);
        let r = hegerfeldt_zero_set(&h, &Operator::identity(6), &psi, &grid).unwrap();
        assert_eq!(r.classification, ZeroSetClass::ZerosSparse);
        assert_eq!(r.zero_fraction, 0.0);
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn borchers_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // invariant orthogonal blocks
        let h = Operator::real_diagonal(&[0.0, 1.0, 2.5, 4.0]);
        let e = Operator::real_diagonal(&[1.0, 1.0, 0.0, 0.0]);
        let f = Operator::real_diagonal(&[0.0, 0.0, 1.0, 0.0]);
        let r = borchers_probe(&e, &f, &h, (0.0, 0.1)).unwrap();
        assert_eq!(r.outcome, BorchersOutcome::LemmaApplies);
        assert_eq!(r.max_product, 0.0);

        let f = random_projection(&mut rng, 5, 2);
        let e = f.complement();
        let h = random_hermitian(&mut rng, 5);
        let r = borchers_probe(&e, &f, &h, (0.0, 0.1)).unwrap();
        assert_eq!(r.outcome, BorchersOutcome::ContrapositiveWitness);
        assert!(r.interval_commutator > 1e-8 && r.max_product > 1e-6);

        let r = borchers_probe(&Operator::zero(5), &f, &h, (0.0, 0.1)).unwrap();
        assert_eq!(r.outcome, BorchersOutcome::Vacuous);
        assert!(matches!(
            borchers_probe(&f, &f, &h, (0.0, 0.1)),
            Err(NogoError::NotOrthogonal(_))
        ));
    }

    #[test]
    fn root_lemma_instances_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = TolerancePolicy::default();
        for _ in 0..5 {
            let (residual, premises) = root_lemma_instance(&mut rng, &p).unwrap();
            assert!(premises);
            assert!(residual <= 1e-10, "{residual}");
        }
    }

    #[test]
    fn zero_hamiltonian_matrix() {
        let m = model(SpaceKind::LineDistinguishedFrame, 32, 1.0);
        let s: AnySystem = modelzoo::build_standard(&m, Dispersion::Zero).unwrap().into();
        let cm = condition_matrix(&s, &TolerancePolicy::default()).unwrap();
        assert!(cm.hypotheses_hold, "{:?}", cm.unmet_hypotheses());
        assert!(cm.conclusion_holds);
        assert!(cm.conclusion_residual <= 1e-10);
        assert!(cm.verdict(ConditionId::NoAbsoluteVelocity).failed());
        assert!(!cm.secondary.holds);
    }

    #[test]
    fn frozen_matrix() {
        let m = model(SpaceKind::LineIsotropic, 32, 1.0);
        let s: AnySystem = modelzoo::build_frozen(&m, 1.0).unwrap().into();
        let cm = condition_matrix(&s, &TolerancePolicy::default()).unwrap();
        assert_eq!(cm.unmet_hypotheses(), vec![ConditionId::Covariance]);
        assert!(!cm.conclusion_holds);
    }

    #[test]
    fn measure_effect_matrix() {
        let m = model(SpaceKind::Circle, 32, 1.0);
        let s: AnySystem = modelzoo::build_measure_effect(&m).unwrap().into();
        let cm = condition_matrix(&s, &TolerancePolicy::default()).unwrap();
        assert!(cm.hypotheses_hold, "{:?}", cm.unmet_hypotheses());
        assert_eq!(cm.conclusion_kind, ConclusionKind::EffectsVanish);
        assert!(!cm.conclusion_holds);
        assert_eq!(cm.secondary.residual, 0.0);
        let probe = conjecture_probe(&[cm]);
        assert_eq!(probe.len(), 1);
        assert_eq!(probe[0].trivial_dynamics_residual, 0.0);
    }
}
