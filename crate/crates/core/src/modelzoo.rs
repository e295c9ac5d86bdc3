//! Concrete localization systems on lattice models.
//!
//! Position-space operators act on `C^N` with the site basis; momentum is
//! diagonalized exactly by the discrete Fourier basis with symmetric mode
//! numbers, and every dispersion is applied through that decomposition.

use std::f64::consts::PI;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::opkernel::{
    self, KernelError, Matrix, OpClass, Operator, SpectralDecomposition, StateVector, C64,
};
use crate::spacetime::{Region, SpaceKind, SpaceModel, SpacetimeError, Translation};

/// Largest Fock lattice accepted (dimension `2^10`).
pub const MAX_FOCK_SITES: usize = 10;
/// Largest per-factor lattice for the tensor construction (dimension `N^2`).
pub const MAX_TENSOR_SITES: usize = 32;

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("hopping must be finite, got {0}")]
    InvalidHopping(f64),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("construction needs a {expected:?} model, got {got:?}")]
    WrongModel { expected: SpaceKind, got: SpaceKind },
    #[error("lattice too large: {sites} sites (limit {limit})")]
    TooLarge { sites: usize, limit: usize },
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Result<T> = std::result::Result<T, ZooError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dispersion {
    Zero,
    NonRelativistic { mass: f64 },
    Relativistic { mass: f64 },
    Momentum,
}

impl Dispersion {
    pub fn energy(&self, p: f64) -> f64 {
        match *self {
            Dispersion::Zero => 0.0,
            Dispersion::NonRelativistic { mass } => p * p / (2.0 * mass),
            Dispersion::Relativistic { mass } => (p * p + mass * mass).sqrt(),
            Dispersion::Momentum => p,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Dispersion::NonRelativistic { mass } | Dispersion::Relativistic { mass } => {
                check_mass(mass)
            }
            _ => Ok(()),
        }
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(ZooError::InvalidMass(mass))
    }
}

/// Mode numbers `k` in `(-N/2, N/2]`, ascending.
pub fn mode_numbers(sites: usize) -> Vec<i64> {
    let n = sites as i64;
    (-((n - 1) / 2)..=n / 2).collect()
}

/// Lattice momenta `2πk / (N a)`, ascending.
pub fn momentum_values(m: &SpaceModel) -> Vec<f64> {
    let len = m.length();
    mode_numbers(m.sites)
        .into_iter()
        .map(|k| 2.0 * PI * k as f64 / len)
        .collect()
}

/// Plane-wave basis: column `j` is `exp(i p_j x a) / √N`.
pub fn fourier_basis(sites: usize) -> Matrix {
    let n = sites as i64;
    let norm = 1.0 / (sites as f64).sqrt();
    let modes = mode_numbers(sites);
    Matrix::from_fn(sites, sites, |x, j| {
        let phase = (modes[j] * x as i64).rem_euclid(n) as f64 * 2.0 * PI / sites as f64;
        C64::from_polar(norm, phase)
    })
}

pub fn momentum_decomposition(m: &SpaceModel) -> SpectralDecomposition {
    SpectralDecomposition::from_parts(momentum_values(m), fourier_basis(m.sites))
        .expect("square basis")
}

/// Indicator of a region in the site basis (spectral projection of position).
pub fn position_projection(m: &SpaceModel, d: &Region) -> Result<Operator> {
    check_region(m, d)?;
    Ok(indicator(m.sites, d))
}

fn indicator(sites: usize, d: &Region) -> Operator {
    let diag: Vec<f64> = (0..sites)
        .map(|x| if d.contains(x) { 1.0 } else { 0.0 })
        .collect();
    Operator::real_diagonal(&diag)
}

/// `S e_x = e_{x+1}`, periodic.
pub fn site_shift(sites: usize) -> Operator {
    let mut mat = Matrix::zeros(sites, sites);
    for x in 0..sites {
        mat[((x + 1) % sites, x)] = C64::new(1.0, 0.0);
    }
    Operator::trusted(mat, OpClass::Unitary)
}

fn check_region(m: &SpaceModel, d: &Region) -> Result<()> {
    m.validate(d)
        .map_err(|e| ZooError::InvalidRegion(e.to_string()))
}

fn check_proper(m: &SpaceModel, d: &Region) -> Result<()> {
    check_region(m, d)?;
    if d.is_empty() || d.len() >= m.sites {
        return Err(ZooError::InvalidRegion(format!(
            "distinguished region must be nonempty and proper, got {} of {} sites",
            d.len(),
            m.sites
        )));
    }
    Ok(())
}

/// Direction `b = (b_t, b_x)` of a one-parameter translation group, with
/// `b_x` in length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boost {
    pub time: f64,
    pub space: f64,
}

impl Boost {
    pub fn new(time: f64, space: f64) -> Self {
        Self { time, space }
    }
}

/// How the spectrum of `H(b)` can be re-evaluated on refined lattices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `H` is a function of lattice momentum; `H(b) = b_t ε(P) − b_x P`.
    Dispersion { dispersion: Dispersion, length: f64 },
    /// A single generator with no refinement family.
    Fixed,
}

impl GeneratorSpec {
    /// Smallest eigenvalue of `H(b)` on a lattice of `sites` sites with the
    /// same physical length. `None` for fixed generators.
    pub fn floor_at(&self, b: &Boost, sites: usize) -> Option<f64> {
        match *self {
            GeneratorSpec::Dispersion { dispersion, length } => {
                mode_numbers(sites)
                    .into_iter()
                    .map(|k| {
                        let p = 2.0 * PI * k as f64 / length;
                        b.time * dispersion.energy(p) - b.space * p
                    })
                    .reduce(f64::min)
            }
            GeneratorSpec::Fixed => None,
        }
    }
}

/// The time evolution `t ↦ exp(itH)` together with the lattice shift.
#[derive(Debug, Clone)]
pub struct UnitaryFamily {
    generator: SpectralDecomposition,
    spatial_shift: Operator,
    momentum: Option<Operator>,
    spec: GeneratorSpec,
}

impl UnitaryFamily {
    pub fn generator(&self) -> &SpectralDecomposition {
        &self.generator
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn spatial_shift(&self) -> &Operator {
        &self.spatial_shift
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// `U_t = exp(itH)`.
    pub fn evolution(&self, t: f64) -> Operator {
        self.generator.exp_i(t)
    }

    /// `U(a) = exp(itH) S^s` for `a = (t, s)`.
    pub fn translation(&self, a: &Translation) -> Result<Operator> {
        let n = self.dim();
        let mut shift = Operator::identity(n);
        let step = if a.shift >= 0 {
            self.spatial_shift.clone()
        } else {
            self.spatial_shift.adjoint()
        };
        for _ in 0..a.shift.unsigned_abs() {
            shift = shift.compose(&step)?;
        }
        Ok(self.evolution(a.time).compose(&shift)?)
    }

    /// `H(b) = b_t H − b_x P`. `None` when the family has no momentum
    /// generator and `b` has a spatial part.
    pub fn hamiltonian_of(&self, b: &Boost) -> Option<Operator> {
        let h = self.generator.reconstruct().scale(b.time);
        if b.space == 0.0 {
            return Some(h);
        }
        let p = self.momentum.as_ref()?;
        h.sub(&p.scale(b.space)).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathologyMode {
    OnlyD0,
    AllButD0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Sharp,
    Unsharp,
    Number,
}

#[derive(Debug, Clone)]
enum Localizer {
    Indicator,
    Tensor { d0: Region },
    Pathological { d0: Region, mode: PathologyMode },
    Threshold,
    MeasureScalar,
    /// Rows `2x`, `2x+1` of `w` span site `x`; `w` is an isometry onto the
    /// positive-energy subspace.
    DiracCompression { w: Matrix },
    Occupation,
}

/// Shared representation of all three system variants.
#[derive(Debug, Clone)]
pub struct SystemCore {
    name: String,
    description: String,
    variant: Variant,
    model: SpaceModel,
    localizer: Localizer,
    unitaries: UnitaryFamily,
    frozen: bool,
    time_step: Option<f64>,
    distinguished: Vec<Region>,
    region_width_limit: Option<usize>,
}

/// Widest region for which the positive-energy Dirac effects keep a
/// spectral gap below 1 resolvable in double precision.
pub const DIRAC_REGION_WIDTH: usize = 8;

impl SystemCore {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn model(&self) -> &SpaceModel {
        &self.model
    }

    pub fn unitaries(&self) -> &UnitaryFamily {
        &self.unitaries
    }

    pub fn dim(&self) -> usize {
        self.unitaries.dim()
    }

    /// True when region assignments ignore the dynamics.
    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Times at which the dynamics is exactly a lattice shift, if restricted.
    pub fn time_step(&self) -> Option<f64> {
        self.time_step
    }

    /// Regions singled out by the construction (e.g. `Δ₀`).
    pub fn distinguished_regions(&self) -> &[Region] {
        &self.distinguished
    }

    /// Upper bound on the width of sampled regions, if the system has one.
    pub fn region_width_limit(&self) -> Option<usize> {
        self.region_width_limit
    }

    /// Operator for region `d` on the initial hypersurface.
    pub fn localize(&self, d: &Region) -> Result<Operator> {
        check_region(&self.model, d)?;
        let n = self.model.sites;
        Ok(match &self.localizer {
            Localizer::Indicator => indicator(n, d),
            Localizer::Tensor { d0 } => opkernel::tensor_product(&indicator(n, d), &indicator(n, d0)),
            Localizer::Pathological { d0, mode } => {
                if d == d0 {
                    indicator(n, d)
                } else {
                    match mode {
                        PathologyMode::OnlyD0 => Operator::zero(n),
                        PathologyMode::AllButD0 => Operator::identity(n),
                    }
                }
            }
            Localizer::Threshold => {
                if 3 * d.len() >= 2 * n {
                    Operator::identity(n)
                } else {
                    Operator::zero(n)
                }
            }
            Localizer::MeasureScalar => Operator::scalar(n, self.model.measure(d)),
            Localizer::DiracCompression { w } => {
                let rows: Vec<usize> = d.sites().iter().flat_map(|&x| [2 * x, 2 * x + 1]).collect();
                let sel = w.select_rows(rows.iter());
                Operator::trusted(opkernel::gemm(&sel, true, &sel, false), OpClass::Effect)
            }
            Localizer::Occupation => {
                let mask: usize = d.sites().iter().map(|&x| 1usize << x).sum();
                let diag: Vec<f64> = (0..1usize << n)
                    .map(|state| (state & mask).count_ones() as f64)
                    .collect();
                Operator::real_diagonal(&diag)
            }
        })
    }

    /// Operator for `d` on the hypersurface at time `t`.
    pub fn localize_op(&self, d: &Region, t: f64) -> Result<Operator> {
        if self.frozen || t == 0.0 {
            return self.localize(d);
        }
        self.localize_evolved(d, &self.unitaries.evolution(t))
    }

    /// As [`localize_op`](Self::localize_op) with a precomputed `U_t`.
    pub fn localize_evolved(&self, d: &Region, u_t: &Operator) -> Result<Operator> {
        let op = self.localize(d)?;
        if self.frozen {
            return Ok(op);
        }
        Ok(op.conjugate_by(u_t)?)
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        Ok(psi.evolve(&self.unitaries.evolution(t))?)
    }

    /// Total particle number (number systems) or `None`.
    pub fn total_number(&self) -> Option<Operator> {
        match self.variant {
            Variant::Number => self.localize(&self.model.all_sites()).ok(),
            _ => None,
        }
    }
}

macro_rules! system_wrapper {
    ($name:ident, $variant:expr) => {
        #[derive(Debug, Clone)]
        pub struct $name(SystemCore);

        impl $name {
            fn wrap(core: SystemCore) -> Self {
                debug_assert_eq!(core.variant, $variant);
                Self(core)
            }

            pub fn core(&self) -> &SystemCore {
                &self.0
            }
        }

        impl Deref for $name {
            type Target = SystemCore;
            fn deref(&self) -> &SystemCore {
                &self.0
            }
        }
    };
}

system_wrapper!(SharpSystem, Variant::Sharp);
system_wrapper!(UnsharpSystem, Variant::Unsharp);
system_wrapper!(NumberSystem, Variant::Number);

#[derive(Debug, Clone)]
pub enum AnySystem {
    Sharp(SharpSystem),
    Unsharp(UnsharpSystem),
    Number(NumberSystem),
}

impl AnySystem {
    pub fn core(&self) -> &SystemCore {
        match self {
            AnySystem::Sharp(s) => s.core(),
            AnySystem::Unsharp(s) => s.core(),
            AnySystem::Number(s) => s.core(),
        }
    }

    pub fn as_sharp(&self) -> Option<&SharpSystem> {
        match self {
            AnySystem::Sharp(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_unsharp(&self) -> Option<&UnsharpSystem> {
        match self {
            AnySystem::Unsharp(s) => Some(s),
            _ => None,
        }
    }
}

impl Deref for AnySystem {
    type Target = SystemCore;
    fn deref(&self) -> &SystemCore {
        self.core()
    }
}

impl From<SharpSystem> for AnySystem {
    fn from(s: SharpSystem) -> Self {
        AnySystem::Sharp(s)
    }
}

impl From<UnsharpSystem> for AnySystem {
    fn from(s: UnsharpSystem) -> Self {
        AnySystem::Unsharp(s)
    }
}

impl From<NumberSystem> for AnySystem {
    fn from(s: NumberSystem) -> Self {
        AnySystem::Number(s)
    }
}

/// Default distinguished region: `N/8` sites starting at `7N/16`, clear of
/// the periodic seam and not aligned with block coverings.
pub fn default_d0(m: &SpaceModel) -> Region {
    let width = (m.sites / 8).max(1);
    Region::interval(7 * m.sites / 16, width, m.sites)
}

fn dispersion_family(m: &SpaceModel, dispersion: Dispersion) -> UnitaryFamily {
    let p = momentum_decomposition(m);
    UnitaryFamily {
        generator: p.map_real(|k| dispersion.energy(k)),
        spatial_shift: site_shift(m.sites),
        momentum: Some(p.reconstruct()),
        spec: GeneratorSpec::Dispersion {
            dispersion,
            length: m.length(),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn core(
    name: &str,
    description: &str,
    variant: Variant,
    model: &SpaceModel,
    localizer: Localizer,
    unitaries: UnitaryFamily,
    frozen: bool,
    distinguished: Vec<Region>,
) -> SystemCore {
    SystemCore {
        name: name.to_string(),
        description: description.to_string(),
        variant,
        model: *model,
        localizer,
        unitaries,
        frozen,
        time_step: None,
        distinguished,
        region_width_limit: None,
    }
}

/// Position projections with the dynamics generated by `ε(P)`.
///
/// For [`Dispersion::Zero`] the time generator vanishes; on an isotropic
/// line the boosted generators `H(b) = −b_x P` remain.
pub fn build_standard(m: &SpaceModel, h: Dispersion) -> Result<SharpSystem> {
    h.validate()?;
    let (name, description) = match h {
        Dispersion::Zero => ("zero", "position projections with vanishing time generator"),
        Dispersion::NonRelativistic { .. } => (
            "standard_nonrelativistic",
            "position projections with H = P^2/2m",
        ),
        Dispersion::Relativistic { .. } => (
            "newton_wigner",
            "position projections with H = (P^2 + m^2)^(1/2)",
        ),
        Dispersion::Momentum => ("momentum_hamiltonian", "position projections with H = P"),
    };
    let mut c = core(
        name,
        description,
        Variant::Sharp,
        m,
        Localizer::Indicator,
        dispersion_family(m, h),
        false,
        Vec::new(),
    );
    if h == Dispersion::Momentum {
        c.time_step = Some(m.spacing / m.light_speed);
    }
    Ok(SharpSystem::wrap(c))
}

/// Position projections whose time-translated assignment ignores the
/// dynamics: `E_{Δ+t} = E_Δ`.
pub fn build_frozen(m: &SpaceModel, mass: f64) -> Result<SharpSystem> {
    check_mass(mass)?;
    Ok(SharpSystem::wrap(core(
        "frozen",
        "position projections frozen in time under H = P^2/2m",
        Variant::Sharp,
        m,
        Localizer::Indicator,
        dispersion_family(m, Dispersion::NonRelativistic { mass }),
        true,
        Vec::new(),
    )))
}

/// `Δ₀` gets its position projection; every other region gets 0 or I.
pub fn build_pathological(
    m: &SpaceModel,
    mass: f64,
    d0: &Region,
    mode: PathologyMode,
) -> Result<SharpSystem> {
    check_mass(mass)?;
    check_proper(m, d0)?;
    let (name, description) = match mode {
        PathologyMode::OnlyD0 => ("only_d0", "position projection on one region, zero elsewhere"),
        PathologyMode::AllButD0 => (
            "all_but_d0",
            "position projection on one region, identity elsewhere",
        ),
    };
    Ok(SharpSystem::wrap(core(
        name,
        description,
        Variant::Sharp,
        m,
        Localizer::Pathological {
            d0: d0.clone(),
            mode,
        },
        dispersion_family(m, Dispersion::NonRelativistic { mass }),
        false,
        vec![d0.clone()],
    )))
}

/// `E_Δ = E_Δ ⊗ E_{Δ₀}` on `C^N ⊗ C^N` with `U_t = I ⊗ exp(itP²/2m)`.
pub fn build_tensor_counterexample(m: &SpaceModel, mass: f64, d0: &Region) -> Result<SharpSystem> {
    check_mass(mass)?;
    check_proper(m, d0)?;
    if m.sites > MAX_TENSOR_SITES {
        return Err(ZooError::TooLarge {
            sites: m.sites,
            limit: MAX_TENSOR_SITES,
        });
    }
    let n = m.sites;
    let p = momentum_decomposition(m);
    let h = p.map_real(|k| k * k / (2.0 * mass));
    let eye = Matrix::identity(n, n);
    let vecs = eye.kronecker(h.eigenvectors());
    let vals: Vec<f64> = (0..n).flat_map(|_| h.eigenvalues().iter().copied()).collect();
    let generator = SpectralDecomposition::from_parts(vals, vecs)?;
    let shift = opkernel::tensor_product(&site_shift(n), &Operator::identity(n));
    let unitaries = UnitaryFamily {
        generator,
        spatial_shift: Operator::trusted(shift.into_matrix(), OpClass::Unitary),
        momentum: None,
        spec: GeneratorSpec::Fixed,
    };
    Ok(SharpSystem::wrap(core(
        "tensor_counterexample",
        "position projections tensored with a fixed region, free evolution on the second factor",
        Variant::Sharp,
        m,
        Localizer::Tensor { d0: d0.clone() },
        unitaries,
        false,
        vec![d0.clone()],
    )))
}

fn require_circle(m: &SpaceModel) -> Result<()> {
    if m.kind != SpaceKind::Circle {
        return Err(ZooError::WrongModel {
            expected: SpaceKind::Circle,
            got: m.kind,
        });
    }
    Ok(())
}

/// Free particle (mass 1) on the circle with rotations as spatial shifts.
fn circle_family(m: &SpaceModel) -> UnitaryFamily {
    let mut fam = dispersion_family(m, Dispersion::NonRelativistic { mass: 1.0 });
    fam.spec = GeneratorSpec::Fixed;
    fam
}

/// `E_Δ = I` if `μ(Δ) ≥ 2/3`, else 0.
pub fn build_cylinder_threshold(m: &SpaceModel) -> Result<SharpSystem> {
    require_circle(m)?;
    let n = m.sites;
    let large = Region::interval(n / 8, n - n / 4, n);
    let half = Region::interval(n / 4, n / 2, n);
    Ok(SharpSystem::wrap(core(
        "cylinder_threshold",
        "identity on regions of measure at least 2/3, zero otherwise",
        Variant::Sharp,
        m,
        Localizer::Threshold,
        circle_family(m),
        false,
        vec![large, half],
    )))
}

/// `A_Δ = μ(Δ) I`.
pub fn build_measure_effect(m: &SpaceModel) -> Result<UnsharpSystem> {
    require_circle(m)?;
    Ok(UnsharpSystem::wrap(core(
        "measure_effect",
        "effects equal to the normalized measure times the identity",
        Variant::Unsharp,
        m,
        Localizer::MeasureScalar,
        circle_family(m),
        false,
        vec![default_d0(m)],
    )))
}

pub fn alpha() -> Matrix {
    Matrix::from_row_slice(
        2,
        2,
        &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    )
}

pub fn beta() -> Matrix {
    Matrix::from_row_slice(
        2,
        2,
        &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    )
}

/// Lattice Dirac operator `H_D = P ⊗ α + m I ⊗ β` on `C^N ⊗ C^2`.
pub fn dirac_hamiltonian(m: &SpaceModel, mass: f64) -> Operator {
    let p = momentum_decomposition(m).reconstruct();
    let eye = Matrix::identity(m.sites, m.sites);
    let mat = p.matrix().kronecker(&alpha()) + eye.kronecker(&beta()) * C64::new(mass, 0.0);
    Operator::trusted(mat, OpClass::Hermitian)
}

/// Isometry `W` from `C^N` onto the positive-energy subspace: column `k` is
/// the plane wave `k` times the positive spinor `(E+m, p)/norm`.
pub fn positive_energy_isometry(m: &SpaceModel, mass: f64) -> Matrix {
    let n = m.sites;
    let basis = fourier_basis(n);
    let ps = momentum_values(m);
    let mut w = Matrix::zeros(2 * n, n);
    for (k, &p) in ps.iter().enumerate() {
        let e = (p * p + mass * mass).sqrt();
        let norm = ((e + mass).powi(2) + p * p).sqrt();
        let (up, down) = ((e + mass) / norm, p / norm);
        for x in 0..n {
            w[(2 * x, k)] = basis[(x, k)] * up;
            w[(2 * x + 1, k)] = basis[(x, k)] * down;
        }
    }
    w
}

/// Spectral projection `F = W W†` of `H_D` onto positive energies.
pub fn positive_energy_projection(m: &SpaceModel, mass: f64) -> Operator {
    let w = positive_energy_isometry(m, mass);
    Operator::trusted(opkernel::gemm(&w, false, &w, true), OpClass::Projection)
}

fn dirac_d0(m: &SpaceModel) -> Region {
    let width = (m.sites / 8).clamp(1, DIRAC_REGION_WIDTH);
    Region::interval((m.sites - width) / 2, width, m.sites)
}

/// Compressions `F E_Δ F` of spinor position projections to the
/// positive-energy subspace, written in the plane-wave basis of that subspace.
pub fn build_dirac_positive(m: &SpaceModel, mass: f64) -> Result<UnsharpSystem> {
    check_mass(mass)?;
    let ps = momentum_values(m);
    let n = m.sites;
    let energies: Vec<f64> = ps.iter().map(|p| (p * p + mass * mass).sqrt()).collect();
    let generator = SpectralDecomposition::from_parts(energies, Matrix::identity(n, n))?;
    let shift_diag: Vec<C64> = ps.iter().map(|p| C64::from_polar(1.0, -p * m.spacing)).collect();
    let shift = Matrix::from_diagonal(&nalgebra::DVector::from_vec(shift_diag));
    let unitaries = UnitaryFamily {
        generator,
        spatial_shift: Operator::trusted(shift, OpClass::Unitary),
        momentum: Some(Operator::real_diagonal(&ps)),
        spec: GeneratorSpec::Dispersion {
            dispersion: Dispersion::Relativistic { mass },
            length: m.length(),
        },
    };
    let mut c = core(
        "dirac_positive",
        "spinor position projections compressed to positive Dirac energies",
        Variant::Unsharp,
        m,
        Localizer::DiracCompression {
            w: positive_energy_isometry(m, mass),
        },
        unitaries,
        false,
        vec![dirac_d0(m)],
    );
    c.region_width_limit = Some(DIRAC_REGION_WIDTH);
    Ok(UnsharpSystem::wrap(c))
}

/// Jordan-Wigner hopping Hamiltonian `−J Σ (c†_i c_{i+1} + h.c.)` with
/// periodic boundary, on the `2^L` occupation basis (bit `x` = site `x`).
pub fn fock_hopping(sites: usize, hopping: f64) -> Operator {
    let dim = 1usize << sites;
    let mut mat = Matrix::zeros(dim, dim);
    for state in 0..dim {
        for i in 0..sites {
            let j = (i + 1) % sites;
            // hop j → i and i → j
            for (from, to) in [(j, i), (i, j)] {
                if state & (1 << from) == 0 || state & (1 << to) != 0 {
                    continue;
                }
                let (lo, hi) = (from.min(to), from.max(to));
                let between = (state >> (lo + 1)) & ((1usize << (hi - lo - 1)) - 1);
                let sign = if between.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                let target = (state & !(1 << from)) | (1 << to);
                mat[(target, state)] += C64::new(-hopping * sign, 0.0);
            }
        }
    }
    Operator::trusted(mat, OpClass::Hermitian)
}

/// Lattice translation `T c†_x T† = c†_{x+1}` on Fock space.
pub fn fock_translation(sites: usize) -> Operator {
    let dim = 1usize << sites;
    let top = 1usize << (sites - 1);
    let mut mat = Matrix::zeros(dim, dim);
    for state in 0..dim {
        let rotated = ((state << 1) & (dim - 1)) | usize::from(state & top != 0);
        let particles = state.count_ones();
        let sign = if state & top != 0 && particles % 2 == 0 { -1.0 } else { 1.0 };
        mat[(rotated, state)] = C64::new(sign, 0.0);
    }
    Operator::trusted(mat, OpClass::Unitary)
}

/// Free fermions hopping on a ring of `sites` sites; local number operators
/// are occupation sums.
pub fn build_lattice_fock(sites: usize, hopping: f64) -> Result<NumberSystem> {
    if sites > MAX_FOCK_SITES {
        return Err(ZooError::TooLarge {
            sites,
            limit: MAX_FOCK_SITES,
        });
    }
    if !hopping.is_finite() {
        return Err(ZooError::InvalidHopping(hopping));
    }
    let model = SpaceModel::new(SpaceKind::LineDistinguishedFrame, sites, 1.0)?;
    let h = opkernel::eig_hermitian(&fock_hopping(sites, hopping))?;
    let floor = h.min_eigenvalue();
    let unitaries = UnitaryFamily {
        generator: h.map_real(|l| l - floor),
        spatial_shift: fock_translation(sites),
        momentum: None,
        spec: GeneratorSpec::Fixed,
    };
    Ok(NumberSystem::wrap(core(
        "lattice_fock",
        "fermion occupation sums with nearest-neighbour hopping",
        Variant::Number,
        &model,
        Localizer::Occupation,
        unitaries,
        false,
        Vec::new(),
    )))
}
