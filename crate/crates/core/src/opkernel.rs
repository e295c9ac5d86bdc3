//! Dense complex operator kernel.
//!
//! Everything here works on full `n x n` matrices. Hermitian
//! eigendecomposition is the workhorse: spectral calculus, operator norms
//! and the projection lattice operations are all built on top of it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type Vector = DVector<C64>;

/// Exact-arithmetic identities are asserted at this level.
pub const EXACT_TOL: f64 = 1e-10;
/// Relative hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues of a projection sum above this count as "in range".
pub const RANGE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("operator is not hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("operator is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("operator is not an effect (spectrum leaves [0,1] by {residual:.3e})")]
    NotEffect { residual: f64 },
    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("spectral function undefined at eigenvalue {eigenvalue}")]
    Domain { eigenvalue: f64 },
    #[error("empty operator sequence")]
    EmptyInput,
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
}

pub type Result<T> = std::result::Result<T, KernelError>;

/// Declared structural class of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpClass {
    General,
    Hermitian,
    Unitary,
    Projection,
    Effect,
}

impl OpClass {
    fn is_hermitian_kind(self) -> bool {
        matches!(self, OpClass::Hermitian | OpClass::Projection | OpClass::Effect)
    }

    fn is_effect_kind(self) -> bool {
        matches!(self, OpClass::Projection | OpClass::Effect)
    }
}

/// A dense square complex matrix together with its declared class.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: Matrix,
    class: OpClass,
}

impl Operator {
    /// Wraps a matrix with no structural claim.
    pub fn general(mat: Matrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(KernelError::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(Self {
            mat,
            class: OpClass::General,
        })
    }

    /// Wraps a matrix and validates the claimed class.
    pub fn with_class(mat: Matrix, class: OpClass) -> Result<Self> {
        let op = Self::general(mat)?;
        let report = op.classify();
        let ok = match class {
            OpClass::General => true,
            OpClass::Hermitian => report.hermitian,
            OpClass::Unitary => report.unitary,
            OpClass::Projection => report.projection,
            OpClass::Effect => report.effect,
        };
        if !ok {
            return Err(match class {
                OpClass::Hermitian => KernelError::NotHermitian {
                    residual: report.hermitian_residual,
                },
                OpClass::Unitary => KernelError::NotUnitary {
                    residual: report.unitary_residual,
                },
                OpClass::Projection => KernelError::NotProjection {
                    residual: report.projection_residual,
                },
                _ => KernelError::NotEffect {
                    residual: report.effect_residual,
                },
            });
        }
        Ok(Self {
            mat: op.mat,
            class,
        })
    }

    /// Class is taken on trust; callers construct the matrix so that it holds
    /// exactly in exact arithmetic.
    pub(crate) fn trusted(mat: Matrix, class: OpClass) -> Self {
        debug_assert!(mat.is_square());
        let mat = if class.is_hermitian_kind() {
            hermitize(mat)
        } else {
            mat
        };
        Self { mat, class }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Matrix::identity(dim, dim),
            class: OpClass::Projection,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: Matrix::zeros(dim, dim),
            class: OpClass::Projection,
        }
    }

    /// Real diagonal operator. Classified as a projection when every entry is
    /// exactly 0 or 1, an effect when all lie in [0,1], hermitian otherwise.
    pub fn real_diagonal(diag: &[f64]) -> Self {
        let class = if diag.iter().all(|&d| d == 0.0 || d == 1.0) {
            OpClass::Projection
        } else if diag.iter().all(|&d| (0.0..=1.0).contains(&d)) {
            OpClass::Effect
        } else {
            OpClass::Hermitian
        };
        let v = Vector::from_iterator(diag.len(), diag.iter().map(|&d| C64::new(d, 0.0)));
        Self {
            mat: Matrix::from_diagonal(&v),
            class,
        }
    }

    /// `c * I`, classified by where `c` sits.
    pub fn scalar(dim: usize, c: f64) -> Self {
        Self::real_diagonal(&vec![c; dim])
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn class(&self) -> OpClass {
        self.class
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            mat: self.mat.adjoint(),
            class: self.class,
        }
    }

    /// True iff the matrix is exactly `c * I` for some `c` (no tolerance).
    pub fn is_exact_scalar(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        let c = self.mat[(0, 0)];
        for j in 0..n {
            for i in 0..n {
                let v = self.mat[(i, j)];
                if i == j {
                    if v != c {
                        return false;
                    }
                } else if v != C64::new(0.0, 0.0) {
                    return false;
                }
            }
        }
        true
    }

    fn is_diagonal(&self) -> bool {
        let n = self.dim();
        self.mat
            .iter()
            .enumerate()
            .all(|(k, z)| k % (n + 1) == 0 || *z == C64::new(0.0, 0.0))
    }

    /// `U A U†`. Exact scalars are returned unchanged since they commute with
    /// every unitary.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Operator> {
        check_dims(self.dim(), u.dim())?;
        if self.is_exact_scalar() {
            return Ok(self.clone());
        }
        let mat = gemm(&gemm(&u.mat, false, &self.mat, false), false, &u.mat, true);
        Ok(Operator::trusted(mat, self.class))
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Operator {
            mat: gemm(&self.mat, false, &other.mat, false),
            class: OpClass::General,
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        let class = if self.class.is_hermitian_kind() && other.class.is_hermitian_kind() {
            OpClass::Hermitian
        } else {
            OpClass::General
        };
        Ok(Operator {
            mat: &self.mat + &other.mat,
            class,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        let class = if self.class.is_hermitian_kind() && other.class.is_hermitian_kind() {
            OpClass::Hermitian
        } else {
            OpClass::General
        };
        Ok(Operator {
            mat: &self.mat - &other.mat,
            class,
        })
    }

    pub fn scale(&self, c: f64) -> Operator {
        let class = if self.class.is_hermitian_kind() {
            OpClass::Hermitian
        } else {
            OpClass::General
        };
        Operator {
            mat: &self.mat * C64::new(c, 0.0),
            class,
        }
    }

    /// `I - A`.
    pub fn complement(&self) -> Operator {
        let n = self.dim();
        Operator {
            mat: Matrix::identity(n, n) - &self.mat,
            class: self.class,
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Operator norm (largest singular value) from the spectrum of `A†A`.
    pub fn norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        if self.is_diagonal() {
            return self.mat.diagonal().iter().fold(0.0, |m, z| m.max(z.norm()));
        }
        let gram = hermitize(gemm(&self.mat, true, &self.mat, false));
        let top = largest_eigenvalue(gram);
        top.max(0.0).sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// `<psi, A psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        check_dims(self.dim(), psi.dim())?;
        Ok(psi.amplitudes().dotc(&(&self.mat * psi.amplitudes())))
    }

    pub fn apply(&self, psi: &StateVector) -> Result<Vector> {
        check_dims(self.dim(), psi.dim())?;
        Ok(&self.mat * psi.amplitudes())
    }

    /// Structural report with numerical residuals for each predicate.
    pub fn classify(&self) -> ClassReport {
        classify(self)
    }
}

/// Result of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub hermitian: bool,
    pub hermitian_residual: f64,
    pub unitary: bool,
    pub unitary_residual: f64,
    pub projection: bool,
    pub projection_residual: f64,
    pub effect: bool,
    pub effect_residual: f64,
}

impl ClassReport {
    /// Most specific class that holds.
    pub fn best_class(&self) -> OpClass {
        if self.projection {
            OpClass::Projection
        } else if self.effect {
            OpClass::Effect
        } else if self.hermitian {
            OpClass::Hermitian
        } else if self.unitary {
            OpClass::Unitary
        } else {
            OpClass::General
        }
    }
}

pub fn classify(a: &Operator) -> ClassReport {
    let n = a.dim();
    let scale = a.norm().max(1.0);
    let skew = &a.mat - a.mat.adjoint();
    // i(A - A†) is hermitian; its spectral radius is the norm of A - A†.
    let skew_h = hermitize(skew * C64::new(0.0, 1.0));
    let hermitian_residual = spectral_radius(skew_h);
    let hermitian = hermitian_residual <= HERMITIAN_TOL * scale;

    let uu = hermitize(gemm(&a.mat, false, &a.mat, true) - Matrix::identity(n, n));
    let unitary_residual = spectral_radius(uu);
    let unitary = unitary_residual <= EXACT_TOL;

    let (projection_residual, effect_residual) = if hermitian {
        let h = hermitize(a.mat.clone());
        let sq = hermitize(gemm(&h, false, &h, false) - &h);
        let idem = spectral_radius(sq);
        let eig = sorted_eigenvalues(h);
        let lo = eig.first().copied().unwrap_or(0.0);
        let hi = eig.last().copied().unwrap_or(0.0);
        let excursion = (-lo).max(hi - 1.0).max(0.0);
        (idem.max(hermitian_residual), excursion)
    } else {
        (f64::MAX, f64::MAX)
    };
    ClassReport {
        hermitian,
        hermitian_residual,
        unitary,
        unitary_residual,
        projection: hermitian && projection_residual <= EXACT_TOL,
        projection_residual,
        effect: hermitian && effect_residual <= EXACT_TOL,
        effect_residual,
    }
}

/// Eigenvalues ascending, eigenvectors as orthonormal columns in matching order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl SpectralDecomposition {
    /// Builds a decomposition from explicit eigenpairs, sorting them ascending.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Matrix) -> Result<Self> {
        if eigenvectors.ncols() != eigenvalues.len() {
            return Err(KernelError::DimensionMismatch {
                left: eigenvalues.len(),
                right: eigenvectors.ncols(),
            });
        }
        if !eigenvectors.is_square() {
            return Err(KernelError::NotSquare {
                rows: eigenvectors.nrows(),
                cols: eigenvectors.ncols(),
            });
        }
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
        let sorted: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let vecs = eigenvectors.select_columns(order.iter());
        Ok(Self {
            eigenvalues: sorted,
            eigenvectors: vecs,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V Λ V†` as a hermitian operator.
    pub fn reconstruct(&self) -> Operator {
        self.map_to_operator(|l| C64::new(l, 0.0), true)
    }

    /// The decomposition of `g(A)` for real `g`: same eigenvectors, values
    /// mapped and resorted.
    pub fn map_real(&self, g: impl Fn(f64) -> f64) -> SpectralDecomposition {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        SpectralDecomposition::from_parts(vals, self.eigenvectors.clone())
            .expect("shape preserved by construction")
    }

    /// `exp(i t A)`.
    pub fn exp_i(&self, t: f64) -> Operator {
        if t == 0.0 || self.eigenvalues.iter().all(|&l| l == 0.0) {
            return Operator {
                mat: Matrix::identity(self.dim(), self.dim()),
                class: OpClass::Unitary,
            };
        }
        let mut op = self.map_to_operator(|l| C64::new(0.0, t * l).exp(), false);
        op.class = OpClass::Unitary;
        op
    }

    /// `exp(i t A) ψ` without forming the unitary.
    pub fn evolve_state(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), psi.dim())?;
        if t == 0.0 || self.eigenvalues.iter().all(|&l| l == 0.0) {
            return Ok(psi.clone());
        }
        let mut coeffs = self.eigenvectors.adjoint() * &psi.amplitudes;
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= C64::new(0.0, t * l).exp();
        }
        Ok(StateVector {
            amplitudes: &self.eigenvectors * coeffs,
        })
    }

    fn map_to_operator(&self, f: impl Fn(f64) -> C64, hermitian: bool) -> Operator {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let fl = f(l);
            for x in scaled.column_mut(j).iter_mut() {
                *x *= fl;
            }
        }
        let mat = gemm(&scaled, false, v, true);
        if hermitian {
            Operator::trusted(mat, OpClass::Hermitian)
        } else {
            Operator {
                mat,
                class: OpClass::General,
            }
        }
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vector,
}

impl StateVector {
    pub fn new(amplitudes: Vector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(KernelError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: Vector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(KernelError::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes / C64::new(norm, 0.0),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Applies a unitary. The result is renormalized only in debug checks,
    /// never silently.
    pub fn evolve(&self, u: &Operator) -> Result<StateVector> {
        let out = u.apply(self)?;
        Ok(StateVector { amplitudes: out })
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(KernelError::DimensionMismatch { left, right });
    }
    Ok(())
}

/// `op(a) op(b)` where `op` is the identity or, when flagged, the adjoint.
pub(crate) fn gemm(a: &Matrix, a_adjoint: bool, b: &Matrix, b_adjoint: bool) -> Matrix {
    let a_adj;
    let a = if a_adjoint {
        a_adj = a.adjoint();
        &a_adj
    } else {
        a
    };
    let b_adj;
    let b = if b_adjoint {
        b_adj = b.adjoint();
        &b_adj
    } else {
        b
    };
    let (m, k) = a.shape();
    let (k2, n) = b.shape();
    assert_eq!(k, k2, "inner dimensions differ");
    let mut out = Matrix::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return out;
    }
    // SAFETY: Complex64 is repr(C) with two f64 fields, nalgebra storage is
    // contiguous column-major, and the shapes and strides describe exactly
    // the buffers passed.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            out.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    out
}

fn hermitize(m: Matrix) -> Matrix {
    let adj = m.adjoint();
    (m + adj) * C64::new(0.5, 0.0)
}

fn sorted_eigenvalues(h: Matrix) -> Vec<f64> {
    if h.nrows() == 0 {
        return Vec::new();
    }
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

fn largest_eigenvalue(h: Matrix) -> f64 {
    sorted_eigenvalues(h).last().copied().unwrap_or(0.0)
}

fn spectral_radius(h: Matrix) -> f64 {
    sorted_eigenvalues(h)
        .iter()
        .fold(0.0_f64, |acc, l| acc.max(l.abs()))
}

fn hermitian_residual_raw(m: &Matrix) -> f64 {
    let skew = hermitize((m - m.adjoint()) * C64::new(0.0, 1.0));
    spectral_radius(skew)
}

/// Full eigendecomposition of a hermitian operator.
pub fn eig_hermitian(a: &Operator) -> Result<SpectralDecomposition> {
    let residual = hermitian_residual_raw(&a.mat);
    let scale = if residual > 0.0 { a.norm().max(1.0) } else { 1.0 };
    if residual > HERMITIAN_TOL * scale {
        return Err(KernelError::NotHermitian { residual });
    }
    let n = a.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: Matrix::zeros(0, 0),
        });
    }
    let eig = hermitize(a.mat.clone()).symmetric_eigen();
    SpectralDecomposition::from_parts(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `f(A)` by spectral calculus. `f` returns `None` where it is undefined.
pub fn apply_spectral_function(
    a: &Operator,
    f: impl Fn(f64) -> Option<C64>,
) -> Result<Operator> {
    let dec = eig_hermitian(a)?;
    let mut values = Vec::with_capacity(dec.dim());
    for &l in dec.eigenvalues() {
        match f(l) {
            Some(v) if v.re.is_finite() && v.im.is_finite() => values.push(v),
            _ => return Err(KernelError::Domain { eigenvalue: l }),
        }
    }
    let real = values.iter().all(|v| v.im == 0.0);
    let mut scaled = dec.eigenvectors.clone();
    for (j, v) in values.iter().enumerate() {
        for x in scaled.column_mut(j).iter_mut() {
            *x *= *v;
        }
    }
    let mat = gemm(&scaled, false, &dec.eigenvectors, true);
    if real {
        Ok(Operator::trusted(mat, OpClass::Hermitian))
    } else {
        Operator::general(mat)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    use OpClass::*;
    let class = match (a.class, b.class) {
        (Projection, Projection) => Projection,
        (x, y) if x.is_effect_kind() && y.is_effect_kind() => Effect,
        (x, y) if x.is_hermitian_kind() && y.is_hermitian_kind() => Hermitian,
        (Unitary, Unitary) => Unitary,
        _ => General,
    };
    Operator {
        mat: a.mat.kronecker(&b.mat),
        class,
    }
}

/// `‖ab - ba‖`.
pub fn commutator_norm(a: &Operator, b: &Operator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    if a.is_exact_scalar() || b.is_exact_scalar() {
        return Ok(0.0);
    }
    let c = gemm(&a.mat, false, &b.mat, false) - gemm(&b.mat, false, &a.mat, false);
    Ok(Operator {
        mat: c,
        class: OpClass::General,
    }
    .norm())
}

fn ensure_projections(ps: &[Operator]) -> Result<usize> {
    let first = ps.first().ok_or(KernelError::EmptyInput)?;
    let n = first.dim();
    for p in ps {
        check_dims(n, p.dim())?;
        let herm = (&p.mat - p.mat.adjoint()).norm();
        let idem = (gemm(&p.mat, false, &p.mat, false) - &p.mat).norm();
        let residual = herm.max(idem);
        if residual > EXACT_TOL {
            return Err(KernelError::NotProjection { residual });
        }
    }
    Ok(n)
}

/// Projection onto the closed span of the union of ranges.
pub fn lattice_join(ps: &[Operator]) -> Result<Operator> {
    let n = ensure_projections(ps)?;
    Ok(join_unchecked(ps.iter().map(|p| &p.mat), n))
}

fn join_unchecked<'a>(mats: impl Iterator<Item = &'a Matrix>, n: usize) -> Operator {
    let mut sum = Matrix::zeros(n, n);
    let mut all_identity = false;
    for m in mats {
        sum += m;
        if !all_identity && *m == Matrix::identity(n, n) {
            all_identity = true;
        }
    }
    if all_identity {
        return Operator::identity(n);
    }
    if sum.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Operator::zero(n);
    }
    if sum.iter().enumerate().all(|(k, z)| k % (n + 1) == 0 || *z == C64::new(0.0, 0.0)) {
        let diag: Vec<f64> = (0..n)
            .map(|i| if sum[(i, i)].re > RANGE_TOL { 1.0 } else { 0.0 })
            .collect();
        return Operator::real_diagonal(&diag);
    }
    let eig = hermitize(sum).symmetric_eigen();
    let keep: Vec<usize> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANGE_TOL)
        .map(|(i, _)| i)
        .collect();
    if keep.len() == n {
        return Operator::identity(n);
    }
    let v = eig.eigenvectors.select_columns(keep.iter());
    Operator::trusted(gemm(&v, false, &v, true), OpClass::Projection)
}

/// Projection onto the intersection of ranges, via De Morgan from the join.
pub fn lattice_meet(ps: &[Operator]) -> Result<Operator> {
    let n = ensure_projections(ps)?;
    let complements: Vec<Matrix> = ps
        .iter()
        .map(|p| Matrix::identity(n, n) - &p.mat)
        .collect();
    Ok(join_unchecked(complements.iter(), n).complement())
}
