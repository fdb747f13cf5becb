//! Dense complex Hermitian linear algebra: matrix newtypes, spectral
//! decomposition, functional calculus, Loewner-order predicates and seeded
//! samplers.

mod eigen;
mod sample;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcat::ScalarFunction;

pub use eigen::{eig_hermitian, eig_hermitian_with, DEFAULT_THRESHOLD, MAX_SWEEPS};
pub use sample::{
    complex_gaussian, rng_from_seed, sample_contraction, sample_density, sample_hermitian,
    sample_isometric_pair, sample_positive, sample_spread_hermitian, sample_subisometric_pair,
    sample_unitary, trial_rng, SeededRng,
};

/// Dense n×n complex matrix. Holds general matrices such as `K` and `X`.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerances for Loewner checks and identity cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative tolerance for Loewner-order checks.
    pub psd_tol: f64,
    /// Relative tolerance for identity cross-checks.
    pub eq_tol: f64,
    /// Strict-positivity floor for open domain endpoints.
    pub dom_floor: f64,
    /// Relative off-diagonal stopping threshold of the Jacobi solver.
    pub eig_threshold: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            psd_tol: 1e-9,
            eq_tol: 1e-10,
            dom_floor: 1e-12,
            eig_threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.psd_tol, self.eq_tol, self.dom_floor, self.eig_threshold];
        if all.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::Config("tolerances must be finite and strictly positive".into()));
        }
        if !(self.dom_floor < self.eq_tol && self.eq_tol <= self.psd_tol) {
            return Err(Error::Config(format!(
                "tolerances must satisfy dom_floor < eq_tol <= psd_tol (got {:e}, {:e}, {:e})",
                self.dom_floor, self.eq_tol, self.psd_tol
            )));
        }
        Ok(())
    }

    /// Same tolerances with the eigensolver threshold lowered a hundredfold.
    pub fn tightened(&self) -> Self {
        ToleranceConfig {
            eig_threshold: self.eig_threshold * 1e-2,
            ..*self
        }
    }
}

/// Hermitian matrix. The stored matrix is exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` if it is square, finite and Hermitian to within
    /// `1e-12·(1+‖m‖_F)`; the symmetric part is stored.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let residual = (&m - m.adjoint()).norm();
        if residual > HERMITIAN_TOL * (1.0 + m.norm()) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(hermitize(&m))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::zeros(n, n))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        HermitianMatrix(ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix(self.0.map(|z| z * c))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix(&self.0 - &other.0)
    }

    /// `self + c·I`
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += Complex64::new(c, 0.0);
        }
        HermitianMatrix(m)
    }

    /// Congruence `X* self X`, hermitized.
    pub fn congruence(&self, x: &ComplexMatrix) -> Self {
        hermitize(&(x.adjoint() * &self.0 * x))
    }

    /// `c·a + (1−c)·b`
    pub fn mix(a: &HermitianMatrix, b: &HermitianMatrix, c: f64) -> Self {
        HermitianMatrix(a.0.map(|z| z * c) + b.0.map(|z| z * (1.0 - c)))
    }
}

/// Strictly positive definite matrix (λ_min ≥ the domain floor it was
/// validated against).
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMatrix {
    herm: HermitianMatrix,
    lambda_min: f64,
}

impl PositiveMatrix {
    /// Validates strict positivity against `floor`. `what` names the operand
    /// in the error message.
    pub fn new(h: HermitianMatrix, floor: f64, what: &str) -> Result<Self> {
        let d = eig_hermitian(&h)?;
        let lambda_min = d.eigenvalues.first().copied().unwrap_or(f64::INFINITY);
        if !(lambda_min >= floor) {
            return Err(Error::NotPositive {
                what: what.to_string(),
                lambda_min,
            });
        }
        Ok(PositiveMatrix { herm: h, lambda_min })
    }

    /// Validates against the default floor.
    pub fn try_from_hermitian(h: HermitianMatrix) -> Result<Self> {
        Self::new(h, ToleranceConfig::default().dom_floor, "matrix")
    }

    pub fn identity(n: usize) -> Self {
        PositiveMatrix {
            herm: HermitianMatrix::identity(n),
            lambda_min: 1.0,
        }
    }

    pub fn from_diagonal(values: &[f64]) -> Result<Self> {
        Self::try_from_hermitian(HermitianMatrix::from_diagonal(values))
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.herm
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.herm.as_matrix()
    }

    pub fn dim(&self) -> usize {
        self.herm.dim()
    }

    /// Convex combination `c·a + (1−c)·b`, which stays strictly positive.
    pub fn mix(a: &PositiveMatrix, b: &PositiveMatrix, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::Parameter(format!("mixing weight {c} outside [0,1]")));
        }
        let m = HermitianMatrix::mix(&a.herm, &b.herm, c);
        let floor = a.lambda_min.min(b.lambda_min);
        // Weyl: λ_min(mix) ≥ c·λ_min(a) + (1−c)·λ_min(b) ≥ floor, up to rounding.
        PositiveMatrix::new(m, floor * (1.0 - 1e-9), "mixture")
    }
}

/// Eigenvalues in ascending order with the column eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub unitary: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `U diag(values) U*`
    pub fn synthesize(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.unitary;
        let n = u.nrows();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)] * values[j]);
        hermitize(&(scaled * u.adjoint()))
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.synthesize(&self.eigenvalues)
    }

    pub fn reconstruction_residual(&self, h: &HermitianMatrix) -> f64 {
        (self.reconstruct().as_matrix() - h.as_matrix()).norm()
    }

    pub fn unitarity_residual(&self) -> f64 {
        let n = self.unitary.nrows();
        (self.unitary.adjoint() * &self.unitary - ComplexMatrix::identity(n, n)).norm()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.lambda_min().abs().max(self.lambda_max().abs())
    }
}

/// `(M + M*)/2`
pub fn hermitize(m: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix((m + m.adjoint()).map(|z| z * 0.5))
}

pub(crate) fn check_square_finite(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Spectral norm of a Hermitian matrix.
pub fn spectral_norm(h: &HermitianMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    Ok(eig_hermitian_with(h, cfg.eig_threshold)?.spectral_norm())
}

/// `f(H) = U f(Λ) U*`.
///
/// Eigenvalues are checked against the domain of `f`: an eigenvalue within
/// `dom_floor` of an open endpoint is rejected, while one that undershoots a
/// closed endpoint by at most `dom_floor·(1+ρ(H))` is clamped onto it.
pub fn matrix_function(
    f: &ScalarFunction,
    h: &HermitianMatrix,
    cfg: &ToleranceConfig,
) -> Result<HermitianMatrix> {
    let d = eig_hermitian_with(h, cfg.eig_threshold)?;
    matrix_function_from_spectrum(f, &d, cfg)
}

pub fn matrix_function_from_spectrum(
    f: &ScalarFunction,
    d: &SpectralDecomposition,
    cfg: &ToleranceConfig,
) -> Result<HermitianMatrix> {
    let slack = cfg.dom_floor * (1.0 + d.spectral_norm());
    let values = d
        .eigenvalues
        .iter()
        .map(|&x| f.eval_spectral(x, cfg.dom_floor, slack))
        .collect::<Result<Vec<_>>>()?;
    Ok(d.synthesize(&values))
}

/// One scalar or Loewner inequality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub kind: String,
    /// `λ_min(rhs − lhs)` for Loewner checks, `rhs − lhs` for scalar ones.
    pub margin: f64,
    pub holds: bool,
    /// Norm factor multiplying `psd_tol` in the acceptance threshold.
    pub scale: f64,
}

impl InequalityReport {
    pub fn new(kind: impl Into<String>, margin: f64, scale: f64, tol: f64) -> Self {
        InequalityReport {
            kind: kind.into(),
            margin,
            holds: margin >= -tol * scale,
            scale,
        }
    }

    pub fn relative_margin(&self) -> f64 {
        self.margin / self.scale
    }
}

/// Checks `a ≼ b`: margin `λ_min(b − a)`, scale `1 + ‖a‖₂ + ‖b‖₂`.
pub fn loewner_leq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    loewner_leq_kind("loewner", a, b, cfg)
}

pub(crate) fn loewner_leq_kind(
    kind: &str,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    check_same_dim(a.dim(), b.dim())?;
    let diff = b.sub(a);
    let margin = eig_hermitian_with(&diff, cfg.eig_threshold)?.lambda_min();
    let scale = 1.0 + spectral_norm(a, cfg)? + spectral_norm(b, cfg)?;
    Ok(InequalityReport::new(kind, margin, scale, cfg.psd_tol))
}
