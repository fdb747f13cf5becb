//! Quantum entropy and Lieb trace functionals, each with a direct
//! functional-calculus route and a superoperator (perspective) route.
//! All logarithms are natural.

use crate::error::{Error, Result};
use crate::funcat::ScalarFunction;
use crate::linalg::{
    eig_hermitian_with, matrix_function, ComplexMatrix, HermitianMatrix, PositiveMatrix,
    ToleranceConfig,
};
use crate::superop::{marechal_form, perspective_form, LeftRightPair};

/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;

/// Strictly positive matrix of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(PositiveMatrix);

impl DensityMatrix {
    pub fn new(p: PositiveMatrix) -> Result<Self> {
        let tr = p.hermitian().trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Precondition(format!("density matrix has trace {tr}, expected 1")));
        }
        Ok(DensityMatrix(p))
    }

    pub fn from_diagonal(values: &[f64]) -> Result<Self> {
        Self::new(PositiveMatrix::from_diagonal(values)?)
    }

    /// `I/n`
    pub fn maximally_mixed(n: usize) -> Self {
        let h = HermitianMatrix::identity(n).scale(1.0 / n as f64);
        DensityMatrix(PositiveMatrix::try_from_hermitian(h).expect("I/n is positive"))
    }

    pub fn positive(&self) -> &PositiveMatrix {
        &self.0
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        self.0.hermitian()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.0.as_matrix()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// Exponents for `Trace A^q X* B^p X`, with the derived Maréchal parameters
/// `s = q` and `t = p/(1−q)`, so that `(1−s)·t = p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiebParameters {
    p: f64,
    q: f64,
}

impl LiebParameters {
    /// Requires `p, q > 0` and `p + q ≤ 1`.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) || !(p + q <= 1.0) {
            return Err(Error::Parameter(format!(
                "lieb_pq requires p > 0, q > 0, p + q <= 1 (got p={p}, q={q})"
            )));
        }
        Ok(LiebParameters { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.q
    }

    pub fn t(&self) -> f64 {
        (self.p / (1.0 - self.q)).min(1.0)
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Parameter(format!("lieb requires s in (0,1), got {s}")));
    }
    Ok(())
}

fn trace_product(mats: &[&ComplexMatrix]) -> f64 {
    let mut acc = mats[0].clone();
    for m in &mats[1..] {
        acc *= *m;
    }
    acc.trace().re
}

/// `−Trace(ρ log ρ)`, computed from the spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    let d = eig_hermitian_with(rho.hermitian(), cfg.eig_threshold)?;
    if d.lambda_min() < cfg.dom_floor {
        return Err(Error::NotPositive {
            what: "rho".into(),
            lambda_min: d.lambda_min(),
        });
    }
    Ok(-d.eigenvalues.iter().map(|&x| x * x.ln()).sum::<f64>())
}

/// `S(ρ‖σ) = Trace ρ(log ρ − log σ)`
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let log = ScalarFunction::log();
    let log_rho = matrix_function(&log, rho.hermitian(), cfg)?;
    let log_sigma = matrix_function(&log, sigma.hermitian(), cfg)?;
    let diff = log_rho.as_matrix() - log_sigma.as_matrix();
    Ok((rho.as_matrix() * diff).trace().re)
}

/// `⟨g(L,R)(I), I⟩` for `f = x log x`, `L(X) = ρX`, `R(X) = Xσ`.
pub fn relative_entropy_via_perspective(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let pair = LeftRightPair::with_config(rho.positive().clone(), sigma.positive().clone(), cfg)?;
    let n = rho.dim();
    perspective_form(&ScalarFunction::xlogx(), &pair, &ComplexMatrix::identity(n, n), cfg)
}

/// `Trace A^s K* B^{1−s} K` for `s ∈ (0,1)`.
pub fn lieb_functional(
    a: &PositiveMatrix,
    b: &PositiveMatrix,
    k: &ComplexMatrix,
    s: f64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_s(s)?;
    let a_s = matrix_function(&ScalarFunction::power(s)?, a.hermitian(), cfg)?;
    let b_s = matrix_function(&ScalarFunction::power(1.0 - s)?, b.hermitian(), cfg)?;
    let k_adj = k.adjoint();
    Ok(trace_product(&[a_s.as_matrix(), &k_adj, b_s.as_matrix(), k]))
}

/// `−⟨g(L,R)(K*), K*⟩` with `f(x) = −x^s`, `L(X) = AX`, `R(X) = XB`.
pub fn lieb_via_perspective(
    a: &PositiveMatrix,
    b: &PositiveMatrix,
    k: &ComplexMatrix,
    s: f64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_s(s)?;
    let pair = LeftRightPair::with_config(a.clone(), b.clone(), cfg)?;
    Ok(-perspective_form(&ScalarFunction::neg_power(s)?, &pair, &k.adjoint(), cfg)?)
}

/// `Trace A^q X* B^p X` for `p, q > 0`, `p + q ≤ 1`.
pub fn lieb_pq_functional(
    a: &PositiveMatrix,
    b: &PositiveMatrix,
    x: &ComplexMatrix,
    params: &LiebParameters,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let a_q = matrix_function(&ScalarFunction::power(params.q)?, a.hermitian(), cfg)?;
    let b_p = matrix_function(&ScalarFunction::power(params.p)?, b.hermitian(), cfg)?;
    let x_adj = x.adjoint();
    Ok(trace_product(&[a_q.as_matrix(), &x_adj, b_p.as_matrix(), x]))
}

/// `−⟨(fΔh)(L,R)(X*), X*⟩` with `f(x) = −x^s`, `h(y) = y^t`, `s = q`,
/// `t = p/(1−q)`.
pub fn lieb_pq_via_marechal(
    a: &PositiveMatrix,
    b: &PositiveMatrix,
    x: &ComplexMatrix,
    params: &LiebParameters,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let f = ScalarFunction::neg_power(params.s())?;
    let h = ScalarFunction::power(params.t())?;
    let pair = LeftRightPair::with_config(a.clone(), b.clone(), cfg)?;
    Ok(-marechal_form(&f, &h, &pair, &x.adjoint(), cfg)?)
}
