//! Hansen-Pedersen-Jensen checks, the shift-reduction route, joint
//! convexity harnesses and randomized counterexample search.

mod functional;
mod search;
mod suite;

use crate::error::{Error, Result};
use crate::funcat::ScalarFunction;
use crate::linalg::{
    check_same_dim, eig_hermitian_with, hermitize, loewner_leq_kind, matrix_function,
    ComplexMatrix, HermitianMatrix, PositiveMatrix, ToleranceConfig,
};
use crate::superop::{marechal_superop_matrix, perspective_superop_matrix, LeftRightPair};

pub use crate::linalg::InequalityReport;
pub use functional::{Functional, Sense};
pub use search::{counterexample_search, SearchOutcome};
pub use suite::{recheck, verify_suite, NamedMatrix, SuiteKind, SuiteSpec, VerificationReport, Witness};

/// Tolerance on `‖A*A + B*B − I‖_F` for the affine checks.
pub const ISOMETRY_TOL: f64 = 1e-8;

/// Violation factor over `psd_tol` required before a counterexample is
/// reported.
pub const WITNESS_FACTOR: f64 = 10.0;

fn gram(a: &ComplexMatrix, b: &ComplexMatrix) -> HermitianMatrix {
    hermitize(&(a.adjoint() * a + b.adjoint() * b))
}

fn check_jensen_dims(t1: &HermitianMatrix, t2: &HermitianMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    let n = t1.dim();
    for d in [t2.dim(), a.nrows(), a.ncols(), b.nrows(), b.ncols()] {
        check_same_dim(n, d)?;
    }
    Ok(())
}

fn require_isometric(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    let n = a.nrows();
    let resid = (gram(a, b).as_matrix() - ComplexMatrix::identity(n, n)).norm();
    if resid > ISOMETRY_TOL {
        return Err(Error::Precondition(format!("‖A*A + B*B − I‖_F = {resid:e} exceeds {ISOMETRY_TOL:e}")));
    }
    Ok(())
}

fn require_subisometric(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<()> {
    let lmax = eig_hermitian_with(&gram(a, b), cfg.eig_threshold)?.lambda_max();
    if lmax > 1.0 + ISOMETRY_TOL {
        return Err(Error::Precondition(format!("λ_max(A*A + B*B) = {lmax} exceeds 1")));
    }
    Ok(())
}

fn require_nonpositive_at_zero(f: &ScalarFunction) -> Result<()> {
    match f.value_at_zero() {
        Some(v) if v <= 0.0 => Ok(()),
        Some(v) => Err(Error::Precondition(format!("{f}: f(0) = {v} > 0 violates the hypothesis f(0) <= 0"))),
        None => Err(Error::Precondition(format!("{f}: 0 is not in the domain"))),
    }
}

/// `(f(A*T₁A + B*T₂B), A*f(T₁)A + B*f(T₂)B)`
fn jensen_sides(
    f: &ScalarFunction,
    t1: &HermitianMatrix,
    t2: &HermitianMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let mixed = t1.congruence(a).add(&t2.congruence(b));
    let lhs = matrix_function(f, &mixed, cfg)?;
    let rhs = matrix_function(f, t1, cfg)?
        .congruence(a)
        .add(&matrix_function(f, t2, cfg)?.congruence(b));
    Ok((lhs, rhs))
}

/// `f(A*T₁A + B*T₂B) ≼ A*f(T₁)A + B*f(T₂)B` under `A*A + B*B = I`.
pub fn check_affine_jensen(
    f: &ScalarFunction,
    t1: &HermitianMatrix,
    t2: &HermitianMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    check_jensen_dims(t1, t2, a, b)?;
    require_isometric(a, b)?;
    let (lhs, rhs) = jensen_sides(f, t1, t2, a, b, cfg)?;
    loewner_leq_kind("affine_jensen", &lhs, &rhs, cfg)
}

/// Same inequality under `A*A + B*B ≼ I` and `f(0) ≤ 0`.
pub fn check_subhom_jensen(
    f: &ScalarFunction,
    t1: &HermitianMatrix,
    t2: &HermitianMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    check_jensen_dims(t1, t2, a, b)?;
    require_nonpositive_at_zero(f)?;
    require_subisometric(a, b, cfg)?;
    let (lhs, rhs) = jensen_sides(f, t1, t2, a, b, cfg)?;
    loewner_leq_kind("subhom_jensen", &lhs, &rhs, cfg)
}

/// Affine inequality obtained from the subhomogeneous one.
///
/// With `F(t) = f(t+c) − f(c)` and `Tⱼ' = Tⱼ − cI`, checks
/// `F(A*T₁'A + B*T₂'B) ≼ A*F(T₁')A + B*F(T₂')B` and adds back
/// `f(c)·I` on the left and `f(c)·(A*A + B*B)` on the right, which are equal
/// when `A*A + B*B = I`. The resulting report should match
/// [`check_affine_jensen`].
pub fn derive_affine_via_shift(
    f: &ScalarFunction,
    c: f64,
    t1: &HermitianMatrix,
    t2: &HermitianMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    check_jensen_dims(t1, t2, a, b)?;
    require_isometric(a, b)?;
    if !f.domain().contains_interior(c) {
        return Err(Error::Precondition(format!("shift point {c} is not interior to {}", f.domain())));
    }
    let shifted = f.shift_reduce(c)?;
    require_nonpositive_at_zero(&shifted)?;
    let (t1s, t2s) = (t1.shift(-c), t2.shift(-c));
    let (lhs_f, rhs_f) = jensen_sides(&shifted, &t1s, &t2s, a, b, cfg)?;
    let fc = f.eval(c)?;
    let lhs = lhs_f.shift(fc);
    let rhs = rhs_f.add(&gram(a, b).scale(fc));
    loewner_leq_kind("shift_route", &lhs, &rhs, cfg)
}

/// Scalar joint convexity (or concavity) margin of a two-argument
/// functional at `c·P₁ + (1−c)·P₂`.
///
/// `first` and `second` hold the `(A, B)` (or `(ρ, σ)`) pairs; `k` is the
/// fixed auxiliary matrix (`K` or `X`), ignored by the entropies.
pub fn check_joint_convexity_scalar(
    functional: &Functional,
    first: (&PositiveMatrix, &PositiveMatrix),
    second: (&PositiveMatrix, &PositiveMatrix),
    k: &ComplexMatrix,
    c: f64,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    let sense = functional.sense()?;
    check_joint_scalar_with(
        &functional.id(),
        sense,
        |a, b| functional.eval(a, b, k, cfg),
        first,
        second,
        c,
        cfg,
    )
}

/// Joint convexity margin of an arbitrary functional `phi`.
///
/// Convex sense: `c·φ(P₁) + (1−c)·φ(P₂) − φ(P)`; concave sense negates it.
/// Scale: `1 + |φ(P₁)| + |φ(P₂)| + |φ(P)|`.
pub fn check_joint_scalar_with<F>(
    kind: &str,
    sense: Sense,
    phi: F,
    first: (&PositiveMatrix, &PositiveMatrix),
    second: (&PositiveMatrix, &PositiveMatrix),
    c: f64,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport>
where
    F: Fn(&PositiveMatrix, &PositiveMatrix) -> Result<f64>,
{
    let a = PositiveMatrix::mix(first.0, second.0, c)?;
    let b = PositiveMatrix::mix(first.1, second.1, c)?;
    let v1 = phi(first.0, first.1)?;
    let v2 = phi(second.0, second.1)?;
    let v = phi(&a, &b)?;
    let convex_margin = c * v1 + (1.0 - c) * v2 - v;
    let margin = match sense {
        Sense::Convex => convex_margin,
        Sense::Concave => -convex_margin,
    };
    let scale = 1.0 + v1.abs() + v2.abs() + v.abs();
    Ok(InequalityReport::new(kind, margin, scale, cfg.psd_tol))
}

/// Operator-level joint convexity of `g(L,R) = f(L/R)R` (or of
/// `(fΔh)(L,R)` when `h` is given) on the n²×n² superoperator matrices.
/// An operator-concave `f` without `h` is checked in the concave sense.
pub fn check_joint_convexity_loewner(
    f: &ScalarFunction,
    h: Option<&ScalarFunction>,
    first: (&PositiveMatrix, &PositiveMatrix),
    second: (&PositiveMatrix, &PositiveMatrix),
    c: f64,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    let mixed = (
        PositiveMatrix::mix(first.0, second.0, c)?,
        PositiveMatrix::mix(first.1, second.1, c)?,
    );
    let superop = |l: &PositiveMatrix, r: &PositiveMatrix| -> Result<HermitianMatrix> {
        let pair = LeftRightPair::with_config(l.clone(), r.clone(), cfg)?;
        let m = match h {
            Some(h) => marechal_superop_matrix(f, h, &pair, cfg)?,
            None => perspective_superop_matrix(f, &pair, cfg)?,
        };
        Ok(m.to_hermitian())
    };
    let g1 = superop(first.0, first.1)?;
    let g2 = superop(second.0, second.1)?;
    let g = superop(&mixed.0, &mixed.1)?;
    let combo = HermitianMatrix::mix(&g1, &g2, c);
    let concave = h.is_none() && f.op_class() == crate::funcat::OpClass::OperatorConcave;
    if concave {
        loewner_leq_kind("loewner_concavity", &combo, &g, cfg)
    } else {
        loewner_leq_kind("loewner_convexity", &g, &combo, cfg)
    }
}
