//! Left/right multiplication superoperators `L(X) = AX`, `R(X) = XB` on the
//! Hilbert-Schmidt space of n×n matrices.
//!
//! With `A = Σ λ_i u_i u_i*` and `B = Σ μ_j v_j v_j*`, the matrices
//! `E_ij = u_i v_j*` form a joint eigenbasis: `L(E_ij) = λ_i E_ij` and
//! `R(E_ij) = μ_j E_ij`. A function of the commuting pair therefore acts on
//! `E_ij` by a scalar weight, and applying it to `K` costs two changes of
//! basis: `U (W ∘ (U* K V)) V*`.
//!
//! Vectorization is column stacking, so `L ↔ I⊗A` and `R ↔ Bᵀ⊗I`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcat::ScalarFunction;
use crate::linalg::{
    check_same_dim, eig_hermitian_with, hermitize, matrix_function, ComplexMatrix,
    HermitianMatrix, PositiveMatrix, SpectralDecomposition, ToleranceConfig,
};

/// Column-stacking vectorization.
pub fn vec(x: &ComplexMatrix) -> Vec<Complex64> {
    x.as_slice().to_vec()
}

/// Inverse of [`vec`]; the length must be a perfect square.
pub fn unvec(v: &[Complex64]) -> Result<ComplexMatrix> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() {
        return Err(Error::Parameter(format!("length {} is not a perfect square", v.len())));
    }
    Ok(ComplexMatrix::from_column_slice(n, n, v))
}

/// `⟨X, Y⟩ = Trace(X Y*)`
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Explicit n²×n² matrix of a superoperator in the column-stacking basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperatorMatrix {
    entries: ComplexMatrix,
}

impl SuperOperatorMatrix {
    pub fn new(entries: ComplexMatrix) -> Self {
        SuperOperatorMatrix { entries }
    }

    /// n² (dimension of the Hilbert-Schmidt space).
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn column_stacking(&self) -> bool {
        true
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_same_dim(self.dim(), x.len())?;
        let v = nalgebra::DVector::from_column_slice(x.as_slice());
        unvec((&self.entries * v).as_slice())
    }

    /// `⟨S(K), K⟩`
    pub fn quadratic_form(&self, k: &ComplexMatrix) -> Result<Complex64> {
        let y = self.apply(k)?;
        Ok(hs_inner(&y, k))
    }

    pub fn to_hermitian(&self) -> HermitianMatrix {
        hermitize(&self.entries)
    }
}

/// `I⊗A`, so that `vec(AX) = (I⊗A) vec(X)`.
pub fn left_superop(a: &ComplexMatrix) -> SuperOperatorMatrix {
    let n = a.nrows();
    SuperOperatorMatrix::new(ComplexMatrix::identity(n, n).kronecker(a))
}

/// `Bᵀ⊗I`, so that `vec(XB) = (Bᵀ⊗I) vec(X)`.
pub fn right_superop(b: &ComplexMatrix) -> SuperOperatorMatrix {
    let n = b.nrows();
    SuperOperatorMatrix::new(b.transpose().kronecker(&ComplexMatrix::identity(n, n)))
}

/// Positive pair acting by left and right multiplication, with cached
/// spectral data `(λ_i, u_i)` and `(μ_j, v_j)`.
#[derive(Debug, Clone)]
pub struct LeftRightPair {
    left: PositiveMatrix,
    right: PositiveMatrix,
    left_spec: SpectralDecomposition,
    right_spec: SpectralDecomposition,
}

impl LeftRightPair {
    pub fn new(left: PositiveMatrix, right: PositiveMatrix) -> Result<Self> {
        Self::with_config(left, right, &ToleranceConfig::default())
    }

    pub fn with_config(left: PositiveMatrix, right: PositiveMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        check_same_dim(left.dim(), right.dim())?;
        let left_spec = eig_hermitian_with(left.hermitian(), cfg.eig_threshold)?;
        let right_spec = eig_hermitian_with(right.hermitian(), cfg.eig_threshold)?;
        Ok(LeftRightPair {
            left,
            right,
            left_spec,
            right_spec,
        })
    }

    pub fn left(&self) -> &PositiveMatrix {
        &self.left
    }

    pub fn right(&self) -> &PositiveMatrix {
        &self.right
    }

    pub fn left_spec(&self) -> &SpectralDecomposition {
        &self.left_spec
    }

    pub fn right_spec(&self) -> &SpectralDecomposition {
        &self.right_spec
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    /// `C = U* K V`, so `C_ij = u_i* K v_j = ⟨K, E_ij⟩`.
    fn coefficients(&self, k: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_same_dim(self.dim(), k.nrows())?;
        check_same_dim(self.dim(), k.ncols())?;
        Ok(self.left_spec.unitary.adjoint() * k * &self.right_spec.unitary)
    }
}

/// One entry of the joint spectral table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointWeight {
    pub lambda: f64,
    pub mu: f64,
    pub weight: f64,
}

/// Table of `(λ_i, μ_j, |u_i* K v_j|²)` in row order over `(i, j)`.
pub fn joint_weights(pair: &LeftRightPair, k: &ComplexMatrix) -> Result<Vec<JointWeight>> {
    let c = pair.coefficients(k)?;
    let n = pair.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(JointWeight {
                lambda: pair.left_spec.eigenvalues[i],
                mu: pair.right_spec.eigenvalues[j],
                weight: c[(i, j)].norm_sqr(),
            });
        }
    }
    Ok(out)
}

/// Scalar weight a function of the pair assigns to each `E_ij`.
#[derive(Debug, Clone, Copy)]
pub enum PairFunction<'a> {
    /// `f(L/R)·R`
    Perspective(&'a ScalarFunction),
    /// `f(L/h(R))·h(R)`
    Marechal(&'a ScalarFunction, &'a ScalarFunction),
}

impl PairFunction<'_> {
    fn weight(&self, lambda: f64, mu: f64, cfg: &ToleranceConfig) -> Result<f64> {
        let floor = cfg.dom_floor;
        match *self {
            PairFunction::Perspective(f) => {
                let ratio = lambda / mu;
                Ok(f.eval_spectral(ratio, floor, floor * (1.0 + ratio.abs()))? * mu)
            }
            PairFunction::Marechal(f, h) => {
                let hm = h.eval_spectral(mu, floor, floor * (1.0 + mu))?;
                if !(hm > floor) {
                    return Err(Error::NonPositiveH { mu, value: hm });
                }
                let ratio = lambda / hm;
                Ok(f.eval_spectral(ratio, floor, floor * (1.0 + ratio.abs()))? * hm)
            }
        }
    }

    fn weights(&self, pair: &LeftRightPair, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
        let n = pair.dim();
        let mut w = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = self.weight(pair.left_spec.eigenvalues[i], pair.right_spec.eigenvalues[j], cfg)?;
                w[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        Ok(w)
    }

    fn form(&self, pair: &LeftRightPair, k: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<f64> {
        let c = pair.coefficients(k)?;
        let w = self.weights(pair, cfg)?;
        // fixed (i, j) row-order summation
        let n = pair.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += w[(i, j)].re * c[(i, j)].norm_sqr();
            }
        }
        Ok(acc)
    }

    fn apply(&self, pair: &LeftRightPair, k: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
        let c = pair.coefficients(k)?;
        let w = self.weights(pair, cfg)?;
        let scaled = c.component_mul(&w);
        Ok(&pair.left_spec.unitary * scaled * pair.right_spec.unitary.adjoint())
    }

    /// `Σ w_ij vec(E_ij) vec(E_ij)*` where `vec(u v*) = conj(v) ⊗ u`.
    fn superop(&self, pair: &LeftRightPair, cfg: &ToleranceConfig) -> Result<SuperOperatorMatrix> {
        let w = self.weights(pair, cfg)?;
        let n = pair.dim();
        let basis = pair.right_spec.unitary.map(|z| z.conj()).kronecker(&pair.left_spec.unitary);
        // column (j·n + i) of `basis` is vec(E_ij)
        let scaled = ComplexMatrix::from_fn(n * n, n * n, |r, col| {
            let (j, i) = (col / n, col % n);
            basis[(r, col)] * w[(i, j)].re
        });
        let m = scaled * basis.adjoint();
        Ok(SuperOperatorMatrix::new(hermitize(&m).into_matrix()))
    }
}

/// `⟨g(L,R)(K), K⟩ = Σ f(λ_i/μ_j) μ_j |u_i* K v_j|²`
pub fn perspective_form(
    f: &ScalarFunction,
    pair: &LeftRightPair,
    k: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    PairFunction::Perspective(f).form(pair, k, cfg)
}

/// `g(L,R)(K)`
pub fn apply_perspective(
    f: &ScalarFunction,
    pair: &LeftRightPair,
    k: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    PairFunction::Perspective(f).apply(pair, k, cfg)
}

/// `⟨(fΔh)(L,R)(K), K⟩ = Σ f(λ_i/h(μ_j)) h(μ_j) |u_i* K v_j|²`
pub fn marechal_form(
    f: &ScalarFunction,
    h: &ScalarFunction,
    pair: &LeftRightPair,
    k: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    PairFunction::Marechal(f, h).form(pair, k, cfg)
}

/// `(fΔh)(L,R)(K)`
pub fn apply_marechal(
    f: &ScalarFunction,
    h: &ScalarFunction,
    pair: &LeftRightPair,
    k: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    PairFunction::Marechal(f, h).apply(pair, k, cfg)
}

/// `g(L,R)` as an explicit n²×n² matrix.
pub fn perspective_superop_matrix(
    f: &ScalarFunction,
    pair: &LeftRightPair,
    cfg: &ToleranceConfig,
) -> Result<SuperOperatorMatrix> {
    PairFunction::Perspective(f).superop(pair, cfg)
}

/// `(fΔh)(L,R)` as an explicit n²×n² matrix.
pub fn marechal_superop_matrix(
    f: &ScalarFunction,
    h: &ScalarFunction,
    pair: &LeftRightPair,
    cfg: &ToleranceConfig,
) -> Result<SuperOperatorMatrix> {
    PairFunction::Marechal(f, h).superop(pair, cfg)
}

/// Reference route: `f(L·D⁻¹)·D` with `D = R` (or `h(R)`), evaluated by
/// functional calculus on the n²×n² Kronecker matrices. O(n⁶); used only as
/// a cross-check of the spectral route.
pub fn superop_via_kronecker(
    f: &ScalarFunction,
    h: Option<&ScalarFunction>,
    pair: &LeftRightPair,
    cfg: &ToleranceConfig,
) -> Result<SuperOperatorMatrix> {
    let l = left_superop(pair.left.as_matrix()).to_hermitian();
    let r = right_superop(pair.right.as_matrix()).to_hermitian();
    let d = match h {
        Some(h) => matrix_function(h, &r, cfg)?,
        None => r,
    };
    let d_inv = matrix_function(&ScalarFunction::inverse(), &d, cfg)?;
    let ratio = hermitize(&(l.as_matrix() * d_inv.as_matrix()));
    let fr = matrix_function(f, &ratio, cfg)?;
    Ok(SuperOperatorMatrix::new(hermitize(&(fr.as_matrix() * d.as_matrix())).into_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::{classical_perspective, ScalarFunction};
    use crate::linalg::{complex_gaussian, sample_density, sample_positive, trial_rng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn random_pair(seed: u64, n: usize) -> LeftRightPair {
        let mut rng = trial_rng(seed, n as u64);
        LeftRightPair::new(sample_positive(n, &mut rng), sample_positive(n, &mut rng)).unwrap()
    }

    #[test]
    fn vec_examples() {
        let i2 = ComplexMatrix::identity(2, 2);
        assert_eq!(vec(&i2), vec![c(1.0), c(0.0), c(0.0), c(1.0)]);
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(hs_inner(&x, &x), c(1.0));
        // column stacking: (0,1) entry lands at index 2
        assert_eq!(vec(&x)[2], c(1.0));
        let mut rng = trial_rng(1, 1);
        let y = complex_gaussian(3, 3, &mut rng);
        assert_eq!(unvec(&vec(&y)).unwrap(), y);
        assert!(unvec(&[c(1.0); 3]).is_err());
    }

    #[test]
    fn kronecker_vec_identities() {
        let mut rng = trial_rng(2, 0);
        let a = complex_gaussian(3, 3, &mut rng);
        let b = complex_gaussian(3, 3, &mut rng);
        let x = complex_gaussian(3, 3, &mut rng);
        let scale = 1.0 + a.norm() * x.norm() + b.norm() * x.norm();
        let lx = left_superop(&a).apply(&x).unwrap();
        assert!((lx - &a * &x).norm() <= 1e-12 * scale);
        let rx = right_superop(&b).apply(&x).unwrap();
        assert!((rx - &x * &b).norm() <= 1e-12 * scale);
        assert_eq!(left_superop(&ComplexMatrix::identity(3, 3)).entries(), &ComplexMatrix::identity(9, 9));
    }

    #[test]
    fn left_and_right_commute() {
        for seed in 0..10 {
            let mut rng = trial_rng(seed, 4);
            let a = sample_positive(4, &mut rng);
            let b = sample_positive(4, &mut rng);
            let l = left_superop(a.as_matrix());
            let r = right_superop(b.as_matrix());
            let comm = l.entries() * r.entries() - r.entries() * l.entries();
            assert!(comm.norm() <= 1e-12 * a.as_matrix().norm() * b.as_matrix().norm());
        }
    }

    #[test]
    fn joint_weight_examples() {
        let cfg = cfg();
        let n = 3;
        let half = PositiveMatrix::try_from_hermitian(HermitianMatrix::identity(n).scale(1.0 / n as f64)).unwrap();
        let pair = LeftRightPair::with_config(half.clone(), half, &cfg).unwrap();
        let w = joint_weights(&pair, &ComplexMatrix::identity(n, n)).unwrap();
        let total: f64 = w.iter().map(|e| e.weight).sum();
        assert!((total - n as f64).abs() < 1e-13);

        let d = PositiveMatrix::from_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let pair = LeftRightPair::new(d.clone(), d).unwrap();
        let w = joint_weights(&pair, &ComplexMatrix::identity(3, 3)).unwrap();
        for (idx, e) in w.iter().enumerate() {
            let expected = if idx / 3 == idx % 3 { 1.0 } else { 0.0 };
            assert!((e.weight - expected).abs() < 1e-15);
        }

        let pair = random_pair(7, 4);
        let mut rng = trial_rng(7, 99);
        let k = complex_gaussian(4, 4, &mut rng);
        let total: f64 = joint_weights(&pair, &k).unwrap().iter().map(|e| e.weight).sum();
        assert!((total - k.norm_squared()).abs() <= 1e-10);
        assert!(joint_weights(&pair, &ComplexMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn perspective_of_identity_and_constant() {
        let cfg = cfg();
        let mut rng = trial_rng(9, 0);
        let rho = sample_density(3, &mut rng);
        let sigma = sample_density(3, &mut rng);
        let pair = LeftRightPair::new(rho.clone(), sigma.clone()).unwrap();
        let i3 = ComplexMatrix::identity(3, 3);
        let id = ScalarFunction::identity();
        assert!((perspective_form(&id, &pair, &i3, &cfg).unwrap() - 1.0).abs() < 1e-13);
        let k = complex_gaussian(3, 3, &mut rng);
        let out = apply_perspective(&id, &pair, &k, &cfg).unwrap();
        assert!((out - rho.as_matrix() * &k).norm() < 1e-13);

        let one = ScalarFunction::constant(1.0);
        let out = apply_perspective(&one, &pair, &k, &cfg).unwrap();
        assert!((out - &k * sigma.as_matrix()).norm() < 1e-13);
        let v = perspective_form(&one, &pair, &i3, &cfg).unwrap();
        assert!((v - sigma.hermitian().trace()).abs() < 1e-13);
        let v = perspective_form(&one, &pair, &k, &cfg).unwrap();
        let direct = (&k * sigma.as_matrix() * k.adjoint()).trace().re;
        assert!((v - direct).abs() < 1e-12);
    }

    #[test]
    fn perspective_form_diagonal_relative_entropy() {
        let rho = PositiveMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let sigma = PositiveMatrix::from_diagonal(&[0.25, 0.75]).unwrap();
        let pair = LeftRightPair::new(rho, sigma).unwrap();
        let v = perspective_form(&ScalarFunction::xlogx(), &pair, &ComplexMatrix::identity(2, 2), &cfg()).unwrap();
        assert!((v - 0.14384103622589045).abs() < 1e-12);
    }

    #[test]
    fn apply_matches_form() {
        let cfg = cfg();
        for seed in 0..5 {
            let pair = random_pair(seed, 4);
            let mut rng = trial_rng(seed, 1000);
            let k = complex_gaussian(4, 4, &mut rng);
            for f in [ScalarFunction::xlogx(), ScalarFunction::neg_power(0.3).unwrap(), ScalarFunction::inverse()] {
                let form = perspective_form(&f, &pair, &k, &cfg).unwrap();
                let applied = apply_perspective(&f, &pair, &k, &cfg).unwrap();
                let inner = hs_inner(&applied, &k);
                let scale = 1.0 + form.abs();
                assert!((inner.re - form).abs() <= 1e-10 * scale);
                assert!(inner.im.abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn diagonal_reduction_to_classical() {
        let lam = [0.3, 1.7, 2.2];
        let mu = [0.9, 0.4, 5.0];
        let pair = LeftRightPair::new(
            PositiveMatrix::from_diagonal(&lam).unwrap(),
            PositiveMatrix::from_diagonal(&mu).unwrap(),
        )
        .unwrap();
        for f in [ScalarFunction::xlogx(), ScalarFunction::square(), ScalarFunction::neg_log()] {
            let v = perspective_form(&f, &pair, &ComplexMatrix::identity(3, 3), &cfg()).unwrap();
            let classical: f64 = lam.iter().zip(&mu).map(|(&x, &t)| classical_perspective(&f, x, t).unwrap()).sum();
            assert!((v - classical).abs() <= 1e-12, "{f}: {v} vs {classical}");
        }
    }

    #[test]
    fn marechal_with_identity_h_is_perspective() {
        let cfg = cfg();
        let pair = random_pair(21, 3);
        let mut rng = trial_rng(21, 5);
        let k = complex_gaussian(3, 3, &mut rng);
        let f = ScalarFunction::xlogx();
        let id = ScalarFunction::identity();
        assert_eq!(
            marechal_form(&f, &id, &pair, &k, &cfg).unwrap(),
            perspective_form(&f, &pair, &k, &cfg).unwrap()
        );
        assert_eq!(
            apply_marechal(&f, &id, &pair, &k, &cfg).unwrap(),
            apply_perspective(&f, &pair, &k, &cfg).unwrap()
        );
        assert_eq!(
            marechal_superop_matrix(&f, &id, &pair, &cfg).unwrap(),
            perspective_superop_matrix(&f, &pair, &cfg).unwrap()
        );
    }

    #[test]
    fn marechal_constant_f() {
        let cfg = cfg();
        let pair = random_pair(22, 3);
        let mut rng = trial_rng(22, 5);
        let k = complex_gaussian(3, 3, &mut rng);
        let h = ScalarFunction::power(0.4).unwrap();
        let v = marechal_form(&ScalarFunction::constant(1.0), &h, &pair, &k, &cfg).unwrap();
        let hr = matrix_function(&h, pair.right().hermitian(), &cfg).unwrap();
        let direct = (&k * hr.as_matrix() * k.adjoint()).trace().re;
        assert!((v - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn marechal_rejects_nonpositive_h() {
        let pair = random_pair(23, 2);
        let h = ScalarFunction::affine(-100.0, 1.0);
        let err = marechal_form(&ScalarFunction::xlogx(), &h, &pair, &ComplexMatrix::identity(2, 2), &cfg());
        assert!(matches!(err, Err(Error::NonPositiveH { .. })));
    }

    #[test]
    fn superop_quadratic_form_matches() {
        let cfg = cfg();
        let pair = random_pair(30, 3);
        let mut rng = trial_rng(30, 1);
        let k = complex_gaussian(3, 3, &mut rng);
        let f = ScalarFunction::xlogx();
        let s = perspective_superop_matrix(&f, &pair, &cfg).unwrap();
        let q = s.quadratic_form(&k).unwrap();
        let form = perspective_form(&f, &pair, &k, &cfg).unwrap();
        assert!((q.re - form).abs() <= 1e-10 * (1.0 + form.abs()));

        let id = perspective_superop_matrix(&ScalarFunction::identity(), &pair, &cfg).unwrap();
        let l = left_superop(pair.left().as_matrix());
        assert!((id.entries() - l.entries()).norm() <= 1e-12 * (1.0 + l.entries().norm()));
    }

    #[test]
    fn spectral_route_matches_kronecker_route() {
        let cfg = cfg();
        for seed in 0..3 {
            let pair = random_pair(40 + seed, 3);
            for f in [ScalarFunction::xlogx(), ScalarFunction::neg_power(0.5).unwrap(), ScalarFunction::square()] {
                let a = perspective_superop_matrix(&f, &pair, &cfg).unwrap();
                let b = superop_via_kronecker(&f, None, &pair, &cfg).unwrap();
                let scale = 1.0 + a.entries().norm();
                assert!((a.entries() - b.entries()).norm() <= 1e-9 * scale);
            }
            let f = ScalarFunction::neg_power(0.5).unwrap();
            let h = ScalarFunction::power(0.6).unwrap();
            let a = marechal_superop_matrix(&f, &h, &pair, &cfg).unwrap();
            let b = superop_via_kronecker(&f, Some(&h), &pair, &cfg).unwrap();
            assert!((a.entries() - b.entries()).norm() <= 1e-9 * (1.0 + a.entries().norm()));
        }
    }

    #[test]
    fn degenerate_spectra_route_equality() {
        let cfg = cfg();
        let mut rng = trial_rng(50, 0);
        let u = crate::linalg::sample_unitary(3, &mut rng);
        let left = PositiveMatrix::try_from_hermitian(HermitianMatrix::from_diagonal(&[1.0, 1.0, 2.0]).congruence(&u.adjoint())).unwrap();
        let right = PositiveMatrix::from_diagonal(&[0.5, 0.5, 0.5]).unwrap();
        let pair = LeftRightPair::new(left, right).unwrap();
        let f = ScalarFunction::xlogx();
        let a = perspective_superop_matrix(&f, &pair, &cfg).unwrap();
        let b = superop_via_kronecker(&f, None, &pair, &cfg).unwrap();
        assert!((a.entries() - b.entries()).norm() <= 1e-9 * (1.0 + a.entries().norm()));
    }

    #[test]
    fn positivity_transfer() {
        let cfg = cfg();
        let pair = random_pair(60, 3);
        for f in [ScalarFunction::square(), ScalarFunction::inverse(), ScalarFunction::exp()] {
            let s = perspective_superop_matrix(&f, &pair, &cfg).unwrap().to_hermitian();
            let d = eig_hermitian_with(&s, cfg.eig_threshold).unwrap();
            assert!(d.lambda_min() >= -cfg.psd_tol * (1.0 + d.spectral_norm()));
        }
    }

    #[test]
    fn non_hermitian_k_gives_real_form() {
        let cfg = cfg();
        let pair = random_pair(70, 4);
        let mut rng = trial_rng(70, 1);
        let k = complex_gaussian(4, 4, &mut rng);
        let f = ScalarFunction::xlogx();
        let s = perspective_superop_matrix(&f, &pair, &cfg).unwrap();
        let q = s.quadratic_form(&k).unwrap();
        assert!(q.im.abs() <= 1e-12 * (1.0 + q.re.abs()));
    }
}
