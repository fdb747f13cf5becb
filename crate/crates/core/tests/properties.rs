//! Randomized invariants across modules, driven by proptest-chosen seeds.

use opconvex::entropy::{relative_entropy, DensityMatrix, LiebParameters};
use opconvex::funcat::{catalog, ScalarFunction};
use opconvex::jensen::{check_joint_scalar_with, Sense};
use opconvex::linalg::{
    eig_hermitian, hermitize, loewner_leq, matrix_function, sample_density, sample_hermitian, sample_positive,
    sample_unitary, spectral_norm, trial_rng, ComplexMatrix, HermitianMatrix, PositiveMatrix, ToleranceConfig,
};
use opconvex::superop::{
    left_superop, perspective_form, perspective_superop_matrix, right_superop, LeftRightPair,
};
use rand::Rng;
use proptest::prelude::*;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn conj_by(u: &ComplexMatrix, h: &HermitianMatrix) -> HermitianMatrix {
    hermitize(&(u * h.as_matrix() * u.adjoint()))
}

fn density_from(p: &PositiveMatrix) -> DensityMatrix {
    DensityMatrix::new(p.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), n in 1usize..=8) {
        let h = sample_hermitian(n, 1.0, &mut trial_rng(seed, 0));
        let d = eig_hermitian(&h).unwrap();
        prop_assert!(d.reconstruction_residual(&h) <= 1e-10 * (1.0 + h.as_matrix().norm()));
        prop_assert!(d.unitarity_residual() <= 1e-12);
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn functional_calculus_identity_and_covariance(seed in any::<u64>(), n in 1usize..=6) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 1);
        let h = sample_hermitian(n, 1.0, &mut rng);
        let id = matrix_function(&ScalarFunction::identity(), &h, &cfg).unwrap();
        prop_assert!((id.as_matrix() - h.as_matrix()).norm() <= cfg.eq_tol * (1.0 + h.as_matrix().norm()));
        let u = sample_unitary(n, &mut rng);
        for f in [ScalarFunction::square(), ScalarFunction::exp(), ScalarFunction::quartic()] {
            let lhs = matrix_function(&f, &conj_by(&u, &h), &cfg).unwrap();
            let fh = matrix_function(&f, &h, &cfg).unwrap();
            let rhs = conj_by(&u, &fh);
            prop_assert!((lhs.as_matrix() - rhs.as_matrix()).norm() <= cfg.eq_tol * (1.0 + fh.as_matrix().norm()));
        }
    }

    #[test]
    fn commuting_log_law(seed in any::<u64>(), n in 1usize..=6) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 2);
        let u = sample_unitary(n, &mut rng);
        let lp: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..5.0)).collect();
        let lq: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..5.0)).collect();
        let ratio: Vec<f64> = lp.iter().zip(&lq).map(|(a, b)| a / b).collect();
        let p = conj_by(&u, &HermitianMatrix::from_diagonal(&lp));
        let q = conj_by(&u, &HermitianMatrix::from_diagonal(&lq));
        let pq_inv = conj_by(&u, &HermitianMatrix::from_diagonal(&ratio));
        let log = ScalarFunction::log();
        let lhs = matrix_function(&log, &pq_inv, &cfg).unwrap();
        let rhs = matrix_function(&log, &p, &cfg).unwrap().sub(&matrix_function(&log, &q, &cfg).unwrap());
        prop_assert!((lhs.as_matrix() - rhs.as_matrix()).norm() <= cfg.eq_tol * (1.0 + lhs.as_matrix().norm()));
    }

    #[test]
    fn loewner_partial_order(seed in any::<u64>(), n in 1usize..=6, eps in 1e-14f64..1e-8) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 3);
        let a = sample_hermitian(n, 1.0, &mut rng);
        let refl = loewner_leq(&a, &a, &cfg).unwrap();
        prop_assert!(refl.holds && refl.margin == 0.0);
        let e = sample_hermitian(n, eps, &mut rng);
        let b = a.add(&e);
        let ab = loewner_leq(&a, &b, &cfg).unwrap();
        let ba = loewner_leq(&b, &a, &cfg).unwrap();
        if ab.holds && ba.holds {
            let gap = spectral_norm(&a.sub(&b), &cfg).unwrap();
            prop_assert!(gap <= 2.0 * cfg.psd_tol * ab.scale.max(ba.scale));
        }
    }

    #[test]
    fn matrix_shift_identity(seed in any::<u64>(), n in 1usize..=5, c in 0.05f64..0.95) {
        let cfg = cfg();
        for (i, f) in catalog().iter().enumerate() {
            if !f.domain().contains_interior(c) {
                continue;
            }
            let mut rng = trial_rng(seed, 10 + i as u64);
            let t = if f.domain().bounded_below() {
                sample_positive(n, &mut rng).hermitian().shift(f.domain().lo - c)
            } else {
                sample_hermitian(n, 1.0, &mut rng)
            };
            let shifted = f.shift_reduce(c).unwrap();
            let lhs = matrix_function(&shifted, &t, &cfg).unwrap();
            let rhs = matrix_function(f, &t.shift(c), &cfg).unwrap().shift(-f.eval(c).unwrap());
            let scale = 1.0 + rhs.as_matrix().norm();
            prop_assert!((lhs.as_matrix() - rhs.as_matrix()).norm() <= cfg.eq_tol * scale, "{}", f);
        }
    }

    #[test]
    fn left_right_commute(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = trial_rng(seed, 4);
        let a = sample_positive(n, &mut rng);
        let b = sample_positive(n, &mut rng);
        let l = left_superop(a.as_matrix());
        let r = right_superop(b.as_matrix());
        let comm = l.entries() * r.entries() - r.entries() * l.entries();
        prop_assert!(comm.norm() <= 1e-12 * a.as_matrix().norm() * b.as_matrix().norm());
    }

    #[test]
    fn perspective_positivity_and_real_form(seed in any::<u64>(), n in 1usize..=4) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 5);
        let pair = LeftRightPair::new(sample_positive(n, &mut rng), sample_positive(n, &mut rng)).unwrap();
        // inverse and x² are nonnegative on the ratio spectrum
        for f in [ScalarFunction::inverse(), ScalarFunction::square()] {
            let g = perspective_superop_matrix(&f, &pair, &cfg).unwrap().to_hermitian();
            let zero = HermitianMatrix::zeros(g.dim());
            let rep = loewner_leq(&zero, &g, &cfg).unwrap();
            prop_assert!(rep.holds);
        }
        let k = opconvex::linalg::complex_gaussian(n, n, &mut rng);
        let g = perspective_superop_matrix(&ScalarFunction::xlogx(), &pair, &cfg).unwrap();
        let q = g.quadratic_form(&k).unwrap();
        let form = perspective_form(&ScalarFunction::xlogx(), &pair, &k, &cfg).unwrap();
        let scale = 1.0 + q.norm();
        prop_assert!(q.im.abs() <= 1e-12 * scale);
        prop_assert!((q.re - form).abs() <= 1e-10 * scale);
    }

    #[test]
    fn log_law_consequence(seed in any::<u64>(), n in 1usize..=5) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 6);
        let rho = density_from(&sample_density(n, &mut rng));
        let sigma = density_from(&sample_density(n, &mut rng));
        let pair = LeftRightPair::new(rho.positive().clone(), sigma.positive().clone()).unwrap();
        let form = perspective_form(&ScalarFunction::xlogx(), &pair, &ComplexMatrix::identity(n, n), &cfg).unwrap();
        let log = ScalarFunction::log();
        let lr = matrix_function(&log, rho.hermitian(), &cfg).unwrap();
        let ls = matrix_function(&log, sigma.hermitian(), &cfg).unwrap();
        let direct = (rho.as_matrix() * lr.as_matrix()).trace().re - (rho.as_matrix() * ls.as_matrix()).trace().re;
        prop_assert!((form - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
    }

    #[test]
    fn relative_entropy_nonnegative_and_covariant(seed in any::<u64>(), n in 1usize..=6) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 7);
        let rho = density_from(&sample_density(n, &mut rng));
        let sigma = density_from(&sample_density(n, &mut rng));
        let s = relative_entropy(&rho, &sigma, &cfg).unwrap();
        prop_assert!(s >= -1e-10);
        prop_assert!(relative_entropy(&rho, &rho, &cfg).unwrap().abs() <= 1e-10);
        let u = sample_unitary(n, &mut rng);
        let rot = |d: &DensityMatrix| {
            let h = conj_by(&u, d.hermitian());
            DensityMatrix::new(PositiveMatrix::new(h, cfg.dom_floor, "rotated").unwrap()).unwrap()
        };
        let s_rot = relative_entropy(&rot(&rho), &rot(&sigma), &cfg).unwrap();
        prop_assert!((s - s_rot).abs() <= 1e-10 * (1.0 + s.abs()));
    }

    #[test]
    fn lieb_parameter_map(p in 1e-6f64..1.0, frac in 1e-6f64..1.0) {
        let q = (1.0 - p) * frac;
        prop_assume!(q > 0.0 && p + q <= 1.0);
        let params = LiebParameters::new(p, q).unwrap();
        let t = params.t();
        prop_assert!(t > 0.0 && t <= 1.0);
        prop_assert!(((1.0 - params.s()) * t - p).abs() <= 1e-15);
    }

    #[test]
    fn joint_sign_discipline(seed in any::<u64>(), n in 1usize..=4, c in 0.0f64..=1.0) {
        let cfg = cfg();
        let mut rng = trial_rng(seed, 8);
        let draws: Vec<PositiveMatrix> = (0..4).map(|_| sample_positive(n, &mut rng)).collect();
        let k = opconvex::linalg::complex_gaussian(n, n, &mut rng);
        let phi = |a: &PositiveMatrix, b: &PositiveMatrix| opconvex::entropy::lieb_functional(a, b, &k, 0.3, &cfg);
        let neg = |a: &PositiveMatrix, b: &PositiveMatrix| phi(a, b).map(|v| -v);
        let first = (&draws[0], &draws[1]);
        let second = (&draws[2], &draws[3]);
        let m = check_joint_scalar_with("lieb", Sense::Concave, phi, first, second, c, &cfg).unwrap();
        let mn = check_joint_scalar_with("lieb", Sense::Concave, neg, first, second, c, &cfg).unwrap();
        let mc = check_joint_scalar_with("lieb", Sense::Convex, neg, first, second, c, &cfg).unwrap();
        prop_assert!((m.margin + mn.margin).abs() <= 1e-12 * m.scale);
        prop_assert_eq!(m.margin, mc.margin);
    }
}

#[test]
fn endpoint_mixing_is_exact() {
    let cfg = cfg();
    let mut rng = trial_rng(11, 0);
    let draws: Vec<PositiveMatrix> = (0..4).map(|_| sample_positive(3, &mut rng)).collect();
    let k = opconvex::linalg::complex_gaussian(3, 3, &mut rng);
    let phi = |a: &PositiveMatrix, b: &PositiveMatrix| opconvex::entropy::lieb_functional(a, b, &k, 0.5, &cfg);
    for c in [0.0, 1.0] {
        let r = check_joint_scalar_with("lieb", Sense::Concave, phi, (&draws[0], &draws[1]), (&draws[2], &draws[3]), c, &cfg).unwrap();
        assert!(r.margin.abs() <= 1e-12 * r.scale);
    }
}
