//! Seeded random matrix samplers.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`. Trial `t` of a run with seed `s` uses the
//! same key on stream `t`, so trials can be evaluated in any order. Complex
//! Gaussian matrices are filled row by row, real part before imaginary part,
//! each drawn from N(0, 1/2).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{hermitize, ComplexMatrix, HermitianMatrix, PositiveMatrix};

pub type SeededRng = ChaCha8Rng;

/// Minimum eigenvalue accepted from the Wishart samplers.
pub const SAMPLE_LAMBDA_FLOOR: f64 = 1e-8;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(Complex64::new(re * half, im * half));
    }
    DMatrix::from_row_slice(rows, cols, &data)
}

/// GUE-style Hermitian matrix `scale · (G + G*)/2`.
pub fn sample_hermitian<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> HermitianMatrix {
    assert!(n >= 1 && scale > 0.0, "sample_hermitian needs n >= 1 and scale > 0");
    hermitize(&complex_gaussian(n, n, rng)).scale(scale)
}

fn wishart<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (HermitianMatrix, f64) {
    let g = complex_gaussian(n, n, rng);
    let w = hermitize(&(&g * g.adjoint()));
    let tr = w.trace();
    (w, tr)
}

/// Wishart matrix `G G*/n`, resampled until `λ_min ≥ 1e-8`.
pub fn sample_positive<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PositiveMatrix {
    assert!(n >= 1, "sample_positive needs n >= 1");
    loop {
        let (w, _) = wishart(n, rng);
        let w = w.scale(1.0 / n as f64);
        if let Ok(p) = PositiveMatrix::new(w, SAMPLE_LAMBDA_FLOOR, "sample") {
            return p;
        }
    }
}

/// Unit-trace Wishart matrix, resampled until `λ_min ≥ 1e-8`.
pub fn sample_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PositiveMatrix {
    assert!(n >= 1, "sample_density needs n >= 1");
    loop {
        let (w, tr) = wishart(n, rng);
        let mut m = w.scale(1.0 / tr).into_matrix();
        if n == 1 {
            m[(0, 0)] = Complex64::new(1.0, 0.0);
        }
        if let Ok(p) = PositiveMatrix::new(hermitize(&m), SAMPLE_LAMBDA_FLOOR, "sample") {
            return p;
        }
    }
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `diag(R)` divided out.
pub fn sample_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Pair `(A, B)` with `A*A + B*B = I`, the two n×n blocks of the
/// orthonormalized columns of a 2n×n Gaussian matrix.
pub fn sample_isometric_pair<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> (ComplexMatrix, ComplexMatrix) {
    assert!(n >= 1, "sample_isometric_pair needs n >= 1");
    loop {
        let g = complex_gaussian(2 * n, n, rng);
        let q = g.qr().q();
        let a = q.rows(0, n).into_owned();
        let b = q.rows(n, n).into_owned();
        let resid = (a.adjoint() * &a + b.adjoint() * &b - ComplexMatrix::identity(n, n)).norm();
        if resid <= 1e-10 {
            return (a, b);
        }
    }
}

/// Random contraction `V diag(u) W*` with Haar unitaries `V, W` and singular
/// values `u_i` uniform on `[0, 1]`.
pub fn sample_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let v = sample_unitary(n, rng);
    let w = sample_unitary(n, rng);
    let sv: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| v[(i, j)] * sv[j]);
    scaled * w.adjoint()
}

/// Pair with `A*A + B*B = C*C ≼ I`: an isometric pair right-multiplied by a
/// random contraction.
pub fn sample_subisometric_pair<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> (ComplexMatrix, ComplexMatrix) {
    let (a, b) = sample_isometric_pair(n, rng);
    let c = sample_contraction(n, rng);
    (a * &c, b * &c)
}

/// `U diag(v) U*` with Haar `U` and `|v_i|` log-uniform on `[lo, hi]`;
/// signs are random when `signed`.
pub fn sample_spread_hermitian<R: Rng + ?Sized>(
    n: usize,
    lo: f64,
    hi: f64,
    signed: bool,
    rng: &mut R,
) -> HermitianMatrix {
    let u = sample_unitary(n, rng);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let values: Vec<f64> = (0..n)
        .map(|_| {
            let mag = (llo + (lhi - llo) * rng.random::<f64>()).exp();
            if signed && rng.random::<bool>() {
                -mag
            } else {
                mag
            }
        })
        .collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)] * values[j]);
    hermitize(&(scaled * u.adjoint()))
}
