//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation is a 2×2 unitary `W = diag(1, e^{-iφ}) · G` acting on the
//! (p, q) plane, where the phase factor makes `a_pq` real and `G` is the
//! classical real Jacobi rotation that annihilates it. Rotations are swept
//! over all pairs p < q in row order until the off-diagonal Frobenius norm
//! drops below `threshold · ‖H‖_F`.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix, SpectralDecomposition};
use crate::error::{Error, Result};

/// Maximum number of full sweeps before reporting non-convergence.
pub const MAX_SWEEPS: usize = 100;

/// Default relative off-diagonal threshold.
pub const DEFAULT_THRESHOLD: f64 = 1e-14;

/// Eigendecomposition with the default threshold.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    jacobi(h.as_matrix(), DEFAULT_THRESHOLD)
}

/// Eigendecomposition with an explicit relative off-diagonal threshold.
pub fn eig_hermitian_with(h: &HermitianMatrix, threshold: f64) -> Result<SpectralDecomposition> {
    if h.as_matrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    jacobi(h.as_matrix(), threshold)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Runs the sweeps on a matrix assumed Hermitian (only exact symmetry of the
/// input is relied on; the caller hermitizes).
pub(crate) fn jacobi(h: &ComplexMatrix, threshold: f64) -> Result<SpectralDecomposition> {
    let n = h.nrows();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n, n);
    let target = threshold * h.norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NonConvergence { sweeps: sweep, off });
        }
        sweep += 1;

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = (apq / r).conj();
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let theta = (beta - alpha) / (2.0 * r);
                let t = if theta.is_finite() {
                    let mag = 1.0 / (theta.abs() + theta.hypot(1.0));
                    if theta < 0.0 {
                        -mag
                    } else {
                        mag
                    }
                } else {
                    0.0
                };
                let c = 1.0 / t.mul_add(t, 1.0).sqrt();
                let s = t * c;

                // W = [[w00, w01], [w10, w11]]
                let w00 = Complex64::new(c, 0.0);
                let w01 = Complex64::new(s, 0.0);
                let w10 = phase * (-s);
                let w11 = phase * c;

                rotate_columns(&mut a, p, q, w00, w01, w10, w11);
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = w00.conj() * apk + w10.conj() * aqk;
                    a[(q, k)] = w01.conj() * apk + w11.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                rotate_columns(&mut v, p, q, w00, w01, w10, w11);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let unitary = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        unitary,
    })
}

#[inline]
fn rotate_columns(
    m: &mut ComplexMatrix,
    p: usize,
    q: usize,
    w00: Complex64,
    w01: Complex64,
    w10: Complex64,
    w11: Complex64,
) {
    for k in 0..m.nrows() {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * w00 + mkq * w10;
        m[(k, q)] = mkp * w01 + mkq * w11;
    }
}
