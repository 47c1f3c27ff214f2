//! Haar-uniform sampling on `G(n, k)`.
//!
//! An `n x k` matrix of i.i.d. standard complex Gaussians has a unitarily
//! invariant column span. Orthonormalizing it with Gram-Schmidt is a QR
//! factorization whose triangular factor has a real positive diagonal (the
//! column norms), which fixes the gauge.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::SubspaceBasis;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Samples a Haar-uniform `k`-dimensional subspace of `C^n`.
pub fn sample_haar(n: usize, k: usize, seed: u64) -> Result<SubspaceBasis> {
    let mut rng = rng_from_seed(seed);
    sample_haar_with(n, k, &mut rng)
}

/// Same as [`sample_haar`], drawing from a caller-owned generator.
pub fn sample_haar_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<SubspaceBasis> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot sample G({n}, {k}): need 1 <= k <= n")));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); n * k];
    fill_haar_columns(n, k, rng, &mut buf);
    Ok(SubspaceBasis::from_orthonormal(DMatrix::from_column_slice(n, k, &buf)))
}

/// Writes an orthonormal Haar-distributed frame into `buf` (column-major,
/// `n * k` entries). Hot path for the Monte Carlo and coding samplers.
pub(crate) fn fill_haar_columns<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
    buf: &mut [Complex64],
) {
    debug_assert_eq!(buf.len(), n * k);
    loop {
        for z in buf.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex64::new(re, im);
        }
        if orthonormalize(n, k, buf) {
            return;
        }
        // rank-deficient draw: probability zero, redraw
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Returns `false`
/// if a column collapses.
fn orthonormalize(n: usize, k: usize, buf: &mut [Complex64]) -> bool {
    for j in 0..k {
        for _pass in 0..2 {
            for i in 0..j {
                let (head, tail) = buf.split_at_mut(j * n);
                let qi = &head[i * n..(i + 1) * n];
                let vj = &mut tail[..n];
                let mut dot = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    dot += qi[r].conj() * vj[r];
                }
                for r in 0..n {
                    vj[r] -= dot * qi[r];
                }
            }
        }
        let col = &mut buf[j * n..(j + 1) * n];
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-150) {
            return false;
        }
        let inv = 1.0 / norm;
        for z in col.iter_mut() {
            *z *= inv;
        }
    }
    true
}
