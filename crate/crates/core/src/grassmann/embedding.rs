//! Real coordinates of orthogonal projectors.
//!
//! For Hermitian `A`, `B`: `tr(AB) = sum_i A_ii B_ii + 2 sum_{i<j} Re(A_ij conj(B_ij))`.
//! Packing the diagonal and `sqrt(2)`-scaled real and imaginary parts of the
//! strict upper triangle into `n^2` reals turns `|P^H Q|_F^2 = tr(P P^H Q Q^H)`
//! into a plain dot product, which is what the quantizers evaluate millions
//! of times.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::SubspaceBasis;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Writes the coordinates of `M M^H` (column-major `n x k` frame) into `out`.
pub(crate) fn embed_frame(n: usize, k: usize, frame: &[Complex64], out: &mut [f64]) {
    debug_assert_eq!(out.len(), n * n);
    let entry = |i: usize, j: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..k {
            acc += frame[c * n + i] * frame[c * n + j].conj();
        }
        acc
    };
    let mut idx = 0;
    for i in 0..n {
        out[idx] = entry(i, i).re;
        idx += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = entry(i, j);
            out[idx] = SQRT_2 * z.re;
            out[idx + 1] = SQRT_2 * z.im;
            idx += 2;
        }
    }
}

/// Projector coordinates of a basis.
pub fn embed(basis: &SubspaceBasis) -> Vec<f64> {
    let n = basis.n();
    let mut out = vec![0.0; n * n];
    embed_frame(n, basis.k(), basis.matrix().as_slice(), &mut out);
    out
}

/// Inverse of the packing: the Hermitian matrix with the given coordinates.
pub fn hermitian_from_coords(n: usize, coords: &[f64]) -> DMatrix<Complex64> {
    debug_assert_eq!(coords.len(), n * n);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(coords[i], 0.0);
    }
    let mut idx = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = Complex64::new(coords[idx] / SQRT_2, coords[idx + 1] / SQRT_2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            idx += 2;
        }
    }
    m
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
