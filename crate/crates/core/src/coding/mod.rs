//! Packing bounds and Grassmannian source coding.
//!
//! Codewords and sources are handled through their projector coordinates
//! (see [`crate::grassmann::embedding`]), so `d_c^2(C, Q) = min(p, q) - <C, Q>`.

mod bounds;
mod codebook;
mod distortion;
mod lloyd;

pub use bounds::{gv_bound, gv_bound_with, hamming_bound, hamming_bound_with, BoundKind, PackingBound};
pub use codebook::{error_cdf, quantize, Codebook};
pub use distortion::{
    bound_valid, distortion_lower_bound, random_code_distortion, random_code_distortion_threads,
    DistortionBound, DistortionMethod, DistortionReport,
};
pub use lloyd::{lloyd_quantizer, lloyd_quantizer_with, LloydConfig, LloydResult};

use num_complex::Complex64;
use rand::Rng;

use crate::grassmann::embedding::embed_frame;
use crate::grassmann::fill_haar_columns;

/// `count` Haar points of `G(n, k)` as concatenated projector coordinates.
pub(crate) fn sample_embedded<R: Rng + ?Sized>(n: usize, k: usize, count: usize, rng: &mut R) -> Vec<f64> {
    let n2 = n * n;
    let mut frame = vec![Complex64::new(0.0, 0.0); n * k];
    let mut out = vec![0.0; n2 * count];
    for chunk in out.chunks_exact_mut(n2) {
        fill_haar_columns(n, k, rng, &mut frame);
        embed_frame(n, k, &frame, chunk);
    }
    out
}

/// Index and squared distance of the nearest codeword; ties go to the
/// lowest index.
#[inline]
pub(crate) fn nearest(codewords: &[f64], n2: usize, m: f64, source: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, c) in codewords.chunks_exact(n2).enumerate() {
        let d = (m - crate::grassmann::embedding::dot(c, source)).clamp(0.0, m);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// Mean and sample standard deviation.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let len = values.len() as f64;
    let mean = values.iter().sum::<f64>() / len;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (len - 1.0);
    (mean, var.sqrt())
}
