//! Haar-sampling estimates of ball volumes and of the moments of `d_c^2`.
//!
//! By unitary invariance the center can be fixed to the span of the first
//! `p` coordinate vectors. Then `P^H Q` is the top `p x q` block of `Q`,
//! and `d_c^2 = min(p, q) - |Q_{1..p, :}|_F^2` needs no factorization.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::fill_haar_columns;
use crate::params::Params;
use crate::rng::{rng_from_seed, worker_rng};

/// Fraction of sampled points inside `B(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub r: f64,
    pub mu_hat: f64,
    /// `sqrt(mu_hat (1 - mu_hat) / samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Squared chordal distance from the coordinate center to a frame stored
/// column-major in `buf` (`n x q`).
fn distance_sq_to_center(n: usize, p: usize, q: usize, buf: &[Complex64]) -> f64 {
    let mut overlap = 0.0;
    for col in buf.chunks_exact(n).take(q) {
        overlap += col[..p].iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    (p.min(q) as f64 - overlap).max(0.0)
}

/// `count` draws of `d_c^2(P, Q)` for Haar `Q`.
pub fn sample_distances_sq<R: Rng + ?Sized>(params: Params, count: u64, rng: &mut R) -> Vec<f64> {
    let (n, p, q) = (params.n(), params.p(), params.q());
    let mut buf = vec![Complex64::new(0.0, 0.0); n * q];
    (0..count)
        .map(|_| {
            fill_haar_columns(n, q, rng, &mut buf);
            distance_sq_to_center(n, p, q, &buf)
        })
        .collect()
}

fn check_grid(params: Params, r_grid: &[f64]) -> Result<Vec<f64>> {
    r_grid.iter().map(|&r| params.radius_sq(r)).collect()
}

fn estimates(r_grid: &[f64], s_grid: &[f64], mut draws: Vec<f64>, seed: u64) -> Vec<VolumeEstimate> {
    draws.sort_by(f64::total_cmp);
    let samples = draws.len() as u64;
    r_grid
        .iter()
        .zip(s_grid)
        .map(|(&r, &s)| {
            let inside = draws.partition_point(|&d| d <= s) as f64;
            let mu_hat = inside / samples as f64;
            let stderr = (mu_hat * (1.0 - mu_hat) / samples as f64).sqrt();
            VolumeEstimate { r, mu_hat, stderr, samples, seed }
        })
        .collect()
}

/// Estimates `mu(B(r))` on a radius grid from one shared set of samples, so
/// the estimates are nondecreasing in `r`. Single-threaded and bit-exact for
/// a given seed.
pub fn estimate_volume(params: Params, r_grid: &[f64], samples: u64, seed: u64) -> Result<Vec<VolumeEstimate>> {
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let params = params.canonicalize();
    let s_grid = check_grid(params, r_grid)?;
    let draws = sample_distances_sq(params, samples, &mut rng_from_seed(seed));
    Ok(estimates(r_grid, &s_grid, draws, seed))
}

/// Splits `samples` over `workers` streams of `seed`; the shares differ by at most one.
fn shares(samples: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    (0..w).map(|k| samples / w + u64::from(k < samples % w)).collect()
}

/// Parallel variant of [`estimate_volume`]. Worker `k` draws from stream `k`
/// of `seed`, so the result depends on `threads` but is reproducible for a
/// fixed thread count. With `threads = 1` it equals [`estimate_volume`].
pub fn estimate_volume_parallel(
    params: Params,
    r_grid: &[f64],
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<VolumeEstimate>> {
    if threads <= 1 {
        return estimate_volume(params, r_grid, samples, seed);
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let params = params.canonicalize();
    let s_grid = check_grid(params, r_grid)?;
    let pool = thread_pool(threads)?;
    let parts: Vec<Vec<f64>> = pool.install(|| {
        shares(samples, threads)
            .into_par_iter()
            .enumerate()
            .map(|(k, share)| sample_distances_sq(params, share, &mut worker_rng(seed, k as u64)))
            .collect()
    });
    Ok(estimates(r_grid, &s_grid, parts.concat(), seed))
}

pub(crate) fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start thread pool: {e}")))
}

/// Sample mean and unbiased sample variance of `d_c^2` over `samples` Haar draws.
pub fn empirical_moments(params: Params, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::invalid("empirical moments need at least 2 samples"));
    }
    let params = params.canonicalize();
    let (n, p, q) = (params.n(), params.p(), params.q());
    let mut rng = rng_from_seed(seed);
    let mut buf = vec![Complex64::new(0.0, 0.0); n * q];
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 1..=samples {
        fill_haar_columns(n, q, &mut rng, &mut buf);
        let d = distance_sq_to_center(n, p, q, &buf);
        let delta = d - mean;
        mean += delta / k as f64;
        m2 += delta * (d - mean);
    }
    Ok((mean, m2 / (samples - 1) as f64))
}
