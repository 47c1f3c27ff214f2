use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codebook::Codebook;
use super::distortion::{DistortionMethod, DistortionReport};
use super::{mean_std, nearest, sample_embedded};
use crate::error::{Error, Result};
use crate::grassmann::embedding::{embed, embed_frame, hermitian_from_coords};
use crate::grassmann::{fill_haar_columns, SubspaceBasis};
use crate::monte_carlo::thread_pool;
use crate::params::Params;
use crate::rng::{rng_from_seed, HOLDOUT_SALT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LloydConfig {
    pub training_samples: usize,
    pub holdout_samples: usize,
    /// Maximum number of centroid updates.
    pub iterations: usize,
    pub seed: u64,
    pub threads: usize,
}

impl LloydConfig {
    pub fn new(training_samples: usize, iterations: usize, seed: u64) -> Self {
        LloydConfig { training_samples, holdout_samples: training_samples, iterations, seed, threads: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LloydResult {
    pub codebook: Codebook,
    /// Held-out distortion of the final codebook.
    pub report: DistortionReport,
    /// Training distortion of the initial codebook and after every update.
    pub training_distortion: Vec<f64>,
}

/// Lloyd iteration on a fixed Haar training set, single-threaded.
pub fn lloyd_quantizer(
    params: Params,
    size: usize,
    training_samples: usize,
    iterations: usize,
    seed: u64,
) -> Result<LloydResult> {
    lloyd_quantizer_with(params, size, &LloydConfig::new(training_samples, iterations, seed))
}

/// The codeword minimizing the summed `d_c^2` to a cell: the span of the
/// `p` dominant eigenvectors of the summed projectors.
fn centroid(n: usize, p: usize, coords: &[f64]) -> Result<SubspaceBasis> {
    let eig = hermitian_from_coords(n, coords).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let frame = DMatrix::<Complex64>::from_fn(n, p, |i, j| eig.eigenvectors[(i, order[j])]);
    SubspaceBasis::new(frame).map_err(|e| Error::Internal(format!("centroid is not orthonormal: {e}")))
}

/// Lloyd iteration with explicit sample counts and thread count. The
/// partition step runs on `cfg.threads` workers; every sum is taken in
/// sample order, so results are identical for any thread count.
pub fn lloyd_quantizer_with(params: Params, size: usize, cfg: &LloydConfig) -> Result<LloydResult> {
    let (n, p) = (params.n(), params.p());
    if params.q() != p {
        return Err(Error::invalid(format!("Lloyd codebooks are supported for p = q only, got {params}")));
    }
    if size == 0 {
        return Err(Error::EmptyCodebook);
    }
    if cfg.training_samples < size {
        return Err(Error::invalid(format!(
            "{} training samples cannot seed {size} codewords",
            cfg.training_samples
        )));
    }
    if cfg.holdout_samples < 2 {
        return Err(Error::invalid("held-out evaluation needs at least 2 samples"));
    }
    let n2 = n * n;
    let m = p as f64;
    let samples = cfg.training_samples;

    let mut rng = rng_from_seed(cfg.seed);
    let mut frames = vec![Complex64::new(0.0, 0.0); samples * n * p];
    let mut train = vec![0.0; samples * n2];
    for (frame, coords) in frames.chunks_exact_mut(n * p).zip(train.chunks_exact_mut(n2)) {
        fill_haar_columns(n, p, &mut rng, frame);
        embed_frame(n, p, frame, coords);
    }
    let frame_basis = |i: usize| SubspaceBasis::new(DMatrix::from_column_slice(n, p, &frames[i * n * p..(i + 1) * n * p]));

    let mut codewords: Vec<SubspaceBasis> = (0..size).map(frame_basis).collect::<Result<_>>()?;
    let mut code: Vec<f64> = train[..size * n2].to_vec();

    let pool = if cfg.threads > 1 { Some(thread_pool(cfg.threads)?) } else { None };
    let assign = |code: &[f64]| -> Vec<(usize, f64)> {
        match &pool {
            Some(pool) => pool.install(|| train.par_chunks_exact(n2).map(|s| nearest(code, n2, m, s)).collect()),
            None => train.chunks_exact(n2).map(|s| nearest(code, n2, m, s)).collect(),
        }
    };

    let mut trajectory = Vec::with_capacity(cfg.iterations + 1);
    let mut previous: Option<Vec<usize>> = None;
    let mut updates = 0;
    loop {
        let assignment = assign(&code);
        trajectory.push(assignment.iter().map(|a| a.1).sum::<f64>() / samples as f64);
        let cells: Vec<usize> = assignment.iter().map(|a| a.0).collect();
        if updates == cfg.iterations || previous.as_ref() == Some(&cells) {
            break;
        }

        let mut sums = vec![0.0; size * n2];
        let mut counts = vec![0usize; size];
        for (coords, &k) in train.chunks_exact(n2).zip(&cells) {
            counts[k] += 1;
            for (acc, v) in sums[k * n2..(k + 1) * n2].iter_mut().zip(coords) {
                *acc += v;
            }
        }
        for k in (0..size).filter(|&k| counts[k] > 0) {
            codewords[k] = centroid(n, p, &sums[k * n2..(k + 1) * n2])?;
        }
        let empty: Vec<usize> = (0..size).filter(|&k| counts[k] == 0).collect();
        if !empty.is_empty() {
            let mut far: Vec<usize> = (0..samples).collect();
            far.sort_by(|&a, &b| assignment[b].1.total_cmp(&assignment[a].1).then(a.cmp(&b)));
            for (&k, &i) in empty.iter().zip(&far) {
                codewords[k] = frame_basis(i)?;
            }
        }
        for (k, c) in codewords.iter().enumerate() {
            code[k * n2..(k + 1) * n2].copy_from_slice(&embed(c));
        }
        previous = Some(cells);
        updates += 1;
    }

    let holdout = sample_embedded(n, p, cfg.holdout_samples, &mut rng_from_seed(cfg.seed ^ HOLDOUT_SALT));
    let errors: Vec<f64> = holdout.chunks_exact(n2).map(|s| nearest(&code, n2, m, s).1).collect();
    let (distortion, sd) = mean_std(&errors);
    let codebook = Codebook::new(codewords)?.with_provenance(Some(cfg.seed), Some(updates));
    Ok(LloydResult {
        codebook,
        report: DistortionReport {
            n,
            p,
            q: p,
            size: size as f64,
            bits: (size as f64).log2(),
            distortion,
            method: DistortionMethod::Lloyd,
            trials: 1,
            samples: cfg.holdout_samples as u64,
            seed: Some(cfg.seed),
            stderr: Some(sd / (cfg.holdout_samples as f64).sqrt()),
        },
        training_distortion: trajectory,
    })
}
