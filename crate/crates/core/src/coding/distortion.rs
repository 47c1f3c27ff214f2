use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_std, nearest, sample_embedded};
use crate::asymptotic::cumulants_closed;
use crate::error::{Error, Result};
use crate::monte_carlo::thread_pool;
use crate::params::Params;
use crate::rng::worker_rng;
use crate::special::{erf_inv, erfc, erfc_inv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionMethod {
    Bound,
    Random,
    Lloyd,
}

impl DistortionMethod {
    pub const ALL: [DistortionMethod; 3] = [DistortionMethod::Bound, DistortionMethod::Random, DistortionMethod::Lloyd];

    pub fn name(&self) -> &'static str {
        match self {
            DistortionMethod::Bound => "bound",
            DistortionMethod::Random => "random",
            DistortionMethod::Lloyd => "lloyd",
        }
    }
}

impl std::fmt::Display for DistortionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DistortionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DistortionMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown distortion method `{s}`")))
    }
}

/// Average squared quantization error of codes of size `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    #[serde(rename = "N")]
    pub size: f64,
    pub bits: f64,
    pub distortion: f64,
    pub method: DistortionMethod,
    /// Independent codebooks averaged over (0 for the bound).
    pub trials: u64,
    /// Sources per codebook (0 for the bound).
    pub samples: u64,
    pub seed: Option<u64>,
    /// Standard error of `distortion` for simulated methods.
    pub stderr: Option<f64>,
}

/// `false` where the distortion formula is known not to bound the
/// distortion-rate function from below.
pub fn bound_valid(params: Params) -> bool {
    let c = params.canonicalize();
    !(c.n() == 2 && c.p() == 1)
}

/// Large-dimension approximation of the distortion-rate function, from
/// `N mu(B(sqrt z)) = 1` with the finite-size Gaussian model of `d_c^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionBound {
    params: Params,
    beta: f64,
    kappa2: f64,
}

impl DistortionBound {
    pub fn new(params: Params) -> Result<Self> {
        if !params.is_canonical() {
            return Err(Error::invalid(format!("{params} is not canonical")));
        }
        let beta = params.mean_distance_sq();
        let kappa2 = cumulants_closed(params)?.kappa2_f64();
        Ok(DistortionBound { params, beta, kappa2 })
    }

    /// Bound for `size` codewords; `size` may be fractional for sweeps.
    pub fn eval(&self, size: f64) -> Result<f64> {
        if !(size >= 1.0) || !size.is_finite() {
            return Err(Error::invalid(format!("codebook size must be >= 1, got {size}")));
        }
        let (beta, kappa2) = (self.beta, self.kappa2);
        let x = beta / (2.0 * kappa2).sqrt();
        let tail = erfc(x);
        let shift = 2.0 / size;
        // t = erf(x) - 2/N = 1 - (erfc(x) + 2/N)
        let gap = if tail + shift >= 2.0 {
            // erfinv(t) -> -inf: first exponential vanishes
            -(-x * x).exp()
        } else {
            let a = if tail + shift < 1.0 { erfc_inv(tail + shift) } else { erf_inv(1.0 - (tail + shift)) };
            // e^{-a^2} - e^{-x^2} without cancellation
            (-x * x).exp() * ((x - a) * (x + a)).exp_m1()
        };
        Ok((beta - size * (kappa2 / (2.0 * std::f64::consts::PI)).sqrt() * gap).max(0.0))
    }

    pub fn report(&self, size: f64) -> Result<DistortionReport> {
        Ok(DistortionReport {
            n: self.params.n(),
            p: self.params.p(),
            q: self.params.q(),
            size,
            bits: size.log2(),
            distortion: self.eval(size)?,
            method: DistortionMethod::Bound,
            trials: 0,
            samples: 0,
            seed: None,
            stderr: None,
        })
    }
}

/// [`DistortionBound`] at a single size.
pub fn distortion_lower_bound(params: Params, size: f64) -> Result<DistortionReport> {
    DistortionBound::new(params)?.report(size)
}

/// Mean distortion of Haar codebooks with `size` codewords of dimension `p`
/// against Haar sources of dimension `q`, single-threaded.
pub fn random_code_distortion(
    params: Params,
    size: usize,
    source_samples: u64,
    trials: u64,
    seed: u64,
) -> Result<DistortionReport> {
    random_code_distortion_threads(params, size, source_samples, trials, seed, 1)
}

/// [`random_code_distortion`] with trials spread over `threads` workers.
/// Trial `t` draws from stream `t` of `seed`, so the result does not depend
/// on the thread count.
pub fn random_code_distortion_threads(
    params: Params,
    size: usize,
    source_samples: u64,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<DistortionReport> {
    if size == 0 {
        return Err(Error::EmptyCodebook);
    }
    if source_samples < 2 || trials == 0 {
        return Err(Error::invalid("random codes need at least 2 sources and 1 trial"));
    }
    let (n, p, q) = (params.n(), params.p(), params.q());
    let m = p.min(q) as f64;
    let trial = |t: u64| -> (f64, f64) {
        let mut rng = worker_rng(seed, t);
        let code = sample_embedded(n, p, size, &mut rng);
        let sources = sample_embedded(n, q, source_samples as usize, &mut rng);
        let errors: Vec<f64> = sources.chunks_exact(n * n).map(|s| nearest(&code, n * n, m, s).1).collect();
        mean_std(&errors)
    };
    let results: Vec<(f64, f64)> = if threads <= 1 {
        (0..trials).map(trial).collect()
    } else {
        thread_pool(threads)?.install(|| (0..trials).into_par_iter().map(trial).collect())
    };
    let means: Vec<f64> = results.iter().map(|r| r.0).collect();
    let (distortion, spread) = mean_std(&means);
    let stderr = if trials > 1 {
        spread / (trials as f64).sqrt()
    } else {
        results[0].1 / (source_samples as f64).sqrt()
    };
    Ok(DistortionReport {
        n,
        p,
        q,
        size: size as f64,
        bits: (size as f64).log2(),
        distortion,
        method: DistortionMethod::Random,
        trials,
        samples: source_samples,
        seed: Some(seed),
        stderr: Some(stderr),
    })
}
