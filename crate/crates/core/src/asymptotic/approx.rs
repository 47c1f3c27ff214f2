//! Gaussian surrogates for `Y` and the erf volume formulas built on them.

use serde::{Deserialize, Serialize};

use super::cumulants::cumulants_closed;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::special::erf_diff;

const TWO_SQRT_2: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateKind {
    /// Large-dimension limit: mean `(n-2q)/4`, variance `1/16`.
    Rmt,
    /// Exact first two cumulants: mean `kappa1`, variance `kappa2`.
    Finite,
}

/// A normal law standing in for the distribution of `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSurrogate {
    pub mean: f64,
    pub variance: f64,
    pub kind: SurrogateKind,
}

impl GaussianSurrogate {
    pub fn rmt(params: Params) -> Self {
        let c = params.canonicalize();
        GaussianSurrogate {
            mean: (c.n() as f64 - 2.0 * c.q() as f64) / 4.0,
            variance: 1.0 / 16.0,
            kind: SurrogateKind::Rmt,
        }
    }

    pub fn finite(params: Params) -> Self {
        let c = cumulants_closed(params.canonicalize()).expect("canonical triple");
        GaussianSurrogate { mean: c.kappa1_f64(), variance: c.kappa2_f64(), kind: SurrogateKind::Finite }
    }

    pub fn of_kind(params: Params, kind: SurrogateKind) -> Self {
        match kind {
            SurrogateKind::Rmt => Self::rmt(params),
            SurrogateKind::Finite => Self::finite(params),
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// `1/2 erf(2 sqrt2 alpha) - 1/2 erf(2 sqrt2 (alpha - r^2))`, `alpha = (n + 2p - 2q)/4`.
///
/// Non-canonical triples are first reduced to their canonical form.
pub fn volume_rmt(params: Params, r: f64) -> Result<f64> {
    let c = params.canonicalize();
    let s = c.radius_sq(r)?;
    let alpha = (c.n() as f64 + 2.0 * c.p() as f64 - 2.0 * c.q() as f64) / 4.0;
    Ok(0.5 * erf_diff(TWO_SQRT_2 * alpha, TWO_SQRT_2 * (alpha - s)))
}

/// `1/2 erf(beta / sqrt(2 kappa2)) - 1/2 erf((beta - r^2) / sqrt(2 kappa2))`,
/// `beta = p(n-q)/n`.
///
/// Non-canonical triples are first reduced to their canonical form.
pub fn volume_finite(params: Params, r: f64) -> Result<f64> {
    let c = params.canonicalize();
    let s = c.radius_sq(r)?;
    let beta = c.mean_distance_sq();
    let scale = (2.0 * cumulants_closed(c)?.kappa2_f64()).sqrt();
    Ok(0.5 * erf_diff(beta / scale, (beta - s) / scale))
}

/// Hellinger distance `sqrt(1 - BC)` between two normal laws, with
/// `BC = sqrt(2 s1 s2 / (s1^2 + s2^2)) exp(-(m1 - m2)^2 / (4 (s1^2 + s2^2)))`.
pub fn hellinger_gaussians(a: &GaussianSurrogate, b: &GaussianSurrogate) -> Result<f64> {
    if !(a.variance > 0.0) || !(b.variance > 0.0) {
        return Err(Error::invalid(format!(
            "variances must be positive, got {} and {}",
            a.variance, b.variance
        )));
    }
    let (s1, s2) = (a.std_dev(), b.std_dev());
    let total = a.variance + b.variance;
    let d = a.mean - b.mean;
    let bc = (2.0 * s1 * s2 / total).sqrt() * (-0.25 * d * d / total).exp();
    Ok((1.0 - bc).max(0.0).sqrt())
}

/// One row of a Hellinger sweep at fixed `(a, b) = (q - p, n - p - q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HellingerRow {
    pub p: usize,
    pub a: usize,
    pub b: usize,
    pub h: f64,
}

/// Hellinger distance between the two surrogates of `(2p + a + b, p, p + a)`
/// for `p = 1..=p_max`.
pub fn hellinger_sweep(a: usize, b: usize, p_max: usize) -> Result<Vec<HellingerRow>> {
    if p_max == 0 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    (1..=p_max)
        .map(|p| {
            let params = Params::new(2 * p + a + b, p, p + a)?;
            let h = hellinger_gaussians(&GaussianSurrogate::rmt(params), &GaussianSurrogate::finite(params))?;
            Ok(HellingerRow { p, a, b, h })
        })
        .collect()
}
