use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::QuadratureConfig;
use crate::params::Params;
use crate::volume::{VolumeFn, VolumeMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Lower bound on the size of the best code with minimum distance `delta`.
    Gv,
    /// Upper bound on the size of any code with minimum distance `delta`.
    Hamming,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Gv => "gv",
            BoundKind::Hamming => "hamming",
        }
    }

    /// Ball radius used by the bound.
    pub fn radius(&self, delta: f64) -> f64 {
        match self {
            BoundKind::Gv => delta,
            BoundKind::Hamming => 0.5 * delta,
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gv" => Ok(BoundKind::Gv),
            "hamming" => Ok(BoundKind::Hamming),
            _ => Err(Error::invalid(format!("unknown bound `{s}`"))),
        }
    }
}

/// A packing bound together with the ball volume it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingBound {
    pub kind: BoundKind,
    pub delta: f64,
    pub radius: f64,
    pub mu: f64,
    /// `1 / mu`; infinite when the ball is null.
    pub value: f64,
    pub bits: f64,
}

fn bound_with<F>(params: Params, delta: f64, kind: BoundKind, volume: F) -> Result<PackingBound>
where
    F: FnOnce(f64) -> Result<f64>,
{
    if params.p() != params.q() {
        return Err(Error::invalid(format!("packing bounds need p = q, got {params}")));
    }
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("minimum distance must be nonnegative, got {delta}")));
    }
    let radius = kind.radius(delta);
    params.radius_sq(radius)?;
    let mu = volume(radius)?;
    let value = if mu > 0.0 { (1.0 / mu).max(1.0) } else { f64::INFINITY };
    Ok(PackingBound { kind, delta, radius, mu, value, bits: value.log2() })
}

/// `1 / mu(B(delta))` with a caller-supplied volume function of `r`.
pub fn gv_bound_with<F: FnOnce(f64) -> Result<f64>>(params: Params, delta: f64, volume: F) -> Result<PackingBound> {
    bound_with(params, delta, BoundKind::Gv, volume)
}

/// `1 / mu(B(delta / 2))` with a caller-supplied volume function of `r`.
pub fn hamming_bound_with<F: FnOnce(f64) -> Result<f64>>(
    params: Params,
    delta: f64,
    volume: F,
) -> Result<PackingBound> {
    bound_with(params, delta, BoundKind::Hamming, volume)
}

/// Gilbert-Varshamov bound using a deterministic volume method.
pub fn gv_bound(params: Params, delta: f64, method: VolumeMethod, cfg: QuadratureConfig) -> Result<PackingBound> {
    let f = VolumeFn::new(params.canonicalize(), method, cfg)?;
    gv_bound_with(params, delta, |r| f.eval(r))
}

/// Hamming bound using a deterministic volume method.
pub fn hamming_bound(params: Params, delta: f64, method: VolumeMethod, cfg: QuadratureConfig) -> Result<PackingBound> {
    let f = VolumeFn::new(params.canonicalize(), method, cfg)?;
    hamming_bound_with(params, delta, |r| f.eval(r))
}
