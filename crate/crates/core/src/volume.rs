//! Uniform access to the volume evaluators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::asymptotic::{volume_finite, volume_rmt};
use crate::error::{Error, Result};
use crate::exact::{volume_closed_form, ExactVolume, QuadratureConfig};
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    Closed,
    Quadrature,
    Finite,
    Rmt,
    Mc,
}

impl VolumeMethod {
    /// Evaluation order used when every method is requested.
    pub const ALL: [VolumeMethod; 5] = [
        VolumeMethod::Closed,
        VolumeMethod::Quadrature,
        VolumeMethod::Finite,
        VolumeMethod::Rmt,
        VolumeMethod::Mc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            VolumeMethod::Closed => "closed",
            VolumeMethod::Quadrature => "quadrature",
            VolumeMethod::Finite => "finite",
            VolumeMethod::Rmt => "rmt",
            VolumeMethod::Mc => "mc",
        }
    }

    pub fn is_deterministic(&self) -> bool {
        !matches!(self, VolumeMethod::Mc)
    }
}

impl fmt::Display for VolumeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VolumeMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        VolumeMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown volume method `{s}`")))
    }
}

/// A deterministic volume evaluator for one triple.
#[derive(Debug, Clone)]
pub enum VolumeFn {
    Closed(crate::exact::ClosedFormVolume),
    Quadrature(Box<ExactVolume>),
    Finite(Params),
    Rmt(Params),
}

impl VolumeFn {
    /// Prepares `method` for `params`; [`VolumeMethod::Mc`] is rejected.
    pub fn new(params: Params, method: VolumeMethod, cfg: QuadratureConfig) -> Result<Self> {
        Ok(match method {
            VolumeMethod::Closed => VolumeFn::Closed(crate::exact::ClosedFormVolume::lookup(params)?),
            VolumeMethod::Quadrature => VolumeFn::Quadrature(Box::new(ExactVolume::new(params, cfg)?)),
            VolumeMethod::Finite => VolumeFn::Finite(params),
            VolumeMethod::Rmt => VolumeFn::Rmt(params),
            VolumeMethod::Mc => {
                return Err(Error::invalid("Monte Carlo is not a deterministic volume function"))
            }
        })
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        match self {
            VolumeFn::Closed(t) => t.eval(r),
            VolumeFn::Quadrature(e) => e.volume(r),
            VolumeFn::Finite(p) => volume_finite(*p, r),
            VolumeFn::Rmt(p) => volume_rmt(*p, r),
        }
    }
}

/// `mu(B(r))` by a deterministic method.
pub fn volume(params: Params, r: f64, method: VolumeMethod, cfg: QuadratureConfig) -> Result<f64> {
    match method {
        VolumeMethod::Closed => volume_closed_form(params, r),
        _ => VolumeFn::new(params, method, cfg)?.eval(r),
    }
}
