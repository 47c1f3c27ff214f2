//! `mu(B(r)) = (1/pi) int_0^inf Im[(e^(i r^2 nu) - 1) D_p(nu)] / nu dnu`.
//!
//! The integrand oscillates with frequencies up to `p` and decays only
//! algebraically, so the range is split at a cutoff `L`:
//!
//! * `[0, L]`: Gauss-Legendre panels of width `2 pi / p`, with the
//!   half-order rule on the same panels as error estimate.
//! * `[L, inf)`: `D_p` is split into its pure frequencies
//!   `e^(-i j nu) Q_j(nu)`; each piece is integrated along a ray rotated
//!   into the half plane where its exponential decays.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::determinant::DeterminantDp;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::special::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Ceiling on the integration cutoff.
    pub nu_max_cap: f64,
    /// Gauss-Legendre nodes per panel.
    pub panel_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-8, rel_tol: 1e-8, nu_max_cap: 1e6, panel_order: 32 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.panel_order < 4 {
            return Err(Error::invalid("panel_order must be at least 4"));
        }
        if !(self.nu_max_cap > 0.0) {
            return Err(Error::invalid("nu_max_cap must be positive"));
        }
        Ok(())
    }
}

/// A volume value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeValue {
    pub mu: f64,
    pub abs_err: f64,
}

/// Reusable quadrature state for one triple: `D_p` is sampled once on the
/// panel nodes and shared by every radius.
#[derive(Debug, Clone)]
pub struct ExactVolume {
    params: Params,
    cfg: QuadratureConfig,
    dp: DeterminantDp,
    cutoff: f64,
    /// `(nu, weight, D_p(nu))` for the full- and half-order rules.
    body: Vec<(f64, f64, Complex64)>,
    body_low: Vec<(f64, f64, Complex64)>,
    /// `sum_j T(-j, j)` for both orders, independent of the radius.
    tail_const: (Complex64, Complex64),
}

impl ExactVolume {
    /// Non-canonical triples are first reduced to their canonical form.
    pub fn new(params: Params, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let params = params.canonicalize();
        let dp = DeterminantDp::new(params)?;
        let p = params.p() as f64;
        let width = 2.0 * PI / p;
        let radius = dp.expansion_radius();
        if radius > cfg.nu_max_cap {
            return Err(Error::Accuracy { estimate: f64::NAN, achieved: f64::INFINITY });
        }
        let panels = (radius / width).ceil() as usize;
        let cutoff = panels as f64 * width;
        let sample = |order: usize| -> Vec<(f64, f64, Complex64)> {
            let rule = GaussLegendre::of_order(order);
            let mut out = Vec::with_capacity(panels * order);
            for k in 0..panels {
                let lo = k as f64 * width;
                for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                    let nu = lo + 0.5 * width * (x + 1.0);
                    out.push((nu, 0.5 * width * w, dp.eval(nu)));
                }
            }
            out
        };
        let body = sample(cfg.panel_order);
        let body_low = sample(cfg.panel_order / 2);
        let mut ev = ExactVolume {
            params,
            cfg,
            dp,
            cutoff,
            body,
            body_low,
            tail_const: (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        };
        let mut hi = Complex64::new(0.0, 0.0);
        let mut lo = Complex64::new(0.0, 0.0);
        for j in 0..=params.p() {
            hi += ev.tail_piece(-(j as f64), j, cfg.panel_order);
            lo += ev.tail_piece(-(j as f64), j, cfg.panel_order / 2);
        }
        ev.tail_const = (hi, lo);
        Ok(ev)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Split point between the panel sum and the rotated tail.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// `mu(B(r))` clipped to `[0, 1]`, or [`Error::Accuracy`] when the
    /// error estimate exceeds the configured tolerance.
    pub fn volume(&self, r: f64) -> Result<f64> {
        let v = self.volume_with_error(r)?;
        let tol = self.cfg.abs_tol.max(self.cfg.rel_tol * v.mu.abs());
        if v.abs_err > tol {
            return Err(Error::Accuracy { estimate: v.mu, achieved: v.abs_err });
        }
        Ok(v.mu)
    }

    /// Clipped value and error estimate, without the tolerance check.
    pub fn volume_with_error(&self, r: f64) -> Result<VolumeValue> {
        let s = self.params.radius_sq(r)?;
        Ok(self.volume_sq(s))
    }

    pub(crate) fn volume_sq(&self, s: f64) -> VolumeValue {
        if s == 0.0 {
            return VolumeValue { mu: 0.0, abs_err: 0.0 };
        }
        let body = |nodes: &[(f64, f64, Complex64)]| -> (f64, f64) {
            let mut acc = 0.0;
            let mut mass = 0.0;
            for &(nu, w, d) in nodes {
                let v = w * integrand(s, nu, d);
                acc += v;
                mass += v.abs();
            }
            (acc, mass)
        };
        let (hi, mass) = body(&self.body);
        let (lo, _) = body(&self.body_low);
        let mut tail_hi = -self.tail_const.0;
        let mut tail_lo = -self.tail_const.1;
        for j in 0..=self.params.p() {
            let omega = s - j as f64;
            tail_hi += self.tail_piece(omega, j, self.cfg.panel_order);
            tail_lo += self.tail_piece(omega, j, self.cfg.panel_order / 2);
        }
        let total = (hi + tail_hi.im) / PI;
        let total_lo = (lo + tail_lo.im) / PI;
        let abs_err = (total - total_lo).abs() + 64.0 * f64::EPSILON * mass / PI;
        VolumeValue { mu: total.clamp(0.0, 1.0), abs_err }
    }

    /// `T(omega, j) = int_L^inf e^(i omega nu) Q_j(nu) / nu dnu`.
    fn tail_piece(&self, omega: f64, j: usize, order: usize) -> Complex64 {
        let l = self.cutoff;
        let c = omega.abs() * l;
        // nu = L (1 + i dir x), x in [0, inf), mapped from u in [0, 1)
        let dir = if omega >= 0.0 { 1.0 } else { -1.0 };
        let rule = GaussLegendre::of_order(order);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut lo = 0.0;
        let mut hi = (0.25 / (1.0 + c)).min(1.0);
        loop {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let u = mid + half * x;
                let t = u / (1.0 - u);
                let decay = (-c * t).exp();
                if decay == 0.0 {
                    continue;
                }
                let nu = Complex64::new(l, dir * l * t);
                let q = self.dp.frequency_parts(nu)[j];
                acc += half * w * decay * q / nu / ((1.0 - u) * (1.0 - u));
            }
            if hi >= 1.0 || (-c * lo / (1.0 - lo)).exp() == 0.0 {
                break;
            }
            lo = hi;
            hi = (2.0 * hi).min(1.0);
        }
        Complex64::new(0.0, dir * l) * Complex64::new(0.0, omega * l).exp() * acc
    }
}

/// `Im[(e^(i s nu) - 1) D] / nu`, with the limit `s Re D(0) = s` at `nu = 0`.
fn integrand(s: f64, nu: f64, d: Complex64) -> f64 {
    if nu == 0.0 {
        return s * d.re;
    }
    let half = 0.5 * s * nu;
    let versine = 2.0 * half.sin() * half.sin();
    ((s * nu).sin() * d.re - versine * d.im) / nu
}

/// `mu(B(r))` by the one-dimensional integral.
pub fn volume_quadrature(params: Params, r: f64, cfg: QuadratureConfig) -> Result<f64> {
    params.radius_sq(r)?;
    ExactVolume::new(params, cfg)?.volume(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(n: usize, p: usize, q: usize) -> ExactVolume {
        ExactVolume::new(Params::new(n, p, q).unwrap(), QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn grassmannian_4_2_2_values() {
        let e = ev(4, 2, 2);
        assert!((e.volume(1.0).unwrap() - 0.5).abs() < 1e-9);
        assert!((e.volume(2f64.sqrt()).unwrap() - 1.0).abs() < 1e-9);
        assert!((e.volume(1.5f64.sqrt()).unwrap() - 0.96875).abs() < 1e-9);
        assert!((e.volume(0.5).unwrap() - 1.0 / 512.0).abs() < 1e-9);
        assert_eq!(e.volume(0.0).unwrap(), 0.0);
    }

    #[test]
    fn unequal_dimensions() {
        let e = ev(5, 2, 3);
        assert!((e.volume(1.0).unwrap() - 0.8).abs() < 1e-9);
        // exact rational value at r^2 = 1/4 is 0.009423828125
        assert!((e.volume(0.5).unwrap() - 0.009_423_828_125).abs() < 1e-9);
    }

    #[test]
    fn small_ball_in_g_8_4() {
        let v = ev(8, 4, 4).volume_with_error(1.0).unwrap();
        assert!((v.mu - 4.162_504_162_504_16e-5).abs() < 1e-10, "{v:?}");
    }

    #[test]
    fn error_estimate_is_small() {
        let e = ev(6, 3, 3);
        for k in 0..=10 {
            let r = 3f64.sqrt() * k as f64 / 10.0;
            assert!(e.volume_with_error(r).unwrap().abs_err < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = Params::new(4, 2, 2).unwrap();
        assert!(matches!(
            volume_quadrature(x, 1.5, QuadratureConfig::default()),
            Err(Error::RadiusOutOfRange { .. })
        ));
        let cfg = QuadratureConfig { panel_order: 2, ..Default::default() };
        assert!(volume_quadrature(x, 1.0, cfg).is_err());
    }

    #[test]
    fn tight_tolerance_reports_accuracy_error() {
        let x = Params::new(5, 2, 3).unwrap();
        let cfg = QuadratureConfig { abs_tol: 1e-30, rel_tol: 1e-30, ..Default::default() };
        match volume_quadrature(x, 1.2, cfg) {
            Err(Error::Accuracy { estimate, achieved }) => {
                assert!(estimate > 0.9 && achieved > 0.0);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }
}
