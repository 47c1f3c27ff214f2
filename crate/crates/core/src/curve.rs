//! Sampled volume curves and their CSV / JSON forms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::QuadratureConfig;
use crate::monte_carlo::estimate_volume_parallel;
use crate::params::Params;
use crate::volume::{VolumeFn, VolumeMethod};

/// CSV header shared by every method.
pub const CSV_HEADER: &str = "r,r_sq,mu,method,abs_err_est,stderr";

/// Formats `x` rounded to 12 significant digits, in the shortest form that
/// parses back to the rounded value.
pub fn fmt_sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r: f64,
    pub r_sq: f64,
    pub mu: f64,
    /// Error estimate of deterministic methods, where one exists.
    pub abs_err_est: Option<f64>,
    /// Binomial standard error of Monte Carlo estimates.
    pub stderr: Option<f64>,
}

/// Settings that produced a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub quadrature: Option<QuadratureConfig>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub method: VolumeMethod,
    pub config: CurveConfig,
}

/// `r -> mu(B(r))` on a grid, tagged with the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeCurve {
    pub metadata: CurveMetadata,
    pub rows: Vec<CurvePoint>,
}

/// Options for [`VolumeCurve::compute`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    pub quadrature: QuadratureConfig,
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { quadrature: QuadratureConfig::default(), samples: 100_000, seed: 0, threads: 1 }
    }
}

/// `steps` equally spaced radii from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::invalid(format!("bad grid {lo}:{hi}:{steps}")));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect())
}

impl VolumeCurve {
    /// Evaluates `method` at every radius of `grid`.
    ///
    /// Returns the curve even when some quadrature points miss their
    /// tolerance; those are reported through [`VolumeCurve::worst_error`].
    pub fn compute(params: Params, grid: &[f64], method: VolumeMethod, opts: &CurveOptions) -> Result<Self> {
        let canonical = params.canonicalize();
        let squares: Vec<f64> = grid.iter().map(|&r| params.radius_sq(r)).collect::<Result<_>>()?;
        let mut config = CurveConfig { quadrature: None, samples: None, seed: None, threads: None };
        let rows = match method {
            VolumeMethod::Mc => {
                config.samples = Some(opts.samples);
                config.seed = Some(opts.seed);
                config.threads = Some(opts.threads);
                estimate_volume_parallel(canonical, grid, opts.samples, opts.seed, opts.threads)?
                    .into_iter()
                    .zip(&squares)
                    .map(|(e, &s)| CurvePoint { r: e.r, r_sq: s, mu: e.mu_hat, abs_err_est: None, stderr: Some(e.stderr) })
                    .collect()
            }
            VolumeMethod::Quadrature => {
                config.quadrature = Some(opts.quadrature);
                let VolumeFn::Quadrature(ev) = VolumeFn::new(canonical, method, opts.quadrature)? else {
                    unreachable!()
                };
                grid.iter()
                    .zip(&squares)
                    .map(|(&r, &s)| {
                        let v = ev.volume_with_error(r)?;
                        Ok(CurvePoint { r, r_sq: s, mu: v.mu, abs_err_est: Some(v.abs_err), stderr: None })
                    })
                    .collect::<Result<_>>()?
            }
            _ => {
                let f = VolumeFn::new(canonical, method, opts.quadrature)?;
                let exact = matches!(method, VolumeMethod::Closed);
                grid.iter()
                    .zip(&squares)
                    .map(|(&r, &s)| {
                        let mu = f.eval(r)?;
                        Ok(CurvePoint { r, r_sq: s, mu, abs_err_est: exact.then_some(0.0), stderr: None })
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(VolumeCurve {
            metadata: CurveMetadata { n: params.n(), p: params.p(), q: params.q(), method, config },
            rows,
        })
    }

    /// Largest quadrature error estimate exceeding the configured tolerance.
    pub fn worst_error(&self) -> Option<(f64, f64)> {
        let cfg = self.metadata.config.quadrature?;
        self.rows
            .iter()
            .filter_map(|row| {
                let err = row.abs_err_est?;
                let tol = cfg.abs_tol.max(cfg.rel_tol * row.mu.abs());
                (err > tol).then_some((row.mu, err))
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Rows without header, one per grid point.
    pub fn write_csv_rows(&self, out: &mut String) {
        let opt = |v: Option<f64>| v.map(fmt_sig12).unwrap_or_default();
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_sig12(row.r),
                fmt_sig12(row.r_sq),
                fmt_sig12(row.mu),
                self.metadata.method,
                opt(row.abs_err_est),
                opt(row.stderr)
            );
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        self.write_csv_rows(&mut out);
        out
    }

    /// Parses the output of [`VolumeCurve::to_csv`] back into rows.
    pub fn rows_from_csv(text: &str) -> Result<Vec<(VolumeMethod, CurvePoint)>> {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::invalid("missing volume CSV header"));
        }
        let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::invalid(format!("bad number `{s}`"))) };
        let opt = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
        lines
            .filter(|l| !l.is_empty())
            .map(|line| {
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != 6 {
                    return Err(Error::invalid(format!("expected 6 fields in `{line}`")));
                }
                Ok((
                    f[3].parse()?,
                    CurvePoint { r: num(f[0])?, r_sq: num(f[1])?, mu: num(f[2])?, abs_err_est: opt(f[4])?, stderr: opt(f[5])? },
                ))
            })
            .collect()
    }
}
