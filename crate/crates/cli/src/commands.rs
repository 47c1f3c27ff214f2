use std::cell::Cell;
use std::fmt::Write as _;
use std::fs;

use grassvol::asymptotic::hellinger_sweep;
use grassvol::coding::{
    bound_valid, gv_bound_with, hamming_bound_with, lloyd_quantizer_with, random_code_distortion_threads,
    BoundKind, Codebook, DistortionBound, DistortionReport, LloydConfig, PackingBound,
};
use grassvol::curve::{fmt_sig12, linear_grid, CurveOptions, VolumeCurve, CSV_HEADER};
use grassvol::exact::{ExactVolume, QuadratureConfig};
use grassvol::volume::VolumeFn;
use grassvol::{Error, Params, VolumeMethod};
use serde::Serialize;

use crate::args::{
    BackendArg, BoundArg, BoundsArgs, Common, DistortionArgs, DistortionMethodArg, HellingerArgs, VolumeArgs,
    VolumeMethodArg,
};

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow(_) | Error::Internal(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// Rendered output plus what the manifest needs to know about it.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub seeds: Vec<u64>,
    pub requested_tolerance: Option<f64>,
    pub achieved_tolerance: Option<f64>,
    pub accuracy_failed: bool,
    pub notes: Vec<String>,
}

fn quadrature_config(tol: f64) -> Result<QuadratureConfig, CliError> {
    let cfg = QuadratureConfig { abs_tol: tol, rel_tol: tol, ..QuadratureConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is serializable");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_sig12).unwrap_or_default()
}

fn volume_method(arg: VolumeMethodArg) -> Vec<VolumeMethod> {
    match arg {
        VolumeMethodArg::Quadrature => vec![VolumeMethod::Quadrature],
        VolumeMethodArg::Closed => vec![VolumeMethod::Closed],
        VolumeMethodArg::Rmt => vec![VolumeMethod::Rmt],
        VolumeMethodArg::Finite => vec![VolumeMethod::Finite],
        VolumeMethodArg::Mc => vec![VolumeMethod::Mc],
        VolumeMethodArg::All => VolumeMethod::ALL.to_vec(),
    }
}

#[derive(Serialize)]
struct VolumeOutput<'a> {
    curves: &'a [VolumeCurve],
}

pub fn volume(args: &VolumeArgs, common: &Common) -> Result<Outcome, CliError> {
    let params = Params::new(args.triple.n, args.triple.p, args.triple.q)?;
    let grid = match (args.r, args.grid) {
        (Some(r), _) => vec![r],
        (None, Some(g)) => linear_grid(g.lo, g.hi, g.steps)?,
        (None, None) => return Err(CliError::Invalid("one of --r or --grid is required".into())),
    };
    for &r in &grid {
        params.radius_sq(r)?;
    }
    let methods = volume_method(args.method);
    let opts = CurveOptions {
        quadrature: quadrature_config(args.tol)?,
        samples: args.samples,
        seed: args.seed,
        threads: common.threads as usize,
    };
    let mut out = Outcome::default();
    let mut curves = Vec::new();
    for m in methods {
        match VolumeCurve::compute(params, &grid, m, &opts) {
            Ok(curve) => curves.push(curve),
            Err(e @ (Error::NotTabulated { .. } | Error::UnsupportedSize { .. })) if args.method == VolumeMethodArg::All => {
                out.notes.push(format!("skipped {m}: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    for curve in &curves {
        match curve.metadata.method {
            VolumeMethod::Quadrature => {
                out.requested_tolerance = Some(args.tol);
                let worst = curve.rows.iter().filter_map(|r| r.abs_err_est).fold(0.0, f64::max);
                out.achieved_tolerance = Some(worst);
                if let Some((mu, err)) = curve.worst_error() {
                    out.accuracy_failed = true;
                    out.notes.push(format!("quadrature error estimate {err:e} exceeds tolerance at mu = {mu}"));
                }
            }
            VolumeMethod::Mc => out.seeds.push(args.seed),
            _ => {}
        }
    }
    out.text = if common.json {
        to_json(&VolumeOutput { curves: &curves })
    } else {
        let mut text = format!("{CSV_HEADER}\n");
        for curve in &curves {
            curve.write_csv_rows(&mut text);
        }
        text
    };
    Ok(out)
}

#[derive(Serialize)]
struct BoundOutput {
    n: usize,
    p: usize,
    q: usize,
    method: VolumeMethod,
    #[serde(flatten)]
    bound: PackingBound,
    abs_err_est: Option<f64>,
}

pub fn bounds(args: &BoundsArgs, common: &Common) -> Result<Outcome, CliError> {
    let params = Params::new(args.triple.n, args.triple.p, args.triple.q)?;
    let cfg = quadrature_config(args.tol)?;
    let method = match args.method {
        BackendArg::Quadrature => VolumeMethod::Quadrature,
        BackendArg::Closed => VolumeMethod::Closed,
        BackendArg::Rmt => VolumeMethod::Rmt,
        BackendArg::Finite => VolumeMethod::Finite,
    };
    let mut out = Outcome::default();
    let err_est = Cell::new(None);
    let canonical = params.canonicalize();
    let volume_of = |r: f64| -> grassvol::Result<f64> {
        if method == VolumeMethod::Quadrature {
            let v = ExactVolume::new(canonical, cfg)?.volume_with_error(r)?;
            err_est.set(Some(v.abs_err));
            Ok(v.mu)
        } else {
            VolumeFn::new(canonical, method, cfg)?.eval(r)
        }
    };
    let bound = match args.bound {
        BoundArg::Gv => gv_bound_with(params, args.delta, volume_of)?,
        BoundArg::Hamming => hamming_bound_with(params, args.delta, volume_of)?,
    };
    if let Some(err) = err_est.get() {
        out.requested_tolerance = Some(args.tol);
        out.achieved_tolerance = Some(err);
        if err > cfg.abs_tol.max(cfg.rel_tol * bound.mu.abs()) {
            out.accuracy_failed = true;
            out.notes.push(format!("quadrature error estimate {err:e} exceeds tolerance"));
        }
    }
    if bound.value.is_infinite() {
        out.notes.push("ball volume is zero: bound is infinite".into());
    }
    let row = BoundOutput { n: params.n(), p: params.p(), q: params.q(), method, bound, abs_err_est: err_est.get() };
    out.text = if common.json {
        to_json(&row)
    } else {
        let kind = match bound.kind {
            BoundKind::Gv => "gv",
            BoundKind::Hamming => "hamming",
        };
        format!(
            "bound,method,delta,radius,mu,value,bits,abs_err_est\n{kind},{method},{},{},{},{},{},{}\n",
            fmt_sig12(bound.delta),
            fmt_sig12(bound.radius),
            fmt_sig12(bound.mu),
            fmt_sig12(bound.value),
            fmt_sig12(bound.bits),
            opt(row.abs_err_est)
        )
    };
    Ok(out)
}

#[derive(Serialize)]
struct DistortionRow {
    #[serde(flatten)]
    report: DistortionReport,
    bound_valid: bool,
}

#[derive(Serialize)]
struct DistortionOutput {
    n: usize,
    p: usize,
    rows: Vec<DistortionRow>,
}

pub fn distortion(args: &DistortionArgs, common: &Common) -> Result<Outcome, CliError> {
    let params = Params::new(args.n, args.p, args.p)?;
    let valid = bound_valid(params);
    let want = |m: DistortionMethodArg| args.method == m || args.method == DistortionMethodArg::All;
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    let mut codebooks: Vec<Codebook> = Vec::new();
    let sizes: Vec<usize> = (args.bits.lo..=args.bits.hi).map(|b| 1usize << b).collect();
    if want(DistortionMethodArg::Bound) {
        let bound = DistortionBound::new(params.canonicalize())?;
        for &size in &sizes {
            let mut report = bound.report(size as f64)?;
            (report.n, report.p, report.q) = (params.n(), params.p(), params.q());
            rows.push(DistortionRow { report, bound_valid: valid });
        }
    }
    if want(DistortionMethodArg::Random) {
        for &size in &sizes {
            let report = random_code_distortion_threads(
                params,
                size,
                args.samples,
                args.trials,
                args.seed,
                common.threads as usize,
            )?;
            rows.push(DistortionRow { report, bound_valid: valid });
        }
    }
    if want(DistortionMethodArg::Lloyd) {
        let samples = usize::try_from(args.samples).map_err(|_| CliError::Invalid("--samples too large".into()))?;
        for &size in &sizes {
            let cfg = LloydConfig {
                training_samples: samples,
                holdout_samples: samples,
                iterations: args.iters,
                seed: args.seed,
                threads: common.threads as usize,
            };
            let res = lloyd_quantizer_with(params, size, &cfg)?;
            rows.push(DistortionRow { report: res.report, bound_valid: valid });
            codebooks.push(res.codebook);
        }
    }
    if want(DistortionMethodArg::Random) || want(DistortionMethodArg::Lloyd) {
        out.seeds.push(args.seed);
    }
    if !valid {
        out.notes.push(format!("the distortion bound is not a lower bound for {params}"));
    }
    if let Some(path) = &args.codebooks {
        fs::write(path, to_json(&codebooks))
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))?;
    }
    out.text = if common.json {
        to_json(&DistortionOutput { n: params.n(), p: params.p(), rows })
    } else {
        let mut text = String::from("N,bits,distortion,method,stderr,bound_valid,trials,samples,seed\n");
        for row in &rows {
            let r = &row.report;
            let _ = writeln!(
                text,
                "{},{},{},{},{},{},{},{},{}",
                fmt_sig12(r.size),
                fmt_sig12(r.bits),
                fmt_sig12(r.distortion),
                r.method,
                opt(r.stderr),
                row.bound_valid,
                r.trials,
                r.samples,
                r.seed.map(|s| s.to_string()).unwrap_or_default()
            );
        }
        text
    };
    Ok(out)
}

#[derive(Serialize)]
struct HellingerOutput {
    rows: Vec<grassvol::asymptotic::HellingerRow>,
}

pub fn hellinger(args: &HellingerArgs, common: &Common) -> Result<Outcome, CliError> {
    let rows = hellinger_sweep(args.a, args.b, args.pmax)?;
    let mut out = Outcome::default();
    out.text = if common.json {
        to_json(&HellingerOutput { rows })
    } else {
        let mut text = String::from("p,a,b,h\n");
        for r in &rows {
            let _ = writeln!(text, "{},{},{},{}", r.p, r.a, r.b, fmt_sig12(r.h));
        }
        text
    };
    Ok(out)
}
