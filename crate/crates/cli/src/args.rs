use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "grassvol", version, about = "Volumes of metric balls in complex Grassmann manifolds")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to PATH and the run manifest to PATH.manifest.json.
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Worker threads for Monte Carlo and Lloyd; 1 is the bit-exact reference path.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Normalized ball volume on a radius grid.
    Volume(VolumeArgs),
    /// Gilbert-Varshamov or Hamming bound on code size.
    Bounds(BoundsArgs),
    /// Distortion-rate bound and simulated codebooks.
    Distortion(DistortionArgs),
    /// Hellinger distance between the two Gaussian models of the spectral statistic.
    Hellinger(HellingerArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethodArg {
    Quadrature,
    Closed,
    Rmt,
    Finite,
    Mc,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendArg {
    Quadrature,
    Closed,
    Rmt,
    Finite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundArg {
    Gv,
    Hamming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionMethodArg {
    Bound,
    Random,
    Lloyd,
    All,
}

/// `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected lo:hi:steps".into());
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let steps = parts[2].trim().parse::<usize>().map_err(|e| format!("`{}`: {e}", parts[2]))?;
    Ok(GridSpec { lo: num(parts[0])?, hi: num(parts[1])?, steps })
}

/// `lo:hi`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BitsRange {
    pub lo: u32,
    pub hi: u32,
}

pub fn parse_bits(s: &str) -> Result<BitsRange, String> {
    let (lo, hi) = s.split_once(':').unwrap_or((s, s));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let range = BitsRange { lo: num(lo)?, hi: num(hi)? };
    if range.hi < range.lo || range.hi > 24 {
        return Err("expected lo:hi with lo <= hi <= 24".into());
    }
    Ok(range)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Triple {
    /// Ambient dimension.
    #[arg(long)]
    pub n: usize,
    /// Dimension of the ball center.
    #[arg(long)]
    pub p: usize,
    /// Dimension of the subspaces in the ball.
    #[arg(long)]
    pub q: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VolumeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub triple: Triple,
    /// Single radius.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub r: Option<f64>,
    /// Radius grid lo:hi:steps.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    #[arg(long, value_enum, default_value_t = VolumeMethodArg::Quadrature)]
    pub method: VolumeMethodArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Absolute and relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub triple: Triple,
    /// Minimum distance.
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = BoundArg::Gv)]
    pub bound: BoundArg,
    /// Volume backend.
    #[arg(long, value_enum, default_value_t = BackendArg::Quadrature)]
    pub method: BackendArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistortionArgs {
    /// Ambient dimension.
    #[arg(long)]
    pub n: usize,
    /// Codeword and source dimension.
    #[arg(long)]
    pub p: usize,
    /// Codebook sizes 2^lo ..= 2^hi.
    #[arg(long, value_parser = parse_bits)]
    pub bits: BitsRange,
    #[arg(long, value_enum, default_value_t = DistortionMethodArg::All)]
    pub method: DistortionMethodArg,
    /// Source samples per codebook, also the Lloyd training and held-out set sizes.
    #[arg(long, default_value_t = 20_000)]
    pub samples: u64,
    /// Random codebooks per size.
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    /// Maximum Lloyd iterations.
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the trained Lloyd codebooks to PATH as a JSON array.
    #[arg(long, value_name = "PATH")]
    pub codebooks: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HellingerArgs {
    /// q - p.
    #[arg(long)]
    pub a: usize,
    /// n - p - q.
    #[arg(long)]
    pub b: usize,
    /// Largest p in the sweep 1..=pmax.
    #[arg(long)]
    pub pmax: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}
