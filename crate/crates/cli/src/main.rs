//! `grassvol`: figure-ready CSV/JSON for ball volumes, packing bounds,
//! Hellinger sweeps and distortion-rate experiments.

mod args;
mod commands;
mod manifest;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, Outcome};
use manifest::{RunManifest, RunStatus};

const EXIT_ACCURACY: i32 = 3;

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Volume(_) => "volume",
        Command::Bounds(_) => "bounds",
        Command::Distortion(_) => "distortion",
        Command::Hellinger(_) => "hellinger",
        Command::Replay(_) => "replay",
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Volume(a) => commands::volume(a, &cli.common),
        Command::Bounds(a) => commands::bounds(a, &cli.common),
        Command::Distortion(a) => commands::distortion(a, &cli.common),
        Command::Hellinger(a) => commands::hellinger(a, &cli.common),
        Command::Replay(_) => Err(CliError::Invalid("a manifest cannot replay another replay".into())),
    }
}

/// Resolves `replay` into the recorded command line.
fn resolve(cli: Cli, argv: Vec<String>) -> Result<(Cli, Vec<String>), CliError> {
    let Command::Replay(replay) = &cli.command else {
        return Ok((cli, argv));
    };
    let text = fs::read_to_string(&replay.manifest)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", replay.manifest.display())))?;
    let recorded: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{} is not a run manifest: {e}", replay.manifest.display())))?;
    let full = std::iter::once(manifest::TOOL.to_string()).chain(recorded.argv.iter().cloned());
    let mut inner = Cli::try_parse_from(full).map_err(|e| CliError::Invalid(format!("recorded arguments: {e}")))?;
    if matches!(inner.command, Command::Replay(_)) {
        return Err(CliError::Invalid("a manifest cannot replay another replay".into()));
    }
    inner.common.out = cli.common.out.clone();
    Ok((inner, recorded.argv))
}

/// Runs one command line; returns the exit code.
fn run(raw: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let started = SystemTime::now();
    let clock = Instant::now();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    let argv: Vec<String> = raw.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let out_path = cli.common.out.clone();

    let (result, name, argv, parameters, json, threads) = match resolve(cli, argv.clone()) {
        Ok((cli, argv)) => {
            let parameters = serde_json::json!({ "command": &cli.command, "common": &cli.common });
            (dispatch(&cli), command_name(&cli.command), argv, parameters, cli.common.json, cli.common.threads)
        }
        Err(e) => (Err(e), "replay", argv, serde_json::Value::Null, false, 1),
    };

    let mut manifest = RunManifest::new(name, argv, started, clock.elapsed());
    manifest.parameters = parameters;
    manifest.format = if json { "json" } else { "csv" }.into();
    manifest.threads = threads;
    let code = match result {
        Ok(outcome) => {
            manifest.seeds = outcome.seeds;
            manifest.requested_tolerance = outcome.requested_tolerance;
            manifest.achieved_tolerance = outcome.achieved_tolerance;
            manifest.notes = outcome.notes;
            let written = match &out_path {
                Some(path) => fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    manifest.status = RunStatus::Failed;
                    manifest.notes.push(msg);
                    1
                }
                Ok(()) if outcome.accuracy_failed => {
                    let _ = writeln!(stderr, "error: requested accuracy not achieved");
                    manifest.status = RunStatus::AccuracyNotAchieved;
                    EXIT_ACCURACY
                }
                Ok(()) => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            manifest.status = if e.exit_code() == 2 { RunStatus::InvalidInput } else { RunStatus::Failed };
            manifest.notes.push(e.message().to_string());
            e.exit_code()
        }
    };
    manifest.exit_code = code;
    manifest.wall_clock_seconds = clock.elapsed().as_secs_f64();
    let text = serde_json::to_string_pretty(&manifest).expect("manifest is serializable") + "\n";
    match &out_path {
        Some(path) => {
            if let Err(e) = fs::write(manifest_path(path), text) {
                let _ = writeln!(stderr, "error: cannot write manifest: {e}");
            }
        }
        None => {
            let _ = stderr.write_all(text.as_bytes());
        }
    }
    code
}

fn main() -> ExitCode {
    let code = run(std::env::args_os().collect(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code.clamp(0, 255) as u8)
}

#[cfg(test)]
mod tests;
