use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub const TOOL: &str = "grassvol";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    AccuracyNotAchieved,
    InvalidInput,
    Failed,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, replayable verbatim.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub format: String,
    pub threads: u16,
    pub seeds: Vec<u64>,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub requested_tolerance: Option<f64>,
    pub achieved_tolerance: Option<f64>,
    pub status: RunStatus,
    pub exit_code: i32,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, started: SystemTime, elapsed: Duration) -> Self {
        RunManifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv,
            parameters: serde_json::Value::Null,
            format: "csv".into(),
            threads: 1,
            seeds: Vec::new(),
            started_unix_seconds: started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            wall_clock_seconds: elapsed.as_secs_f64(),
            requested_tolerance: None,
            achieved_tolerance: None,
            status: RunStatus::Ok,
            exit_code: 0,
            notes: Vec::new(),
        }
    }
}
