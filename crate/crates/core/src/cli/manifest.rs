//! Side-car description of a sweep run.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};

/// The only run-dependent part of a manifest. Kept as the last field so that
/// reproducibility checks can drop it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timestamp {
    /// Seconds since the Unix epoch at the start of the run.
    pub started_at_unix: f64,
    pub wall_clock_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The resolved configuration, after defaults and flag overrides.
    pub config: serde_json::Value,
    /// Recorded whenever Monte Carlo averaging was used.
    pub seed: Option<u64>,
    pub output: String,
    pub format: String,
    pub rows: usize,
    pub timestamp: Timestamp,
}

/// Wall-clock bookkeeping for a run.
#[derive(Clone, Copy, Debug)]
pub struct RunClock {
    started: SystemTime,
    instant: Instant,
}

impl RunClock {
    pub fn start() -> Self {
        RunClock {
            started: SystemTime::now(),
            instant: Instant::now(),
        }
    }

    pub fn stop(&self) -> Timestamp {
        Timestamp {
            started_at_unix: self
                .started
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs_f64())
                .unwrap_or(0.0),
            wall_clock_seconds: self.instant.elapsed().as_secs_f64(),
        }
    }
}

/// `<out>.manifest.json`, next to the output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

impl RunManifest {
    pub fn to_json(&self) -> Result<String> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        text.push('\n');
        Ok(text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
