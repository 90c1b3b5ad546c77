//! JSON configuration documents for the `holo` subcommands.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::gate::{AxisLabel, TargetRotation, DEFAULT_RWA_THRESHOLD};
use crate::noise::{ErrorKind, IntegratorConfig, SphereQuadrature};
use crate::quantum::C64;

/// Upper bound on sweep points per gate.
pub const MAX_SWEEP_POINTS: usize = 100_000;
/// Upper bound on gates per sweep.
pub const MAX_GATES: usize = 1_000;

/// Rotation axis as a label, bright-state angles, or a Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Label(#[serde(deserialize_with = "axis_label")] AxisLabel),
    Angles { alpha: f64, beta: f64 },
    Vector([f64; 3]),
}

fn axis_label<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<AxisLabel, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

/// A target gate: rotation by `angle` about `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    pub axis: AxisSpec,
    pub angle: f64,
}

impl GateSpec {
    pub fn target(&self) -> Result<TargetRotation> {
        if !(self.angle.is_finite() && (0.0..=TAU).contains(&self.angle)) {
            return Err(Error::Config(format!(
                "rotation angle {} outside [0, 2pi]",
                self.angle
            )));
        }
        match self.axis {
            AxisSpec::Label(label) => TargetRotation::from_label(label, self.angle),
            AxisSpec::Angles { alpha, beta } => {
                if !(alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::Config("axis angles must be finite".into()));
                }
                TargetRotation::from_axis_angles(alpha, beta, self.angle)
            }
            AxisSpec::Vector(n) => {
                if n.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config("axis vector must be finite".into()));
                }
                TargetRotation::new(n, self.angle)
            }
        }
        .map_err(|e| Error::Config(e.to_string()))
    }
}

/// Level splittings and dipole elements used to turn gate parameters into
/// laser settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserConfig {
    #[serde(default = "default_splittings")]
    pub omega_e: [f64; 2],
    /// Complex dipole elements as `[re, im]` pairs.
    #[serde(default = "default_dipoles")]
    pub dipole: [C64; 2],
}

fn default_splittings() -> [f64; 2] {
    [1e4, 1e4]
}

fn default_dipoles() -> [C64; 2] {
    [C64::new(1.0, 0.0); 2]
}

impl Default for LaserConfig {
    fn default() -> Self {
        LaserConfig {
            omega_e: default_splittings(),
            dipole: default_dipoles(),
        }
    }
}

fn default_omega() -> f64 {
    1.0
}

fn default_rwa_threshold() -> f64 {
    DEFAULT_RWA_THRESHOLD
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub target: GateSpec,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default)]
    pub lasers: LaserConfig,
    #[serde(default = "default_rwa_threshold")]
    pub rwa_threshold: f64,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        self.target.target()?;
        check_omega(self.omega)?;
        if !(self.rwa_threshold.is_finite() && self.rwa_threshold > 0.0) {
            return Err(Error::Config(format!(
                "rwa_threshold must be > 0, got {}",
                self.rwa_threshold
            )));
        }
        Ok(())
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("omega must be > 0, got {omega}")))
    }
}

/// Linearly spaced error products (εT, ξT or κT).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl ProductRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("range bounds must be finite".into()));
        }
        if self.start > self.stop {
            return Err(Error::Config(format!(
                "range start {} exceeds stop {}",
                self.start, self.stop
            )));
        }
        if !(2..=MAX_SWEEP_POINTS).contains(&self.count) {
            return Err(Error::Config(format!(
                "range count must be in 2..={MAX_SWEEP_POINTS}, got {}",
                self.count
            )));
        }
        Ok(())
    }

    /// The sample points; the last equals `stop` exactly.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        let span = self.stop - self.start;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + span * (i as f64 / n as f64)
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub error: ErrorKind,
    pub range: ProductRange,
    pub gates: Vec<GateSpec>,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub quadrature: SphereQuadrature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.gates.is_empty() {
            return Err(Error::Config("no gates specified".into()));
        }
        if self.gates.len() > MAX_GATES {
            return Err(Error::Config(format!(
                "at most {MAX_GATES} gates per sweep, got {}",
                self.gates.len()
            )));
        }
        for g in &self.gates {
            g.target()?;
        }
        self.range.validate()?;
        if self.error == ErrorKind::Dephasing && self.range.start < 0.0 {
            return Err(Error::Config(format!(
                "dephasing strength must be >= 0, got {}",
                self.range.start
            )));
        }
        check_omega(self.omega)?;
        self.integrator
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.quadrature
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid {what}: {e}")))
}

/// Parses and validates a synthesis configuration.
pub fn parse_synth_config(text: &str) -> Result<SynthConfig> {
    let cfg: SynthConfig = parse(text, "synth config")?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses and validates a sweep specification.
pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec> {
    let spec: SweepSpec = parse(text, "sweep spec")?;
    spec.validate()?;
    Ok(spec)
}

/// Inline JSON if `arg` starts with `{`, otherwise the contents of the file
/// at that path.
pub fn load_config_text(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_owned());
    }
    std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Error::Config(format!("cannot read config {arg}: {e}")))
}
