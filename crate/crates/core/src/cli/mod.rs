//! Library side of the `holo` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 RWA warning from `synth`.

pub mod config;
pub mod manifest;
pub mod sweep;
pub mod synth;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{
    load_config_text, parse_sweep_spec, parse_synth_config, AxisSpec, GateSpec, LaserConfig,
    OutputFormat, ProductRange, SweepSpec, SynthConfig,
};
pub use manifest::{manifest_path, RunClock, RunManifest, Timestamp};
pub use sweep::{fig2_spec, run_sweep, write_csv, write_json, SweepRow, CSV_HEADER};
pub use synth::{run_synth, SynthOutput};
pub use verify::{render_table, run_verify, CheckResult, VerifyOptions};

use crate::error::{Error, Result};
use crate::noise::SphereQuadrature;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RWA: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "holo",
    version,
    about = "Single-shot holonomic gates on a three-level system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration: a file path or an inline document starting with '{'.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for Monte Carlo averaging and randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gate parameters and laser settings for a target rotation.
    Synth,
    /// Run the invariant battery.
    Verify {
        /// Inject a bright-state energy shift of this many Ω.
        #[arg(long)]
        perturb_hamiltonian: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Error sweep described by --config.
    Sweep,
    /// Dephasing sweep preset for X, Y, Z rotations by π/6 and π/3.
    Fig2,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Verify { .. } => "verify",
            Command::Sweep => "sweep",
            Command::Fig2 => "fig2",
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run<W: Write, E: Write>(cli: &Cli, stdout: &mut W, stderr: &mut E) -> i32 {
    let result = match &cli.command {
        Command::Synth => cmd_synth(cli, stdout),
        Command::Verify {
            perturb_hamiltonian,
            samples,
        } => cmd_verify(cli, *perturb_hamiltonian, *samples, stdout),
        Command::Sweep => cmd_sweep(cli, stdout),
        Command::Fig2 => cmd_fig2(cli, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "holo {}: {e}", cli.command.name());
            EXIT_USAGE
        }
    }
}

fn required_config(cli: &Cli) -> Result<String> {
    let arg = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    load_config_text(arg)
}

fn emit<W: Write>(text: &str, out: Option<&Path>, stdout: &mut W) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn cmd_synth<W: Write>(cli: &Cli, stdout: &mut W) -> Result<i32> {
    let cfg = parse_synth_config(&required_config(cli)?)?;
    let out = run_synth(&cfg)?;
    let mut text =
        serde_json::to_string_pretty(&out).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    text.push('\n');
    emit(&text, cli.out.as_deref(), stdout)?;
    Ok(if out.rwa.pass { EXIT_OK } else { EXIT_RWA })
}

fn cmd_verify<W: Write>(
    cli: &Cli,
    perturb_hamiltonian: Option<f64>,
    samples: usize,
    stdout: &mut W,
) -> Result<i32> {
    if cli.config.is_some() {
        return Err(Error::Config("verify takes no --config".into()));
    }
    if let Some(d) = perturb_hamiltonian {
        if !d.is_finite() {
            return Err(Error::Config(format!("perturbation {d} is not finite")));
        }
    }
    if !(1..=100_000).contains(&samples) {
        return Err(Error::Config(format!(
            "samples must be in 1..=100000, got {samples}"
        )));
    }
    let opts = VerifyOptions {
        seed: cli.seed.unwrap_or(0),
        samples,
        perturb_hamiltonian,
    };
    let results = run_verify(&opts)?;
    emit(&render_table(&opts, &results), cli.out.as_deref(), stdout)?;
    Ok(if results.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_sweep<W: Write>(cli: &Cli, stdout: &mut W) -> Result<i32> {
    let spec = parse_sweep_spec(&required_config(cli)?)?;
    sweep_and_write(cli, "sweep", spec, stdout)
}

fn cmd_fig2<W: Write>(cli: &Cli, stdout: &mut W) -> Result<i32> {
    if cli.config.is_some() {
        return Err(Error::Config(
            "fig2 is a preset and takes no --config".into(),
        ));
    }
    sweep_and_write(cli, "fig2", fig2_spec(), stdout)
}

fn infer_format(path: Option<&Path>) -> OutputFormat {
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => OutputFormat::Json,
        _ => OutputFormat::Csv,
    }
}

fn sweep_and_write<W: Write>(
    cli: &Cli,
    command: &str,
    mut spec: SweepSpec,
    stdout: &mut W,
) -> Result<i32> {
    let clock = RunClock::start();
    if let (SphereQuadrature::MonteCarlo { seed, .. }, Some(s)) = (&mut spec.quadrature, cli.seed) {
        *seed = s;
    }
    let seed = match spec.quadrature {
        SphereQuadrature::MonteCarlo { seed, .. } => Some(seed),
        _ => cli.seed,
    };
    let out = cli.out.clone().or_else(|| spec.out.clone());
    let format = cli
        .format
        .or(spec.format)
        .unwrap_or_else(|| infer_format(out.as_deref()));
    spec.out = out.clone();
    spec.format = Some(format);

    let rows = run_sweep(&spec)?;
    let mut buf = Vec::new();
    sweep::write_rows(&rows, format, &mut buf)?;
    let Some(path) = out else {
        stdout.write_all(&buf)?;
        return Ok(EXIT_OK);
    };
    std::fs::write(&path, &buf)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    let manifest = RunManifest {
        tool: "holo".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config: serde_json::to_value(&spec).map_err(|e| Error::Io(std::io::Error::other(e)))?,
        seed,
        output: path.display().to_string(),
        format: match format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
        .into(),
        rows: rows.len(),
        timestamp: clock.stop(),
    };
    let mpath = manifest_path(&path);
    manifest
        .write(&mpath)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", mpath.display())))?;
    Ok(EXIT_OK)
}
