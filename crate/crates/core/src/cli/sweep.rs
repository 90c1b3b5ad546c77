//! Error sweeps over gates and error strengths.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{AxisSpec, GateSpec, OutputFormat, ProductRange, SweepSpec};
use crate::error::{Error, Result};
use crate::gate::{synthesize, AxisLabel, GateParams};
use crate::noise::{
    average_coherent_fidelity, average_dephasing_fidelity, average_fidelity, detuning_avg_approx,
    detuning_fidelity_exact, pulse_area_avg_approx, pulse_area_fidelity_exact, ErrorKind,
    IntegratorConfig, SphereQuadrature,
};

pub const CSV_HEADER: [&str; 11] = [
    "error_kind",
    "error_product",
    "axis_alpha",
    "axis_beta",
    "rotation_angle",
    "gamma",
    "fidelity_exact",
    "fidelity_approx",
    "fidelity_simulated",
    "avg_fidelity",
    "method_notes",
];

/// One (gate, error product) point. All fidelities are Bloch-sphere averages
/// clamped to [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub gate_index: usize,
    pub error_kind: ErrorKind,
    pub error_product: f64,
    pub axis_alpha: f64,
    pub axis_beta: f64,
    pub rotation_angle: f64,
    pub gamma: f64,
    /// Quadrature average of the exact closed form; coherent errors only.
    pub fidelity_exact: Option<f64>,
    /// Averaged small-error expansion; coherent errors only.
    pub fidelity_approx: Option<f64>,
    /// Quadrature average of numerically propagated fidelities.
    pub fidelity_simulated: f64,
    pub avg_fidelity: f64,
    pub method_notes: String,
}

/// The dephasing preset: X, Y, Z rotations by π/6 and π/3, εT ∈ [0, 0.1].
pub fn fig2_spec() -> SweepSpec {
    let gates = [AxisLabel::X, AxisLabel::Y, AxisLabel::Z]
        .into_iter()
        .flat_map(|label| {
            [PI / 6.0, PI / 3.0].map(|angle| GateSpec {
                axis: AxisSpec::Label(label),
                angle,
            })
        })
        .collect();
    SweepSpec {
        error: ErrorKind::Dephasing,
        range: ProductRange {
            start: 0.0,
            stop: 0.1,
            count: 21,
        },
        gates,
        omega: 1.0,
        integrator: IntegratorConfig::default(),
        quadrature: SphereQuadrature::default(),
        out: None,
        format: None,
    }
}

fn quadrature_note(q: &SphereQuadrature) -> String {
    match *q {
        SphereQuadrature::GaussLegendre {
            theta_nodes,
            phi_nodes,
        } => format!("gauss_legendre {theta_nodes}x{phi_nodes}"),
        SphereQuadrature::MonteCarlo { samples, seed } => {
            format!("monte_carlo {samples} samples seed {seed}")
        }
    }
}

fn evaluate(
    spec: &SweepSpec,
    gate_index: usize,
    gate: &GateSpec,
    p: &GateParams,
    product: f64,
) -> Result<SweepRow> {
    let q = &spec.quadrature;
    let gamma = p.gamma();
    let (exact, approx, simulated, notes) = match spec.error {
        ErrorKind::Dephasing => {
            let sim = average_dephasing_fidelity(p, product, &spec.integrator, q)?.value;
            let notes = format!(
                "avg=simulated; simulated=lindblad rk4-fixed {} steps; quadrature={}",
                spec.integrator.steps,
                quadrature_note(q)
            );
            (None, None, sim, notes)
        }
        kind => {
            let exact_at = |theta: f64| match kind {
                ErrorKind::PulseArea => pulse_area_fidelity_exact(theta, gamma, product),
                _ => detuning_fidelity_exact(theta, gamma, product),
            };
            let exact = average_fidelity(|t, _| Ok(exact_at(t)?.value), q)?.value;
            let approx = match kind {
                ErrorKind::PulseArea => pulse_area_avg_approx(gamma, product)?,
                _ => detuning_avg_approx(gamma, product)?,
            }
            .value;
            let sim = average_coherent_fidelity(kind, p, product, q)?.value;
            let notes = format!(
                "avg=closed_form_exact; approx=closed_form_approx; simulated=unitary propagation; quadrature={}",
                quadrature_note(q)
            );
            (Some(exact), Some(approx), sim, notes)
        }
    };
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    let target = gate.target()?;
    Ok(SweepRow {
        gate_index,
        error_kind: spec.error,
        error_product: product,
        axis_alpha: p.alpha(),
        axis_beta: p.beta(),
        rotation_angle: target.angle(),
        gamma,
        fidelity_exact: exact.map(clamp),
        fidelity_approx: approx.map(clamp),
        fidelity_simulated: clamp(simulated),
        avg_fidelity: clamp(exact.unwrap_or(simulated)),
        method_notes: notes,
    })
}

/// Evaluates every (gate, error product) pair. Rows are ordered by gate
/// index, then by error product, independent of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let params = spec
        .gates
        .iter()
        .map(|g| synthesize(&g.target()?, spec.omega))
        .collect::<Result<Vec<_>>>()?;
    let products = spec.range.points();
    let jobs: Vec<(usize, f64)> = (0..spec.gates.len())
        .flat_map(|i| products.iter().map(move |&e| (i, e)))
        .collect();
    jobs.par_iter()
        .map(|&(i, e)| evaluate(spec, i, &spec.gates[i], &params[i], e))
        .collect()
}

/// Seventeen significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.error_kind.as_str().to_owned(),
            format_number(r.error_product),
            format_number(r.axis_alpha),
            format_number(r.axis_beta),
            format_number(r.rotation_angle),
            format_number(r.gamma),
            opt(r.fidelity_exact),
            opt(r.fidelity_approx),
            format_number(r.fidelity_simulated),
            format_number(r.avg_fidelity),
            r.method_notes.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[SweepRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(error: ErrorKind, stop: f64) -> SweepSpec {
        SweepSpec {
            error,
            range: ProductRange {
                start: 0.0,
                stop,
                count: 3,
            },
            gates: vec![
                GateSpec {
                    axis: AxisSpec::Label(AxisLabel::Z),
                    angle: PI,
                },
                GateSpec {
                    axis: AxisSpec::Label(AxisLabel::X),
                    angle: PI / 3.0,
                },
            ],
            integrator: IntegratorConfig::with_steps(200),
            quadrature: SphereQuadrature::GaussLegendre {
                theta_nodes: 8,
                phi_nodes: 8,
            },
            ..fig2_spec()
        }
    }

    #[test]
    fn fig2_preset_shape() {
        let spec = fig2_spec();
        spec.validate().unwrap();
        assert_eq!(spec.gates.len() * spec.range.count, 126);
    }

    #[test]
    fn rows_are_ordered() {
        let rows = run_sweep(&small(ErrorKind::PulseArea, 0.1)).unwrap();
        let keys: Vec<(usize, f64)> = rows
            .iter()
            .map(|r| (r.gate_index, r.error_product))
            .collect();
        assert_eq!(
            keys,
            vec![(0, 0.0), (0, 0.05), (0, 0.1), (1, 0.0), (1, 0.05), (1, 0.1)]
        );
    }

    #[test]
    fn pulse_area_average_matches_expansion_at_gamma_zero() {
        let rows = run_sweep(&small(ErrorKind::PulseArea, 0.05)).unwrap();
        for r in rows.iter().filter(|r| r.gate_index == 0) {
            assert_eq!(r.gamma, 0.0);
            let e = r.error_product;
            assert!((r.avg_fidelity - (1.0 - 0.5 * e * e)).abs() <= 5.0 * e.powi(3));
            assert!((r.fidelity_simulated - r.avg_fidelity).abs() < 1e-9);
        }
    }

    #[test]
    fn dephasing_rows_leave_closed_forms_empty() {
        let rows = run_sweep(&small(ErrorKind::Dephasing, 0.1)).unwrap();
        for r in &rows {
            assert!(r.fidelity_exact.is_none() && r.fidelity_approx.is_none());
            assert!((0.0..=1.0).contains(&r.avg_fidelity));
            assert!(r.method_notes.contains("simulated"));
        }
    }

    #[test]
    fn csv_layout() {
        let rows = run_sweep(&small(ErrorKind::Detuning, 0.1)).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), rows.len());
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        for rec in rd.records() {
            let rec = rec.unwrap();
            assert_eq!(rec.len(), 11);
            let v: f64 = rec[9].parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, PI, 1.0 / 3.0, 1e-300, 0.9999999999999999] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }
}
