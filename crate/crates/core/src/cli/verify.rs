//! The invariant battery behind `holo verify`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gate::{
    build_h_eff, check_holonomy_with, evolve_gate, logical_gate, synthesize, GateParams,
    HolonomyTolerances, TargetRotation,
};
use crate::noise::{
    average_fidelity, coherent_fidelity_simulated, detuning_fidelity_exact, integrate_lindblad,
    pulse_area_fidelity_exact, ErrorKind, InputState, IntegratorConfig, SphereQuadrature,
};
use crate::quantum::{c, distance_up_to_phase, LogicalBasis, LogicalOperator, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random cases per randomized check.
    pub samples: usize,
    /// Adds δΩ|b⟩⟨b| to the Hamiltonian seen by the holonomy checks.
    pub perturb_hamiltonian: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            samples: 200,
            perturb_hamiltonian: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub first_failure: Option<String>,
}

/// Tracks the worst residual and the first case that exceeds the tolerance.
struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
            first_failure: None,
        }
    }

    fn record(&mut self, residual: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        // NaN counts as a failure.
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
        if (residual.is_nan() || residual >= self.tolerance) && self.first_failure.is_none() {
            self.first_failure = Some(case());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            pass: self.first_failure.is_none(),
            first_failure: self.first_failure,
        }
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> GateParams {
    GateParams::new(
        rng.random_range(0.0..=FRAC_PI_2),
        rng.random_range(0.0..TAU),
        rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
        rng.random_range(0.1..10.0),
    )
    .expect("sampled inside the valid ranges")
}

fn describe(p: &GateParams) -> String {
    format!(
        "alpha={:.17e} beta={:.17e} gamma={:.17e} omega={:.17e}",
        p.alpha(),
        p.beta(),
        p.gamma(),
        p.omega()
    )
}

fn holonomy_checks(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<[CheckResult; 2]> {
    let tol = HolonomyTolerances::default();
    let mut cyclic = Tally::new("holonomy (i) cyclic evolution", tol.cyclicity);
    let mut transport = Tally::new(
        "holonomy (ii) parallel transport (relative to omega)",
        tol.dynamical_relative,
    );
    for _ in 0..opts.samples {
        let p = random_params(rng);
        let basis = p.basis();
        let mut h = build_h_eff(&p, false).into_matrix();
        if let Some(delta) = opts.perturb_hamiltonian {
            h += basis.bright.outer() * c(delta * p.omega(), 0.0);
        }
        let r = check_holonomy_with(&h, p.period(), &basis, p.omega(), &tol)?;
        cyclic.record(r.cyclicity_residual, || describe(&p));
        transport.record(r.max_dynamical_matrix_element / p.omega(), || describe(&p));
    }
    Ok([cyclic.finish(), transport.finish()])
}

fn synthesis_round_trip(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut tally = Tally::new("synthesis round trip distance", 1e-10);
    for _ in 0..opts.samples {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let az: f64 = rng.random_range(0.0..TAU);
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let axis = [rho * az.cos(), rho * az.sin(), z];
        let angle = rng.random_range(0.0..TAU);
        let target = TargetRotation::new(axis, angle)?;
        let p = synthesize(&target, 1.0)?;
        let d = distance_up_to_phase(&logical_gate(&p), &target.unitary())?;
        tally.record(d, || format!("axis={axis:?} angle={angle:.17e}"));
    }
    Ok(tally.finish())
}

fn named_gates() -> Result<CheckResult> {
    let mut tally = Tally::new("named gates -iZ -iX -iY", 1e-12);
    let i = c(0.0, 1.0);
    let o = c(0.0, 0.0);
    let cases = [
        ("-iZ", 0.0, 0.0, Mat2::new(-i, o, o, i)),
        ("-iX", PI / 4.0, 0.0, Mat2::new(o, -i, -i, o)),
        (
            "-iY",
            PI / 4.0,
            FRAC_PI_2,
            Mat2::new(o, c(-1.0, 0.0), c(1.0, 0.0), o),
        ),
    ];
    for (name, alpha, beta, want) in cases {
        let p = GateParams::new(alpha, beta, 0.0, 1.0)?;
        let got = logical_gate(&p);
        let want = LogicalOperator::new(want, LogicalBasis::Computational)?;
        tally.record((got.matrix() - want.matrix()).norm(), || name.to_owned());
    }
    Ok(tally.finish())
}

fn closed_form_grid(kind: ErrorKind, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let name = match kind {
        ErrorKind::PulseArea => "pulse-area closed form vs propagation",
        _ => "detuning closed form vs propagation",
    };
    let mut tally = Tally::new(name, 1e-9);
    for i in 0..9 {
        let theta = if i == 8 { PI } else { PI * i as f64 / 8.0 };
        for j in 0..7 {
            let gamma = -1.2 + 0.4 * j as f64;
            for product in [0.01, 0.1, 0.5] {
                let p = GateParams::new(
                    rng.random_range(0.0..=FRAC_PI_2),
                    rng.random_range(0.0..TAU),
                    gamma,
                    1.0,
                )?;
                let s = InputState::new(theta, rng.random_range(0.0..TAU))?;
                let sim = coherent_fidelity_simulated(kind, &p, &s, product)?.value;
                let cf = match kind {
                    ErrorKind::PulseArea => pulse_area_fidelity_exact(theta, gamma, product)?,
                    _ => detuning_fidelity_exact(theta, gamma, product)?,
                }
                .value;
                tally.record((sim - cf).abs(), || {
                    format!(
                        "theta={theta:.17e} gamma={gamma:.17e} product={product} {}",
                        describe(&p)
                    )
                });
            }
        }
    }
    Ok(tally.finish())
}

fn sphere_identities() -> Result<CheckResult> {
    let mut tally = Tally::new("sphere averages <cos^2>=1/2 <cos^4>=1/3", 1e-12);
    let q = SphereQuadrature::default();
    let c2 = average_fidelity(|t, _| Ok((t / 2.0).cos().powi(2)), &q)?.value;
    tally.record((c2 - 0.5).abs(), || "cos^2(theta/2)".into());
    let c4 = average_fidelity(|t, _| Ok((t / 2.0).cos().powi(4)), &q)?.value;
    tally.record((c4 - 1.0 / 3.0).abs(), || "cos^4(theta/2)".into());
    Ok(tally.finish())
}

fn lindblad_checks(rng: &mut ChaCha8Rng) -> Result<[CheckResult; 2]> {
    let mut unitary = Tally::new("lindblad zero-rate unitary limit", 1e-8);
    let mut trace = Tally::new("lindblad trace drift at eps*T=0.1", 1e-9);
    let cfg = IntegratorConfig::default();
    for _ in 0..4 {
        let p = random_params(rng);
        let s = InputState::new(rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))?;
        let rho0 = s.ket(&p.basis()).projector()?;
        let u = evolve_gate(&p).into_matrix();
        let exact = u * rho0.matrix() * u.adjoint();
        let out = integrate_lindblad(&rho0, &p, 0.0, &cfg)?;
        unitary.record((out.state.matrix() - exact).norm(), || describe(&p));
        let out = integrate_lindblad(&rho0, &p, 0.1 / p.period(), &cfg)?;
        trace.record(out.trace_drift, || describe(&p));
    }
    Ok([unitary.finish(), trace.finish()])
}

/// Runs every check. Randomized checks draw from one seeded stream, so the
/// results depend only on the options.
pub fn run_verify(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    out.extend(holonomy_checks(opts, &mut rng)?);
    out.push(synthesis_round_trip(opts, &mut rng)?);
    out.push(named_gates()?);
    out.push(closed_form_grid(ErrorKind::PulseArea, &mut rng)?);
    out.push(closed_form_grid(ErrorKind::Detuning, &mut rng)?);
    out.push(sphere_identities()?);
    out.extend(lindblad_checks(&mut rng)?);
    Ok(out)
}

/// Fixed-width pass/fail table followed by the first failing case of every
/// failed check.
pub fn render_table(opts: &VerifyOptions, results: &[CheckResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "holo verify  seed={}  samples={}",
        opts.seed, opts.samples
    );
    if let Some(d) = opts.perturb_hamiltonian {
        let _ = writeln!(s, "injected fault: bright-state shift {d} * omega");
    }
    let _ = writeln!(
        s,
        "{:<54} {:>6} {:>11} {:>9}  result",
        "check", "cases", "worst", "tol"
    );
    for r in results {
        let _ = writeln!(
            s,
            "{:<54} {:>6} {:>11.3e} {:>9.0e}  {}",
            r.name,
            r.cases,
            r.worst,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    for r in results.iter().filter(|r| !r.pass) {
        let _ = writeln!(
            s,
            "FAILED {}: {}",
            r.name,
            r.first_failure.as_deref().unwrap_or("")
        );
    }
    let passed = results.iter().filter(|r| r.pass).count();
    let _ = writeln!(s, "{passed}/{} checks passed", results.len());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(perturb: Option<f64>) -> VerifyOptions {
        VerifyOptions {
            seed: 42,
            samples: 20,
            perturb_hamiltonian: perturb,
        }
    }

    #[test]
    fn pristine_battery_passes() {
        let opts = quick(None);
        let results = run_verify(&opts).unwrap();
        assert!(
            results.iter().all(|r| r.pass),
            "{}",
            render_table(&opts, &results)
        );
    }

    #[test]
    fn perturbation_names_condition_ii() {
        let opts = quick(Some(0.1));
        let results = run_verify(&opts).unwrap();
        let failed: Vec<_> = results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
        assert!(failed.iter().any(|n| n.starts_with("holonomy (ii)")));
        assert!(render_table(&opts, &results).contains("FAILED holonomy (ii)"));
    }

    #[test]
    fn report_is_deterministic() {
        let opts = quick(None);
        let a = render_table(&opts, &run_verify(&opts).unwrap());
        let b = render_table(&opts, &run_verify(&opts).unwrap());
        assert_eq!(a, b);
    }
}
