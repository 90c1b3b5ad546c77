use serde::{Deserialize, Serialize};

use super::averaging::{average_fidelity, SphereQuadrature};
use super::{ideal_output, pure_overlap_fidelity, ErrorKind, FidelityReport, InputState, Method};
use crate::error::{Error, Result};
use crate::gate::{build_h_eff, GateParams};
use crate::quantum::{
    c, Ket3, Mat3, Role, ThreeLevelOperator, Tolerances, C64, EXCITED, GROUND0, GROUND1,
};

/// Largest |Tr ρ(T) − 1| accepted without a convergence warning.
pub const TRACE_DRIFT_BOUND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegratorMethod {
    /// Classical fixed-step 4th-order Runge–Kutta.
    #[default]
    #[serde(rename = "rk4-fixed")]
    Rk4Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub steps: usize,
    #[serde(default)]
    pub method: IntegratorMethod,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            steps: 2000,
            method: IntegratorMethod::Rk4Fixed,
        }
    }
}

impl IntegratorConfig {
    pub fn with_steps(steps: usize) -> Self {
        IntegratorConfig {
            steps,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(10..=10_000_000).contains(&self.steps) {
            return Err(Error::InvalidInput(format!(
                "integrator steps must be in 10..=10000000, got {}",
                self.steps
            )));
        }
        Ok(())
    }
}

/// L_k = √ε(|e⟩⟨e| − |k⟩⟨k|) for k = 0, 1.
fn dephasing_operators(epsilon: f64) -> [Mat3; 2] {
    let amp = epsilon.sqrt();
    [GROUND0, GROUND1].map(|k| {
        let mut l = Mat3::zeros();
        l[(EXCITED, EXCITED)] = c(amp, 0.0);
        l[(k, k)] = c(-amp, 0.0);
        l
    })
}

/// Hamiltonian and jump operators of the dephasing master equation.
#[derive(Clone, Copy, Debug)]
struct Generator {
    h: Mat3,
    jumps: [Mat3; 2],
    jumps_dag: [Mat3; 2],
    jumps_sq: [Mat3; 2],
}

impl Generator {
    fn new(h: &Mat3, epsilon: f64) -> Self {
        let jumps = dephasing_operators(epsilon);
        let jumps_dag = jumps.map(|l| l.adjoint());
        let jumps_sq = [jumps_dag[0] * jumps[0], jumps_dag[1] * jumps[1]];
        Generator {
            h: *h,
            jumps,
            jumps_dag,
            jumps_sq,
        }
    }

    /// −i[H, ρ] + Σ_k (2 L_k ρ L_k† − L_k†L_k ρ − ρ L_k†L_k)
    fn apply(&self, rho: &Mat3) -> Mat3 {
        let mut out = (self.h * rho - rho * self.h) * c(0.0, -1.0);
        for k in 0..2 {
            out += self.jumps[k] * rho * self.jumps_dag[k] * c(2.0, 0.0)
                - self.jumps_sq[k] * rho
                - rho * self.jumps_sq[k];
        }
        out
    }
}

/// dρ/dt of the dephasing master equation.
pub fn lindblad_rhs(
    rho: &ThreeLevelOperator,
    h: &ThreeLevelOperator,
    epsilon: f64,
) -> Result<Mat3> {
    check_rate(epsilon)?;
    if rho.role() != Role::Density || h.role() != Role::Hamiltonian {
        return Err(Error::ContractViolation(format!(
            "lindblad_rhs expects (density, hamiltonian), got ({}, {})",
            rho.role(),
            h.role()
        )));
    }
    Ok(Generator::new(h.matrix(), epsilon).apply(rho.matrix()))
}

fn check_rate(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "dephasing rate must be finite and >= 0, got {epsilon}"
        )))
    }
}

/// Fixed-step RK4 propagation of the master equation over `[0, duration]`.
///
/// The map is linear, so it may be applied to arbitrary matrices (not only
/// density matrices), e.g. matrix units when building a channel.
#[derive(Clone, Copy, Debug)]
pub struct LindbladPropagator {
    generator: Generator,
    duration: f64,
    steps: usize,
}

impl LindbladPropagator {
    pub fn new(
        h: &ThreeLevelOperator,
        epsilon: f64,
        duration: f64,
        cfg: &IntegratorConfig,
    ) -> Result<Self> {
        check_rate(epsilon)?;
        cfg.validate()?;
        if h.role() != Role::Hamiltonian {
            return Err(Error::ContractViolation(format!(
                "expected a hamiltonian, got a {} operator",
                h.role()
            )));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "duration must be finite and >= 0, got {duration}"
            )));
        }
        Ok(LindbladPropagator {
            generator: Generator::new(h.matrix(), epsilon),
            duration,
            steps: cfg.steps,
        })
    }

    pub fn propagate(&self, rho0: &Mat3) -> Mat3 {
        let dt = self.duration / self.steps as f64;
        let half = c(dt / 2.0, 0.0);
        let full = c(dt, 0.0);
        let sixth = c(dt / 6.0, 0.0);
        let g = &self.generator;
        let mut rho = *rho0;
        for _ in 0..self.steps {
            let k1 = g.apply(&rho);
            let k2 = g.apply(&(rho + k1 * half));
            let k3 = g.apply(&(rho + k2 * half));
            let k4 = g.apply(&(rho + k3 * full));
            rho += (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * sixth;
        }
        rho
    }
}

#[derive(Clone, Debug)]
pub struct LindbladOutcome {
    pub state: ThreeLevelOperator,
    /// |Tr ρ(T) − 1|
    pub trace_drift: f64,
    /// Set when the trace drift exceeds [`TRACE_DRIFT_BOUND`]; more steps
    /// are needed.
    pub convergence_warning: Option<String>,
}

/// ρ(T) under the gate Hamiltonian with dephasing rate ε.
pub fn integrate_lindblad(
    rho0: &ThreeLevelOperator,
    p: &GateParams,
    epsilon: f64,
    cfg: &IntegratorConfig,
) -> Result<LindbladOutcome> {
    integrate_lindblad_with(rho0, &build_h_eff(p, false), epsilon, p.period(), cfg)
}

pub fn integrate_lindblad_with(
    rho0: &ThreeLevelOperator,
    h: &ThreeLevelOperator,
    epsilon: f64,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<LindbladOutcome> {
    if rho0.role() != Role::Density {
        return Err(Error::ContractViolation(format!(
            "initial state must be a density operator, got {}",
            rho0.role()
        )));
    }
    let out = LindbladPropagator::new(h, epsilon, duration, cfg)?.propagate(rho0.matrix());
    let trace_drift = (out.trace() - c(1.0, 0.0)).norm();
    let convergence_warning = (trace_drift > TRACE_DRIFT_BOUND).then(|| {
        format!(
            "trace drift {trace_drift:e} exceeds {TRACE_DRIFT_BOUND:e} with {} steps",
            cfg.steps
        )
    });
    let state =
        ThreeLevelOperator::with_tolerances(out, Role::Density, &Tolerances::integrator_output())?;
    Ok(LindbladOutcome {
        state,
        trace_drift,
        convergence_warning,
    })
}

/// The dephased gate restricted to logical inputs, stored as the images of
/// the four matrix units |j⟩⟨k|, j, k ∈ {0, 1}.
#[derive(Clone, Copy, Debug)]
pub struct DephasingChannel {
    params: GateParams,
    images: [[Mat3; 2]; 2],
}

impl DephasingChannel {
    pub fn new(p: &GateParams, epsilon: f64, cfg: &IntegratorConfig) -> Result<Self> {
        let prop = LindbladPropagator::new(&build_h_eff(p, false), epsilon, p.period(), cfg)?;
        let logical = [GROUND0, GROUND1];
        let images = logical.map(|j| {
            logical.map(|k| {
                let mut unit = Mat3::zeros();
                unit[(j, k)] = c(1.0, 0.0);
                prop.propagate(&unit)
            })
        });
        Ok(DephasingChannel { params: *p, images })
    }

    /// Output state for a logical pure input.
    pub fn apply(&self, psi: &Ket3) -> Mat3 {
        let amps = psi.logical();
        let mut out = Mat3::zeros();
        for j in 0..2 {
            for k in 0..2 {
                let coeff: C64 = amps[j] * amps[k].conj();
                out += self.images[j][k] * coeff;
            }
        }
        out
    }

    pub fn fidelity(&self, input: &InputState) -> f64 {
        let psi = input.ket(&self.params.basis());
        pure_overlap_fidelity(&ideal_output(&self.params, &psi), &self.apply(&psi))
    }
}

/// Tr(ρ_out ρ′_out) for one input, by integrating the input projector.
pub fn dephasing_fidelity(
    p: &GateParams,
    input: &InputState,
    epsilon_t: f64,
    cfg: &IntegratorConfig,
) -> Result<FidelityReport> {
    let epsilon = epsilon_t / p.period();
    let psi = input.ket(&p.basis());
    let outcome = integrate_lindblad(&psi.projector()?, p, epsilon, cfg)?;
    let value = pure_overlap_fidelity(&ideal_output(p, &psi), outcome.state.matrix());
    Ok(FidelityReport {
        gate: Some(*p),
        input: Some(*input),
        ..FidelityReport::new(
            value,
            Method::Simulated,
            ErrorKind::Dephasing,
            epsilon_t,
            p.gamma(),
        )
    })
}

/// Bloch-sphere average of the dephasing fidelity.
pub fn average_dephasing_fidelity(
    p: &GateParams,
    epsilon_t: f64,
    cfg: &IntegratorConfig,
    quadrature: &SphereQuadrature,
) -> Result<FidelityReport> {
    let channel = DephasingChannel::new(p, epsilon_t / p.period(), cfg)?;
    let avg = average_fidelity(
        |theta, varphi| Ok(channel.fidelity(&InputState::new(theta, varphi)?)),
        quadrature,
    )?;
    Ok(FidelityReport {
        gate: Some(*p),
        standard_error: avg.standard_error,
        ..FidelityReport::new(
            avg.value,
            Method::Simulated,
            ErrorKind::Dephasing,
            epsilon_t,
            p.gamma(),
        )
    })
}
