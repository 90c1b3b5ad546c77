//! Gate robustness under dephasing, pulse-area and detuning errors.
//!
//! Error strengths are handled as dimensionless products with the pulse
//! length (εT, ξT, κT). Closed-form fidelities assume ΩT = π.

mod averaging;
mod coherent;
mod lindblad;
mod sensitivity;

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::{BrightDarkBasis, GateParams};
use crate::quantum::{bloch_input_state, Ket3};

pub use averaging::{average_fidelity, SphereAverage, SphereQuadrature};
pub use coherent::{
    average_coherent_fidelity, coherent_fidelity_simulated, detuning_avg_approx,
    detuning_fidelity_approx, detuning_fidelity_exact, detuning_fidelity_exact_with,
    detuning_unitary, pulse_area_avg_approx, pulse_area_fidelity_approx, pulse_area_fidelity_exact,
    pulse_area_unitary,
};
pub use lindblad::{
    average_dephasing_fidelity, dephasing_fidelity, integrate_lindblad, integrate_lindblad_with,
    lindblad_rhs, DephasingChannel, IntegratorConfig, IntegratorMethod, LindbladOutcome,
    LindbladPropagator, TRACE_DRIFT_BOUND,
};
pub use sensitivity::{sensitivity_extremes, SensitivityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Dephasing,
    PulseArea,
    Detuning,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Dephasing => "dephasing",
            ErrorKind::PulseArea => "pulse_area",
            ErrorKind::Detuning => "detuning",
        }
    }
}

/// An error channel with its physical strength.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorSpec {
    /// Dephasing rate ε ≥ 0 of the Lindblad operators.
    Dephasing { epsilon: f64 },
    /// Common-mode Rabi-frequency offset ξ.
    PulseArea { xi: f64 },
    /// Common-mode laser frequency offset κ.
    Detuning { kappa: f64 },
}

impl ErrorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ErrorSpec::Dephasing { epsilon } if !(epsilon.is_finite() && epsilon >= 0.0) => Err(
                Error::InvalidInput(format!("dephasing rate must be >= 0, got {epsilon}")),
            ),
            ErrorSpec::PulseArea { xi: v } | ErrorSpec::Detuning { kappa: v } if !v.is_finite() => {
                Err(Error::InvalidInput(format!(
                    "error parameter {v} is not finite"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            ErrorSpec::Dephasing { .. } => ErrorKind::Dephasing,
            ErrorSpec::PulseArea { .. } => ErrorKind::PulseArea,
            ErrorSpec::Detuning { .. } => ErrorKind::Detuning,
        }
    }

    /// Builds the spec from a dimensionless product with the pulse length.
    pub fn from_product(kind: ErrorKind, product: f64, period: f64) -> Result<Self> {
        let rate = product / period;
        let spec = match kind {
            ErrorKind::Dephasing => ErrorSpec::Dephasing { epsilon: rate },
            ErrorKind::PulseArea => ErrorSpec::PulseArea { xi: rate },
            ErrorKind::Detuning => ErrorSpec::Detuning { kappa: rate },
        };
        spec.validate()?;
        Ok(spec)
    }

    /// εT, ξT or κT.
    pub fn product(&self, period: f64) -> f64 {
        match *self {
            ErrorSpec::Dephasing { epsilon: v }
            | ErrorSpec::PulseArea { xi: v }
            | ErrorSpec::Detuning { kappa: v } => v * period,
        }
    }
}

/// A logical input state cos(θ/2)e^{iφ/2}|b⟩ + sin(θ/2)e^{−iφ/2}|d⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InputState {
    theta: f64,
    varphi: f64,
}

impl InputState {
    pub fn new(theta: f64, varphi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidInput(format!(
                "polar angle {theta} outside [0, pi]"
            )));
        }
        if !(0.0..=TAU).contains(&varphi) {
            return Err(Error::InvalidInput(format!(
                "azimuthal angle {varphi} outside [0, 2pi]"
            )));
        }
        Ok(InputState { theta, varphi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    pub fn ket(&self, basis: &BrightDarkBasis) -> Ket3 {
        bloch_input_state(self.theta, self.varphi, basis).expect("angles validated")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedFormExact,
    ClosedFormApprox,
    Simulated,
}

/// One fidelity evaluation and how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityReport {
    /// Raw value; may leave [0, 1] by rounding. See [`FidelityReport::reported`].
    pub value: f64,
    pub method: Method,
    pub error: ErrorKind,
    /// εT, ξT or κT.
    pub error_product: f64,
    pub gamma: f64,
    pub gate: Option<GateParams>,
    /// Absent for sphere averages.
    pub input: Option<InputState>,
    /// B/Ω with B = √(Ω² − κΩ sin γ + κ²/4); detuning closed form only.
    pub b_over_omega: Option<f64>,
    /// Monte Carlo averages only.
    pub standard_error: Option<f64>,
}

impl FidelityReport {
    pub(crate) fn new(
        value: f64,
        method: Method,
        error: ErrorKind,
        error_product: f64,
        gamma: f64,
    ) -> Self {
        FidelityReport {
            value,
            method,
            error,
            error_product,
            gamma,
            gate: None,
            input: None,
            b_over_omega: None,
            standard_error: None,
        }
    }

    /// The value clamped to [0, 1] for output.
    pub fn reported(&self) -> f64 {
        self.value.clamp(0.0, 1.0)
    }
}

/// F = Tr(ρ_out ρ′_out) for a pure ideal output |ψ⟩: ⟨ψ|ρ′|ψ⟩.
pub(crate) fn pure_overlap_fidelity(ideal: &Ket3, rho: &crate::quantum::Mat3) -> f64 {
    ideal.vector().dotc(&(rho * ideal.vector())).re
}

/// The ideal (error-free) gate output for a logical input.
pub(crate) fn ideal_output(p: &GateParams, psi: &Ket3) -> Ket3 {
    psi.apply(crate::gate::evolve_gate(p).matrix())
}
