use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{c, cis, Ket3, Mat3, C64, EXCITED, GROUND0, GROUND1};

/// The synthesis tuple (α, β, γ, Ω). The pulse lasts T = π/Ω.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    omega: f64,
}

impl GateParams {
    /// Requires α ∈ [0, π/2], β ∈ [0, 2π), γ ∈ [−π/2, π/2] and Ω > 0.
    pub fn new(alpha: f64, beta: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidInput(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&alpha) {
            return Err(Error::InvalidInput(format!(
                "alpha {alpha} outside [0, pi/2]"
            )));
        }
        if !(0.0..TAU).contains(&beta) {
            return Err(Error::InvalidInput(format!("beta {beta} outside [0, 2pi)")));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&gamma) {
            return Err(Error::InvalidInput(format!(
                "gamma {gamma} outside [-pi/2, pi/2]"
            )));
        }
        Ok(GateParams {
            alpha,
            beta,
            gamma,
            omega,
        })
    }

    /// Accepts any finite (α, β) and folds them onto the canonical range by
    /// going through the Bloch vector of |b⟩. The resulting gate is the same.
    pub fn canonical(alpha: f64, beta: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "axis angles must be finite, got ({alpha}, {beta})"
            )));
        }
        let (a, b) = canonical_axis_angles(&bloch_vector(alpha, beta));
        GateParams::new(a, b, gamma, omega)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// T = π/Ω
    pub fn period(&self) -> f64 {
        PI / self.omega
    }

    pub fn basis(&self) -> BrightDarkBasis {
        bright_dark(self.alpha, self.beta)
    }
}

/// Bloch vector of cos α|0⟩ + e^{iβ} sin α|1⟩.
pub(crate) fn bloch_vector(alpha: f64, beta: f64) -> [f64; 3] {
    let s = (2.0 * alpha).sin();
    [s * beta.cos(), s * beta.sin(), (2.0 * alpha).cos()]
}

/// (α, β) with α ∈ [0, π/2], β ∈ [0, 2π) for a unit Bloch vector.
pub(crate) fn canonical_axis_angles(n: &[f64; 3]) -> (f64, f64) {
    let alpha = n[2].clamp(-1.0, 1.0).acos() / 2.0;
    let mut beta = n[1].atan2(n[0]).rem_euclid(TAU);
    if beta >= TAU {
        beta = 0.0;
    }
    (alpha, beta)
}

/// |b⟩ and |d⟩ spanning the logical subspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrightDarkBasis {
    pub bright: Ket3,
    pub dark: Ket3,
}

impl BrightDarkBasis {
    /// Unitary whose columns are |e⟩, |b⟩, |d⟩ in the (|e⟩, |0⟩, |1⟩) basis.
    pub fn change_of_basis(&self) -> Mat3 {
        let mut w = Mat3::zeros();
        w[(EXCITED, 0)] = c(1.0, 0.0);
        w.set_column(1, self.bright.vector());
        w.set_column(2, self.dark.vector());
        w
    }

    /// Express a (|e⟩, |0⟩, |1⟩) operator in (|e⟩, |b⟩, |d⟩).
    pub fn to_bright_dark(&self, op: &Mat3) -> Mat3 {
        let w = self.change_of_basis();
        w.adjoint() * op * w
    }
}

/// |b⟩ = cos α|0⟩ + e^{iβ} sin α|1⟩, |d⟩ = sin α|0⟩ − e^{iβ} cos α|1⟩
pub fn bright_dark(alpha: f64, beta: f64) -> BrightDarkBasis {
    let phase = cis(beta);
    let zero = c(0.0, 0.0);
    BrightDarkBasis {
        bright: Ket3::new(zero, c(alpha.cos(), 0.0), phase * alpha.sin()),
        dark: Ket3::new(zero, c(alpha.sin(), 0.0), -phase * alpha.cos()),
    }
}

/// Shared detuning and the two complex Rabi couplings realising a gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalCouplings {
    pub delta: f64,
    pub omega0: C64,
    pub omega1: C64,
}

/// Δ = −2Ω sin γ, Ω₀ = Ω cos α cos γ, Ω₁ = Ω e^{iβ} sin α cos γ
pub fn params_to_physical(p: &GateParams) -> PhysicalCouplings {
    couplings(p.alpha, p.beta, p.gamma, p.omega)
}

pub(crate) fn couplings(alpha: f64, beta: f64, gamma: f64, scale: f64) -> PhysicalCouplings {
    let (sg, cg) = gamma.sin_cos();
    PhysicalCouplings {
        delta: -2.0 * scale * sg,
        omega0: c(scale * alpha.cos() * cg, 0.0),
        omega1: cis(beta) * (scale * alpha.sin() * cg),
    }
}

/// φ = π sin γ + π
pub fn gate_phase(gamma: f64) -> f64 {
    PI * gamma.sin() + PI
}

pub(crate) fn logical_index(j: usize) -> usize {
    [GROUND0, GROUND1][j]
}
