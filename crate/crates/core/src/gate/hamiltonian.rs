use super::lasers::LaserSettings;
use super::params::{couplings, gate_phase, logical_index, GateParams};
use crate::quantum::{
    c, cis, expm_hermitian_unchecked, LogicalBasis, LogicalOperator, Mat2, Mat3, Role,
    ThreeLevelOperator, EXCITED,
};

/// −Δ|e⟩⟨e| + Σ_j (Ω_j|j⟩⟨e| + h.c.) with (Δ, Ω_j) from (α, β, γ) at Rabi
/// scale `scale`.
///
/// With `scale = Ω` this is the effective gate Hamiltonian; with `scale = ξ`
/// it is the pulse-area error term, which has the same structure.
pub fn bright_coupled_generator(alpha: f64, beta: f64, gamma: f64, scale: f64) -> Mat3 {
    let k = couplings(alpha, beta, gamma, scale);
    let mut h = Mat3::zeros();
    h[(EXCITED, EXCITED)] = c(-k.delta, 0.0);
    for (j, omega_j) in [k.omega0, k.omega1].into_iter().enumerate() {
        let g = logical_index(j);
        h[(g, EXCITED)] = omega_j;
        h[(EXCITED, g)] = omega_j.conj();
    }
    h
}

/// The effective Hamiltonian of the gate. `include_global_term` adds the Δ·I
/// term dropped when passing from the rotating-frame Hamiltonian; it only
/// contributes a global phase.
pub fn build_h_eff(p: &GateParams, include_global_term: bool) -> ThreeLevelOperator {
    let mut h = bright_coupled_generator(p.alpha(), p.beta(), p.gamma(), p.omega());
    if include_global_term {
        let delta = couplings(p.alpha(), p.beta(), p.gamma(), p.omega()).delta;
        h += Mat3::identity() * c(delta, 0.0);
    }
    ThreeLevelOperator::trusted(h, Role::Hamiltonian)
}

/// Rotating-frame Hamiltonian before the equal-detuning reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatingFrameHamiltonian {
    pub hamiltonian: ThreeLevelOperator,
    /// Set when Δ₀ ≠ Δ₁, i.e. the reduction to a shared detuning does not apply.
    pub unequal_detunings: bool,
}

/// Σ_j Δ_j|j⟩⟨j| + (Ω_j|j⟩⟨e| + h.c.) with Ω_j = g_j d_j e^{iχ_j}, χ_j the
/// laser phase offset.
pub fn build_h_rot(lasers: &LaserSettings) -> RotatingFrameHamiltonian {
    let mut h = Mat3::zeros();
    for (j, drive) in lasers.transitions().iter().enumerate() {
        let g = logical_index(j);
        let rabi = drive.rabi_frequency();
        h[(g, g)] = c(drive.detuning, 0.0);
        h[(g, EXCITED)] = rabi;
        h[(EXCITED, g)] = rabi.conj();
    }
    RotatingFrameHamiltonian {
        hamiltonian: ThreeLevelOperator::trusted(h, Role::Hamiltonian),
        unequal_detunings: lasers.shared_detuning().is_none(),
    }
}

/// U(T) = exp(−i H_eff T) with T = π/Ω.
pub fn evolve_gate(p: &GateParams) -> ThreeLevelOperator {
    let h = build_h_eff(p, false);
    let u = expm_hermitian_unchecked(h.matrix(), p.period());
    ThreeLevelOperator::trusted(u, Role::Unitary)
}

/// U_L = exp(−i(φ/2)(|b⟩⟨b| − |d⟩⟨d|)) on (|0⟩, |1⟩).
pub fn logical_gate(p: &GateParams) -> LogicalOperator {
    let basis = p.basis();
    let half = gate_phase(p.gamma()) / 2.0;
    let b = basis.bright.logical();
    let d = basis.dark.logical();
    let m: Mat2 = b * b.adjoint() * cis(-half) + d * d.adjoint() * cis(half);
    LogicalOperator::trusted(m, LogicalBasis::Computational)
}
