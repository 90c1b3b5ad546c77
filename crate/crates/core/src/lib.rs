//! Single-shot non-adiabatic holonomic one-qubit gates on a driven three-level
//! Λ system.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: dense 3×3 / 2×2 complex linear algebra, fidelities and
//!   phase-insensitive gate distances.
//! - [`gate`]: the (α, β, γ, Ω) parameterisation, effective Hamiltonian,
//!   gate evolution, synthesis from a target rotation, laser mapping and
//!   holonomy checks.
//! - [`noise`]: dephasing (Lindblad), pulse-area and detuning errors, their
//!   closed-form fidelities and Bloch-sphere averaging.
//! - [`cli`]: the configuration documents, sweep engine and verification
//!   battery behind the `holo` binary.

pub mod cli;
pub mod error;
pub mod gate;
pub mod noise;
pub mod quantum;

pub use error::{Error, Result};
pub use gate::{
    bright_dark, build_h_eff, build_h_rot, check_holonomy, check_rwa, evolve_gate, gate_phase,
    logical_gate, map_to_lasers, params_to_physical, synthesize, BrightDarkBasis, GateParams,
    HolonomyReport, LaserSettings, TargetRotation,
};
pub use quantum::{
    bloch_input_state, distance_up_to_phase, hermitian_expm, state_fidelity, Ket3, LogicalOperator,
    Role, ThreeLevelOperator, Tolerances,
};
