//! Gate construction on the driven Λ system: parameterisation, effective
//! Hamiltonian, evolution over one period, inverse synthesis, laser settings
//! and the holonomy conditions.

mod hamiltonian;
mod holonomy;
mod lasers;
mod params;
mod synthesis;

pub use hamiltonian::{
    bright_coupled_generator, build_h_eff, build_h_rot, evolve_gate, logical_gate,
    RotatingFrameHamiltonian,
};
pub use holonomy::{check_holonomy, check_holonomy_with, HolonomyReport, HolonomyTolerances};
pub use lasers::{
    check_rwa, map_to_lasers, Drive, LaserSettings, RwaReport, Transition, DEFAULT_RWA_THRESHOLD,
};
pub use params::{
    bright_dark, gate_phase, params_to_physical, BrightDarkBasis, GateParams, PhysicalCouplings,
};
pub use synthesis::{synthesize, AxisLabel, TargetRotation};
