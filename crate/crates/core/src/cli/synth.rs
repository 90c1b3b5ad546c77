//! Gate synthesis report.

use serde::Serialize;

use super::config::SynthConfig;
use crate::error::Result;
use crate::gate::{
    check_rwa, map_to_lasers, params_to_physical, synthesize, GateParams, LaserSettings,
    PhysicalCouplings, RwaReport, TargetRotation,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateSummary {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub omega: f64,
    /// T = π/Ω
    pub period: f64,
}

impl From<&GateParams> for GateSummary {
    fn from(p: &GateParams) -> Self {
        GateSummary {
            alpha: p.alpha(),
            beta: p.beta(),
            gamma: p.gamma(),
            omega: p.omega(),
            period: p.period(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SynthOutput {
    pub target: TargetRotation,
    pub gate: GateSummary,
    pub couplings: PhysicalCouplings,
    pub lasers: LaserSettings,
    pub rwa: RwaReport,
}

pub fn run_synth(cfg: &SynthConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let target = cfg.target.target()?;
    let p = synthesize(&target, cfg.omega)?;
    let l = &cfg.lasers;
    let lasers = map_to_lasers(&p, l.omega_e[0], l.omega_e[1], l.dipole[0], l.dipole[1])?;
    Ok(SynthOutput {
        target,
        gate: GateSummary::from(&p),
        couplings: params_to_physical(&p),
        rwa: check_rwa(&p, &lasers, cfg.rwa_threshold),
        lasers,
    })
}
