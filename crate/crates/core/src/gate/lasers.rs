use std::f64::consts::TAU;

use serde::Serialize;

use super::params::{params_to_physical, GateParams};
use crate::error::{Error, Result};
use crate::quantum::{cis, C64};

/// Threshold on max_j |Ω_j|/ν_j below which the rotating-wave approximation
/// is accepted.
pub const DEFAULT_RWA_THRESHOLD: f64 = 1e-3;

/// One laser driving |j⟩ ↔ |e⟩ with a square envelope on [0, T].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Drive {
    /// Oscillation frequency ν_j.
    pub nu: f64,
    /// Level splitting ω_ej = ω_e − ω_j.
    pub omega_e: f64,
    /// Envelope amplitude g_j (field units).
    pub envelope: f64,
    /// Dipole matrix element ⟨e|μ·ε_j|j⟩ (frequency per field unit).
    pub dipole: C64,
    /// Laser phase χ_j required so that g_j d_j e^{iχ_j} equals the target
    /// complex Rabi frequency.
    pub phase_offset: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Transition {
    #[serde(flatten)]
    pub drive: Drive,
    /// Δ_j = ν_j − ω_ej
    pub detuning: f64,
}

impl Transition {
    /// Ω_j = g_j d_j e^{iχ_j}
    pub fn rabi_frequency(&self) -> C64 {
        self.drive.dipole * self.drive.envelope * cis(self.drive.phase_offset)
    }
}

impl std::ops::Deref for Transition {
    type Target = Drive;

    fn deref(&self) -> &Drive {
        &self.drive
    }
}

/// Laser settings for the two transitions of the Λ system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LaserSettings {
    transitions: [Transition; 2],
}

impl LaserSettings {
    /// Builds settings from raw laser frequencies; Δ_j = ν_j − ω_ej.
    pub fn from_drives(drives: [Drive; 2]) -> Result<Self> {
        for (j, d) in drives.iter().enumerate() {
            let finite = [
                d.nu,
                d.omega_e,
                d.envelope,
                d.dipole.re,
                d.dipole.im,
                d.phase_offset,
            ]
            .iter()
            .all(|v| v.is_finite());
            if !finite {
                return Err(Error::InvalidInput(format!(
                    "laser {j} has non-finite settings"
                )));
            }
            if d.envelope < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "laser {j} envelope must be non-negative, got {}",
                    d.envelope
                )));
            }
        }
        Ok(LaserSettings {
            transitions: drives.map(|drive| Transition {
                drive,
                detuning: drive.nu - drive.omega_e,
            }),
        })
    }

    pub fn transitions(&self) -> &[Transition; 2] {
        &self.transitions
    }

    /// Δ when Δ₀ = Δ₁, otherwise `None`.
    pub fn shared_detuning(&self) -> Option<f64> {
        let [a, b] = self.transitions;
        (a.detuning == b.detuning).then_some(a.detuning)
    }
}

/// Laser settings realising `p` for the given level splittings and dipole
/// couplings: Δ₀ = Δ₁ = Δ, ν_j = Δ + ω_ej, g_j = |Ω_j|/|d_j|.
pub fn map_to_lasers(
    p: &GateParams,
    omega_e0: f64,
    omega_e1: f64,
    d0: C64,
    d1: C64,
) -> Result<LaserSettings> {
    let k = params_to_physical(p);
    let mut transitions = [None, None];
    for (j, (omega_e, dipole, rabi)) in [(omega_e0, d0, k.omega0), (omega_e1, d1, k.omega1)]
        .into_iter()
        .enumerate()
    {
        if dipole.norm().is_nan() || dipole.norm() == 0.0 {
            return Err(Error::UnreachableTransition(j));
        }
        if !omega_e.is_finite() {
            return Err(Error::InvalidInput(format!(
                "level splitting omega_e{j} is not finite"
            )));
        }
        let phase_offset = if rabi.norm() > 0.0 {
            (rabi.arg() - dipole.arg()).rem_euclid(TAU)
        } else {
            0.0
        };
        transitions[j] = Some(Transition {
            drive: Drive {
                nu: k.delta + omega_e,
                omega_e,
                envelope: rabi.norm() / dipole.norm(),
                dipole,
                phase_offset,
            },
            detuning: k.delta,
        });
    }
    Ok(LaserSettings {
        transitions: transitions.map(|t| t.expect("both transitions set")),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RwaReport {
    /// |Ω_j|/ν_j per transition; infinite when a driven laser has ν_j ≤ 0.
    pub ratios: [f64; 2],
    pub max_ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Checks |Ω_j| ≪ ν_j: passes iff max_j |Ω_j|/ν_j < threshold.
pub fn check_rwa(p: &GateParams, lasers: &LaserSettings, threshold: f64) -> RwaReport {
    let k = params_to_physical(p);
    let ratios = [k.omega0, k.omega1]
        .iter()
        .zip(lasers.transitions())
        .map(|(rabi, t)| {
            let r = rabi.norm();
            if r == 0.0 {
                0.0
            } else if t.nu <= 0.0 {
                f64::INFINITY
            } else {
                r / t.nu
            }
        })
        .collect::<Vec<_>>();
    let ratios = [ratios[0], ratios[1]];
    let max_ratio = ratios[0].max(ratios[1]);
    RwaReport {
        ratios,
        max_ratio,
        threshold,
        pass: max_ratio < threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::c;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    #[test]
    fn resonant_driving_at_zero_gamma() {
        let p = GateParams::new(0.4, 1.0, 0.0, 1.0).unwrap();
        let l = map_to_lasers(&p, 100.0, 120.0, c(1.0, 0.0), c(0.5, 0.5)).unwrap();
        assert_eq!(l.transitions()[0].nu, 100.0);
        assert_eq!(l.transitions()[1].nu, 120.0);
        assert_eq!(l.shared_detuning(), Some(0.0));
    }

    #[test]
    fn identity_gate_has_no_envelope() {
        let p = GateParams::new(0.4, 1.0, FRAC_PI_2, 1.0).unwrap();
        let l = map_to_lasers(&p, 100.0, 120.0, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        for (t, we) in l.transitions().iter().zip([100.0, 120.0]) {
            assert!(t.envelope < 1e-16);
            assert_eq!(t.nu, we - 2.0);
        }
    }

    #[test]
    fn substitution_example() {
        let alpha = 0.3;
        let p = GateParams::new(alpha, 0.0, FRAC_PI_6, 1.0).unwrap();
        let l = map_to_lasers(&p, 100.0, 100.0, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let t0 = l.transitions()[0];
        assert_abs_diff_eq!(t0.nu, 99.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            t0.envelope,
            alpha.cos() * 3f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
        assert_eq!(t0.detuning, l.transitions()[1].detuning);
    }

    #[test]
    fn phase_offset_reconstructs_complex_coupling() {
        let p = GateParams::new(0.6, 2.5, -0.3, 1.7).unwrap();
        let d1 = c(0.2, -0.9);
        let l = map_to_lasers(&p, 50.0, 60.0, c(-1.0, 0.0), d1).unwrap();
        let k = params_to_physical(&p);
        assert!((l.transitions()[0].rabi_frequency() - k.omega0).norm() < 1e-14);
        assert!((l.transitions()[1].rabi_frequency() - k.omega1).norm() < 1e-14);
    }

    #[test]
    fn zero_dipole_is_unreachable() {
        let p = GateParams::new(0.6, 2.5, -0.3, 1.7).unwrap();
        let err = map_to_lasers(&p, 50.0, 60.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::UnreachableTransition(1)));
    }

    #[test]
    fn rwa_examples() {
        let p = GateParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let far = map_to_lasers(&p, 1e5, 1e5, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(check_rwa(&p, &far, DEFAULT_RWA_THRESHOLD).pass);
        let near = map_to_lasers(&p, 10.0, 10.0, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(!check_rwa(&p, &near, DEFAULT_RWA_THRESHOLD).pass);
        // |Ω₀|/ν₀ = 1/1000 exactly: strict inequality fails.
        let edge = map_to_lasers(&p, 1000.0, 1000.0, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let report = check_rwa(&p, &edge, DEFAULT_RWA_THRESHOLD);
        assert_eq!(report.max_ratio, DEFAULT_RWA_THRESHOLD);
        assert!(!report.pass);
    }

    #[test]
    fn negative_envelope_rejected() {
        let d = Drive {
            nu: 1.0,
            omega_e: 1.0,
            envelope: -1.0,
            dipole: c(1.0, 0.0),
            phase_offset: 0.0,
        };
        assert!(LaserSettings::from_drives([d, d]).is_err());
    }
}
