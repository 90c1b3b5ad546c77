use std::f64::consts::PI;

use serde::Serialize;

use super::coherent::{detuning_fidelity_exact, pulse_area_fidelity_exact};
use super::ErrorKind;
use crate::error::{Error, Result};

/// Most and least robust input polar angles for a coherent error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub error: ErrorKind,
    pub gamma: f64,
    pub error_product: f64,
    pub argmin_theta: f64,
    pub min: f64,
    pub argmax_theta: f64,
    pub max: f64,
    /// Analytic location of the minimum from the small-error expansion, if
    /// one exists.
    pub predicted_argmin: Option<f64>,
    pub grid_step: f64,
}

/// Grid search of the exact fidelity over θ ∈ [0, π].
///
/// Ties are resolved towards the smaller θ.
pub fn sensitivity_extremes(
    kind: ErrorKind,
    gamma: f64,
    product: f64,
    grid_points: usize,
) -> Result<SensitivityReport> {
    if grid_points < 2 {
        return Err(Error::InvalidInput(format!(
            "sensitivity grid needs at least 2 points, got {grid_points}"
        )));
    }
    let eval: fn(f64, f64, f64) -> Result<f64> = match kind {
        ErrorKind::PulseArea => |t, g, e| Ok(pulse_area_fidelity_exact(t, g, e)?.value),
        ErrorKind::Detuning => |t, g, e| Ok(detuning_fidelity_exact(t, g, e)?.value),
        ErrorKind::Dephasing => {
            return Err(Error::InvalidInput(
                "sensitivity extremes are defined for coherent errors only".into(),
            ))
        }
    };
    let step = PI / (grid_points - 1) as f64;
    let (mut argmin, mut min) = (0.0, f64::INFINITY);
    let (mut argmax, mut max) = (0.0, f64::NEG_INFINITY);
    for i in 0..grid_points {
        let theta = if i + 1 == grid_points {
            PI
        } else {
            i as f64 * step
        };
        let v = eval(theta, gamma, product)?;
        if v < min {
            (argmin, min) = (theta, v);
        }
        if v > max {
            (argmax, max) = (theta, v);
        }
    }
    let cos2 = gamma.cos().powi(2);
    let predicted_argmin = match kind {
        ErrorKind::PulseArea if cos2 > 0.0 => Some(0.0),
        // cos²(θ/2) = 1/(2cos²γ) when attainable.
        ErrorKind::Detuning if cos2 >= 0.5 => Some(2.0 * (0.5 / cos2).sqrt().acos()),
        ErrorKind::Detuning => Some(0.0),
        _ => None,
    };
    Ok(SensitivityReport {
        error: kind,
        gamma,
        error_product: product,
        argmin_theta: argmin,
        min,
        argmax_theta: argmax,
        max,
        predicted_argmin,
        grid_step: step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn pulse_area_extremes() {
        for gamma in [-1.2, -0.3, 0.0, 0.8] {
            let r = sensitivity_extremes(ErrorKind::PulseArea, gamma, 0.1, 181).unwrap();
            assert_eq!(r.argmin_theta, 0.0);
            assert_eq!(r.argmax_theta, PI);
            assert_eq!(r.max, 1.0);
            assert_eq!(r.predicted_argmin, Some(0.0));
        }
    }

    #[test]
    fn detuning_argmin_at_equal_populations() {
        let r = sensitivity_extremes(ErrorKind::Detuning, 0.0, 0.05, 181).unwrap();
        assert!((r.argmin_theta - FRAC_PI_2).abs() <= r.grid_step);
        assert!((r.predicted_argmin.unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(r.argmax_theta, PI);
    }

    #[test]
    fn detuning_argmin_follows_condition() {
        let gamma = 0.5f64;
        let r = sensitivity_extremes(ErrorKind::Detuning, gamma, 0.02, 721).unwrap();
        let predicted = r.predicted_argmin.unwrap();
        let cos_half = (predicted / 2.0).cos();
        assert!((cos_half * cos_half - 1.0 / (2.0 * gamma.cos().powi(2))).abs() < 1e-12);
        assert!((r.argmin_theta - predicted).abs() <= 2.0 * r.grid_step);
    }

    #[test]
    fn detuning_unattainable_condition_puts_argmin_at_zero() {
        let r = sensitivity_extremes(ErrorKind::Detuning, 1.0, 0.05, 181).unwrap();
        assert_eq!(r.argmin_theta, 0.0);
        assert_eq!(r.predicted_argmin, Some(0.0));
    }

    #[test]
    fn rejects_dephasing_and_tiny_grids() {
        assert!(sensitivity_extremes(ErrorKind::Dephasing, 0.0, 0.1, 10).is_err());
        assert!(sensitivity_extremes(ErrorKind::PulseArea, 0.0, 0.1, 1).is_err());
    }
}
