use std::f64::consts::TAU;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How to average over the input-state Bloch sphere with the uniform measure
/// sin θ dθ dφ / 4π.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SphereQuadrature {
    /// Gauss–Legendre in cos θ times the periodic trapezoid rule in φ.
    GaussLegendre {
        theta_nodes: usize,
        phi_nodes: usize,
    },
    /// Uniform random points on the sphere.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        SphereQuadrature::GaussLegendre {
            theta_nodes: 32,
            phi_nodes: 64,
        }
    }
}

impl SphereQuadrature {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SphereQuadrature::GaussLegendre {
                theta_nodes,
                phi_nodes,
            } if theta_nodes == 0 || phi_nodes == 0 || theta_nodes > 4096 || phi_nodes > 4096 => {
                Err(Error::InvalidInput(format!(
                    "quadrature node counts must be in 1..=4096, got {theta_nodes} x {phi_nodes}"
                )))
            }
            SphereQuadrature::MonteCarlo { samples, .. }
                if !(2..=10_000_000).contains(&samples) =>
            {
                Err(Error::InvalidInput(format!(
                    "Monte Carlo sample count must be in 2..=10000000, got {samples}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self, SphereQuadrature::MonteCarlo { .. })
    }

    /// Sample points (θ, φ) and weights summing to one.
    pub fn points(&self) -> Result<Vec<(f64, f64, f64)>> {
        self.validate()?;
        Ok(match *self {
            SphereQuadrature::GaussLegendre {
                theta_nodes,
                phi_nodes,
            } => {
                let rule = GaussLegendre::new(NonZeroUsize::new(theta_nodes).expect("validated"));
                let phi_weight = 1.0 / phi_nodes as f64;
                let mut pts = Vec::with_capacity(theta_nodes * phi_nodes);
                for &(x, w) in rule.as_node_weight_pairs() {
                    let theta = x.clamp(-1.0, 1.0).acos();
                    for k in 0..phi_nodes {
                        let phi = TAU * k as f64 / phi_nodes as f64;
                        pts.push((theta, phi, 0.5 * w * phi_weight));
                    }
                }
                pts
            }
            SphereQuadrature::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let weight = 1.0 / samples as f64;
                (0..samples)
                    .map(|_| {
                        let z: f64 = rng.random_range(-1.0..=1.0);
                        let phi: f64 = rng.random_range(0.0..TAU);
                        (z.acos(), phi, weight)
                    })
                    .collect()
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereAverage {
    pub value: f64,
    /// Standard error of the mean; Monte Carlo only.
    pub standard_error: Option<f64>,
    pub evaluations: usize,
}

/// (1/4π)∫ F(θ, φ) sin θ dθ dφ over the Bloch sphere.
pub fn average_fidelity<F>(evaluator: F, quadrature: &SphereQuadrature) -> Result<SphereAverage>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let points = quadrature.points()?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &(theta, phi, w) in &points {
        let f = evaluator(theta, phi)?;
        sum += w * f;
        sum_sq += w * f * f;
    }
    let standard_error = quadrature.is_monte_carlo().then(|| {
        let n = points.len() as f64;
        let variance = (sum_sq - sum * sum).max(0.0) * n / (n - 1.0);
        (variance / n).sqrt()
    });
    Ok(SphereAverage {
        value: sum,
        standard_error,
        evaluations: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn avg(f: impl Fn(f64, f64) -> f64) -> f64 {
        average_fidelity(|t, p| Ok(f(t, p)), &SphereQuadrature::default())
            .unwrap()
            .value
    }

    #[test]
    fn weights_sum_to_one() {
        let total: f64 = SphereQuadrature::default()
            .points()
            .unwrap()
            .iter()
            .map(|p| p.2)
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(avg(|_, _| 0.73), 0.73, epsilon = 1e-13);
    }

    #[test]
    fn half_angle_moments() {
        assert_abs_diff_eq!(avg(|t, _| (t / 2.0).cos().powi(2)), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            avg(|t, _| (t / 2.0).cos().powi(4)),
            1.0 / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn azimuthal_harmonics_vanish() {
        // sin θ cos φ and sin²θ sin 2φ are orthogonal to constants on the sphere.
        assert_abs_diff_eq!(avg(|t, p| t.sin() * p.cos()), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            avg(|t, p| t.sin().powi(2) * (2.0 * p).sin()),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn monte_carlo_agrees_within_its_error_bar() {
        let q = SphereQuadrature::MonteCarlo {
            samples: 20_000,
            seed: 7,
        };
        let r = average_fidelity(|t, _| Ok((t / 2.0).cos().powi(2)), &q).unwrap();
        let se = r.standard_error.unwrap();
        assert!(se > 0.0 && se < 0.01);
        assert!((r.value - 0.5).abs() < 5.0 * se);
        let again = average_fidelity(|t, _| Ok((t / 2.0).cos().powi(2)), &q).unwrap();
        assert_eq!(r.value, again.value);
    }

    #[test]
    fn rejects_degenerate_rules() {
        let q = SphereQuadrature::GaussLegendre {
            theta_nodes: 0,
            phi_nodes: 4,
        };
        assert!(average_fidelity(|_, _| Ok(1.0), &q).is_err());
        let q = SphereQuadrature::MonteCarlo {
            samples: 1,
            seed: 0,
        };
        assert!(q.validate().is_err());
    }
}
