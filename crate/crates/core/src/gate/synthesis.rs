use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::str::FromStr;

use serde::Serialize;

use super::params::{bloch_vector, canonical_axis_angles, GateParams};
use crate::error::{Error, Result};
use crate::quantum::{c, LogicalBasis, LogicalOperator, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxisLabel {
    X,
    Y,
    Z,
}

impl AxisLabel {
    /// (α, β) of the bright state whose Bloch vector is this axis.
    pub fn axis_angles(self) -> (f64, f64) {
        match self {
            AxisLabel::X => (FRAC_PI_4, 0.0),
            AxisLabel::Y => (FRAC_PI_4, FRAC_PI_2),
            AxisLabel::Z => (0.0, 0.0),
        }
    }
}

impl FromStr for AxisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(AxisLabel::X),
            "Y" | "y" => Ok(AxisLabel::Y),
            "Z" | "z" => Ok(AxisLabel::Z),
            other => Err(Error::InvalidInput(format!(
                "unknown axis label {other:?} (expected X, Y or Z)"
            ))),
        }
    }
}

/// A target rotation exp(−i(φ/2) n·σ) on the logical qubit.
///
/// The axis n is the Bloch vector of |b⟩, so the rotation equals
/// exp(−i(φ/2)(|b⟩⟨b| − |d⟩⟨d|)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TargetRotation {
    axis: [f64; 3],
    angle: f64,
}

impl TargetRotation {
    /// Angles in [0, 2π] are kept as given (0 and 2π are distinct
    /// representatives of the identity); anything else is wrapped into
    /// [0, 2π).
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidInput(format!(
                "rotation angle {angle} is not finite"
            )));
        }
        if !axis.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("rotation axis is not finite".into()));
        }
        let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidInput(
                "rotation axis has zero Bloch norm".into(),
            ));
        }
        let angle = if (0.0..=TAU).contains(&angle) {
            angle
        } else {
            angle.rem_euclid(TAU)
        };
        Ok(TargetRotation {
            axis: axis.map(|v| v / norm),
            angle,
        })
    }

    pub fn from_axis_angles(alpha: f64, beta: f64, angle: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidInput("axis angles are not finite".into()));
        }
        TargetRotation::new(bloch_vector(alpha, beta), angle)
    }

    pub fn from_label(label: AxisLabel, angle: f64) -> Result<Self> {
        let (alpha, beta) = label.axis_angles();
        TargetRotation::from_axis_angles(alpha, beta, angle)
    }

    /// Axis-angle form of an arbitrary 2×2 unitary, up to global phase.
    /// The angle is in [0, 2π]; the identity maps to angle 0 about Z.
    pub fn from_unitary(u: &LogicalOperator) -> Result<Self> {
        if u.basis() != LogicalBasis::Computational {
            return Err(Error::InvalidInput(
                "target unitary must be given in the (|0>, |1>) basis".into(),
            ));
        }
        let m = u.matrix();
        // Project onto SU(2): V = cos(φ/2) I − i sin(φ/2) n·σ.
        let v = m / m.determinant().sqrt();
        let half_cos = ((v[(0, 0)] + v[(1, 1)]).re / 2.0).clamp(-1.0, 1.0);
        let sx = -(v[(0, 1)].im + v[(1, 0)].im) / 2.0;
        let sy = (v[(1, 0)].re - v[(0, 1)].re) / 2.0;
        let sz = (v[(1, 1)].im - v[(0, 0)].im) / 2.0;
        let half_sin = (sx * sx + sy * sy + sz * sz).sqrt();
        if half_sin < 1e-15 {
            let angle = if half_cos > 0.0 { 0.0 } else { TAU };
            return TargetRotation::new([0.0, 0.0, 1.0], angle);
        }
        let angle = 2.0 * half_sin.atan2(half_cos);
        TargetRotation::new([sx, sy, sz], angle)
    }

    /// Unit Bloch vector of the rotation axis.
    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// (α, β) of the axis, with α ∈ [0, π/2] and β ∈ [0, 2π).
    pub fn axis_angles(&self) -> (f64, f64) {
        canonical_axis_angles(&self.axis)
    }

    pub fn is_identity(&self) -> bool {
        self.angle == 0.0 || self.angle == TAU
    }

    /// cos(φ/2) I − i sin(φ/2) n·σ
    pub fn unitary(&self) -> LogicalOperator {
        let (s, co) = (self.angle / 2.0).sin_cos();
        let [x, y, z] = self.axis;
        let m = Mat2::new(
            c(co, -s * z),
            c(-s * y, -s * x),
            c(s * y, -s * x),
            c(co, s * z),
        );
        LogicalOperator::trusted(m, LogicalBasis::Computational)
    }
}

/// Gate parameters realising `target` at Rabi scale `omega`.
///
/// γ = arcsin(φ/π − 1) on the principal branch and (α, β) come from the axis.
/// For the identity (φ = 0 or 2π) the axis is irrelevant and α = β = 0.
pub fn synthesize(target: &TargetRotation, omega: f64) -> Result<GateParams> {
    let phi = target.angle();
    if !(0.0..=TAU).contains(&phi) {
        return Err(Error::InvalidInput(format!(
            "rotation angle {phi} outside [0, 2pi]"
        )));
    }
    let gamma = (phi / PI - 1.0).clamp(-1.0, 1.0).asin();
    if target.is_identity() {
        return GateParams::new(0.0, 0.0, gamma, omega);
    }
    let (alpha, beta) = target.axis_angles();
    GateParams::new(alpha, beta, gamma, omega)
}
