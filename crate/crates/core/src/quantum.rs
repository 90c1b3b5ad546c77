//! Dense complex linear algebra on the fixed three-level space.
//!
//! Every 3×3 matrix in the crate uses the ordered basis (|e⟩, |0⟩, |1⟩); the
//! logical 2×2 blocks use (|0⟩, |1⟩). Bright/dark views are computed on demand
//! from [`BrightDarkBasis`] and never stored as a second convention.

use std::fmt;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::BrightDarkBasis;

pub type C64 = Complex<f64>;
pub type Mat3 = Matrix3<C64>;
pub type Mat2 = Matrix2<C64>;

/// Index of |e⟩.
pub const EXCITED: usize = 0;
/// Index of |0⟩.
pub const GROUND0: usize = 1;
/// Index of |1⟩.
pub const GROUND1: usize = 2;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

/// Numerical thresholds used to validate operator roles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Max elementwise |A_ij − conj(A_ji)|.
    pub hermiticity_tol: f64,
    /// Frobenius norm of U†U − I.
    pub unitarity_tol: f64,
    /// |Tr ρ − 1|.
    pub trace_tol: f64,
    /// Smallest admissible eigenvalue of a density matrix is −positivity_tol.
    pub positivity_tol: f64,
    /// Imaginary residue allowed when a quantity must be real.
    pub phase_align_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity_tol: 1e-12,
            unitarity_tol: 1e-12,
            trace_tol: 1e-10,
            positivity_tol: 1e-10,
            phase_align_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new(
        hermiticity_tol: f64,
        unitarity_tol: f64,
        trace_tol: f64,
        positivity_tol: f64,
        phase_align_tol: f64,
    ) -> Result<Self> {
        let t = Tolerances {
            hermiticity_tol,
            unitarity_tol,
            trace_tol,
            positivity_tol,
            phase_align_tol,
        };
        let all = [
            hermiticity_tol,
            unitarity_tol,
            trace_tol,
            positivity_tol,
            phase_align_tol,
        ];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(t)
        } else {
            Err(Error::InvalidInput(format!(
                "tolerances must be strictly positive and finite: {t:?}"
            )))
        }
    }

    /// Bounds for states produced by the fixed-step Lindblad integrator, which
    /// preserves positivity only up to its truncation error.
    pub fn integrator_output() -> Self {
        Tolerances {
            hermiticity_tol: 1e-10,
            trace_tol: 1e-6,
            positivity_tol: 1e-8,
            ..Tolerances::default()
        }
    }
}

/// A state vector on (|e⟩, |0⟩, |1⟩).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ket3(Vector3<C64>);

impl Ket3 {
    pub fn new(excited: C64, ground0: C64, ground1: C64) -> Self {
        Ket3(Vector3::new(excited, ground0, ground1))
    }

    pub fn from_vector(v: Vector3<C64>) -> Self {
        Ket3(v)
    }

    pub fn basis(index: usize) -> Self {
        let mut v = Vector3::zeros();
        v[index] = c(1.0, 0.0);
        Ket3(v)
    }

    pub fn vector(&self) -> &Vector3<C64> {
        &self.0
    }

    pub fn excited(&self) -> C64 {
        self.0[EXCITED]
    }

    /// The (|0⟩, |1⟩) components.
    pub fn logical(&self) -> Vector2<C64> {
        Vector2::new(self.0[GROUND0], self.0[GROUND1])
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Ket3) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn apply(&self, op: &Mat3) -> Ket3 {
        Ket3(op * self.0)
    }

    /// |ψ⟩⟨ψ| as a raw matrix.
    pub fn outer(&self) -> Mat3 {
        self.0 * self.0.adjoint()
    }

    /// |ψ⟩⟨ψ| as a validated density operator. The ket must be normalized.
    pub fn projector(&self) -> Result<ThreeLevelOperator> {
        if !self.is_normalized(1e-12) {
            return Err(Error::ContractViolation(format!(
                "projector of a non-normalized ket (norm {})",
                self.norm()
            )));
        }
        ThreeLevelOperator::new(self.outer(), Role::Density)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Hamiltonian,
    Unitary,
    Density,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Hamiltonian => "hamiltonian",
            Role::Unitary => "unitary",
            Role::Density => "density",
        };
        f.write_str(s)
    }
}

/// A 3×3 complex matrix tagged with the role it plays. The role's invariant
/// is checked on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeLevelOperator {
    matrix: Mat3,
    role: Role,
}

impl ThreeLevelOperator {
    pub fn new(matrix: Mat3, role: Role) -> Result<Self> {
        Self::with_tolerances(matrix, role, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: Mat3, role: Role, tol: &Tolerances) -> Result<Self> {
        ensure_finite(matrix.iter())?;
        match role {
            Role::Hamiltonian => check_hermitian(&matrix, tol.hermiticity_tol)?,
            Role::Unitary => {
                let dev = unitarity_deviation(&matrix);
                if dev >= tol.unitarity_tol {
                    return Err(Error::ContractViolation(format!(
                        "operator is not unitary: ||U†U - I||_F = {dev:e}"
                    )));
                }
            }
            Role::Density => check_density(&matrix, tol)?,
        }
        Ok(ThreeLevelOperator { matrix, role })
    }

    /// Wraps a matrix whose role invariant holds by construction.
    pub(crate) fn trusted(matrix: Mat3, role: Role) -> Self {
        debug_assert!(Self::new(matrix, role).is_ok(), "untrusted {role} operator");
        ThreeLevelOperator { matrix, role }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn into_matrix(self) -> Mat3 {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// The logical (|0⟩, |1⟩) block.
    pub fn logical_block(&self) -> Mat2 {
        logical_block(&self.matrix)
    }
}

pub fn logical_block(m: &Mat3) -> Mat2 {
    m.fixed_view::<2, 2>(GROUND0, GROUND0).into_owned()
}

fn ensure_finite<'a>(mut entries: impl Iterator<Item = &'a C64>) -> Result<()> {
    if entries.all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "matrix has NaN or infinite entries".into(),
        ))
    }
}

/// max_ij |A_ij − conj(A_ji)|
pub fn hermiticity_deviation(m: &Mat3) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// ‖U†U − I‖_F
pub fn unitarity_deviation<const N: usize>(u: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    (u.adjoint() * u - nalgebra::SMatrix::<C64, N, N>::identity()).norm()
}

fn check_hermitian(m: &Mat3, tol: f64) -> Result<()> {
    let dev = hermiticity_deviation(m);
    if dev > tol {
        Err(Error::ContractViolation(format!(
            "matrix is not Hermitian: max deviation {dev:e}"
        )))
    } else {
        Ok(())
    }
}

fn check_density(m: &Mat3, tol: &Tolerances) -> Result<()> {
    check_hermitian(m, tol.hermiticity_tol)?;
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol.trace_tol || tr.im.abs() > tol.trace_tol {
        return Err(Error::ContractViolation(format!(
            "density matrix trace is {tr}, expected 1"
        )));
    }
    let min_eig = min_eigenvalue(m);
    if min_eig <= -tol.positivity_tol {
        return Err(Error::ContractViolation(format!(
            "density matrix has negative eigenvalue {min_eig:e}"
        )));
    }
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &Mat3) -> f64 {
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    herm.symmetric_eigenvalues().min()
}

/// exp(−iHt) for a Hermitian matrix, by eigendecomposition. Hermiticity is
/// checked against the default tolerance.
pub fn expm_hermitian_matrix(h: &Mat3, t: f64) -> Result<Mat3> {
    ensure_finite(h.iter())?;
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "evolution time {t} is not finite"
        )));
    }
    check_hermitian(h, Tolerances::default().hermiticity_tol)?;
    Ok(expm_hermitian_unchecked(h, t))
}

pub(crate) fn expm_hermitian_unchecked(h: &Mat3, t: f64) -> Mat3 {
    // Symmetrize so the eigensolver sees an exactly Hermitian input.
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let phases = Matrix3::from_diagonal(&eig.eigenvalues.map(|lambda| cis(-lambda * t)));
    let v = eig.eigenvectors;
    v * phases * v.adjoint()
}

/// U = exp(−iHt) for a Hamiltonian operator.
pub fn hermitian_expm(h: &ThreeLevelOperator, t: f64) -> Result<ThreeLevelOperator> {
    if h.role() != Role::Hamiltonian {
        return Err(Error::ContractViolation(format!(
            "hermitian_expm expects a hamiltonian, got a {} operator",
            h.role()
        )));
    }
    let u = expm_hermitian_matrix(h.matrix(), t)?;
    ThreeLevelOperator::new(u, Role::Unitary)
}

/// Tr(ρ ρ′).
///
/// This is the overlap-style fidelity; for identical mixed states it is the
/// purity, not 1. The sum is arranged so that swapping the arguments gives a
/// bit-identical result.
pub fn state_fidelity(rho: &ThreeLevelOperator, rho_prime: &ThreeLevelOperator) -> Result<f64> {
    let tol = Tolerances::default();
    for op in [rho, rho_prime] {
        if op.role() != Role::Density {
            return Err(Error::ContractViolation(format!(
                "state_fidelity expects density operators, got a {} operator",
                op.role()
            )));
        }
    }
    let (a, b) = (rho.matrix(), rho_prime.matrix());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..3 {
        acc += a[(i, i)] * b[(i, i)];
        for j in (i + 1)..3 {
            acc += a[(i, j)] * b[(j, i)] + a[(j, i)] * b[(i, j)];
        }
    }
    if acc.im.abs() > tol.phase_align_tol {
        return Err(Error::ContractViolation(format!(
            "Tr(rho rho') has imaginary residue {:e}",
            acc.im
        )));
    }
    Ok(acc.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicalBasis {
    /// (|0⟩, |1⟩)
    Computational,
    /// (|b⟩, |d⟩) for some bright/dark pair.
    BrightDark,
}

/// A 2×2 unitary gate on the logical subspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalOperator {
    matrix: Mat2,
    basis: LogicalBasis,
}

impl LogicalOperator {
    pub fn new(matrix: Mat2, basis: LogicalBasis) -> Result<Self> {
        ensure_finite(matrix.iter())?;
        let dev = unitarity_deviation(&matrix);
        if dev >= Tolerances::default().unitarity_tol {
            return Err(Error::ContractViolation(format!(
                "logical gate is not unitary: ||U†U - I||_F = {dev:e}"
            )));
        }
        Ok(LogicalOperator { matrix, basis })
    }

    pub(crate) fn trusted(matrix: Mat2, basis: LogicalBasis) -> Self {
        debug_assert!(Self::new(matrix, basis).is_ok(), "untrusted logical gate");
        LogicalOperator { matrix, basis }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn basis(&self) -> LogicalBasis {
        self.basis
    }

    /// The same gate times a unit-modulus scalar.
    pub fn with_phase(&self, phase: f64) -> Self {
        LogicalOperator {
            matrix: self.matrix * cis(phase),
            basis: self.basis,
        }
    }
}

/// min over |c| = 1 of ‖U − cV‖_F.
///
/// For unitaries this equals √(2d − 2|Tr(U†V)|) with d = 2. The minimiser is
/// c = Tr(V†U)/|Tr(V†U)|; the norm is evaluated at that phase directly since
/// the closed form cancels catastrophically near zero distance.
pub fn distance_up_to_phase(u: &LogicalOperator, v: &LogicalOperator) -> Result<f64> {
    if u.basis() != v.basis() {
        return Err(Error::InvalidInput(format!(
            "cannot compare gates in different bases ({:?} vs {:?})",
            u.basis(),
            v.basis()
        )));
    }
    let overlap = (v.matrix().adjoint() * u.matrix()).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    Ok((u.matrix() - v.matrix() * phase).norm())
}

/// cos(θ/2)e^{iφ/2}|b⟩ + sin(θ/2)e^{−iφ/2}|d⟩
pub fn bloch_input_state(theta: f64, varphi: f64, basis: &BrightDarkBasis) -> Result<Ket3> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidInput(format!(
            "polar angle {theta} outside [0, pi]"
        )));
    }
    if !(0.0..=std::f64::consts::TAU).contains(&varphi) {
        return Err(Error::InvalidInput(format!(
            "azimuthal angle {varphi} outside [0, 2pi]"
        )));
    }
    let up = cis(varphi / 2.0) * (theta / 2.0).cos();
    let down = cis(-varphi / 2.0) * (theta / 2.0).sin();
    let mut v = basis.bright.vector() * up + basis.dark.vector() * down;
    v[EXCITED] = c(0.0, 0.0);
    Ok(Ket3(v))
}
