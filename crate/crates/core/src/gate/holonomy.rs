use serde::Serialize;

use super::hamiltonian::build_h_eff;
use super::params::{BrightDarkBasis, GateParams};
use crate::error::Result;
use crate::quantum::{c, expm_hermitian_matrix, Mat3, GROUND0, GROUND1};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolonomyTolerances {
    /// Bound on ‖U(T) P U(T)† − P‖_F.
    pub cyclicity: f64,
    /// Bound on max |⟨m|H|n⟩| relative to Ω.
    pub dynamical_relative: f64,
}

impl Default for HolonomyTolerances {
    fn default() -> Self {
        HolonomyTolerances {
            cyclicity: 1e-10,
            dynamical_relative: 1e-12,
        }
    }
}

/// Residuals of the two holonomy conditions on the logical subspace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolonomyReport {
    /// ‖U(T) P U(T)† − P‖_F with P the logical projector. Zero iff the
    /// subspace evolves cyclically.
    pub cyclicity_residual: f64,
    /// max over m, n ∈ {b, d} of |⟨m|H|n⟩|. Zero iff there is no dynamical
    /// contribution.
    pub max_dynamical_matrix_element: f64,
    pub omega: f64,
    pub cyclic: bool,
    pub parallel_transport: bool,
    pub pass: bool,
}

pub fn check_holonomy(p: &GateParams) -> HolonomyReport {
    let h = build_h_eff(p, false);
    check_holonomy_with(
        h.matrix(),
        p.period(),
        &p.basis(),
        p.omega(),
        &HolonomyTolerances::default(),
    )
    .expect("effective Hamiltonian is Hermitian")
}

/// Evaluates both conditions for an arbitrary time-independent Hamiltonian
/// held for `period`.
pub fn check_holonomy_with(
    hamiltonian: &Mat3,
    period: f64,
    basis: &BrightDarkBasis,
    omega: f64,
    tol: &HolonomyTolerances,
) -> Result<HolonomyReport> {
    let u = expm_hermitian_matrix(hamiltonian, period)?;
    let mut projector = Mat3::zeros();
    projector[(GROUND0, GROUND0)] = c(1.0, 0.0);
    projector[(GROUND1, GROUND1)] = c(1.0, 0.0);
    let cyclicity_residual = (u * projector * u.adjoint() - projector).norm();

    let logical = [basis.bright, basis.dark];
    let mut max_dynamical_matrix_element: f64 = 0.0;
    for m in &logical {
        for n in &logical {
            let element = m.inner(&n.apply(hamiltonian));
            max_dynamical_matrix_element = max_dynamical_matrix_element.max(element.norm());
        }
    }
    let cyclic = cyclicity_residual < tol.cyclicity;
    let parallel_transport = max_dynamical_matrix_element < tol.dynamical_relative * omega;
    Ok(HolonomyReport {
        cyclicity_residual,
        max_dynamical_matrix_element,
        omega,
        cyclic,
        parallel_transport,
        pass: cyclic && parallel_transport,
    })
}
