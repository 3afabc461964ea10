//! Exact diagonalization, closed-form Landau levels, degenerate perturbation
//! theory and τ-response fits.

mod catalog;
mod eigen;
mod fit;
mod perturbation;

pub use catalog::{linear_y_corrections, matrix_element_catalog, CatalogEntry, LinearYEntry};
pub use eigen::{
    connected_blocks, exact_diagonalize, EigenPair, EigenSolution, HERMITIAN_TOL, RELIABILITY_TOL,
};
pub use fit::{convergence_study, fit_tau_response, track, ConvergenceRow, TauFit, MAX_FIT_TAU};
pub use perturbation::{
    first_order_degenerate, group_degenerate, landau_index, perturbation_report, reference_state,
    second_order_shift, DegenerateLevel, FirstOrder, LevelReport, LocalState, PerturbationReport,
    DEFAULT_GROUP_TOL, DENOMINATOR_GUARD,
};

use crate::hamiltonian::{Model, PhysParams, SpinorOperator};
use crate::error::Result;

/// `(E₊, E₋) = ±(ħ v_F / l_B) √(2n)`, in the energy unit of `params`.
pub fn closed_form_spectrum(n: usize, params: &PhysParams) -> (f64, f64) {
    let e = params.energy_unit() * (2.0 * n as f64).sqrt();
    (e, -e)
}

/// Diagonalize a spinor operator built on `basis`.
pub fn exact_diagonalize_spinor(
    h: &SpinorOperator,
    basis: &crate::fock::TruncatedBasis,
) -> Result<EigenSolution> {
    let dim = basis.dim();
    let edge: Vec<bool> = (0..2 * dim).map(|i| basis.is_edge(i % dim)).collect();
    let sub: Vec<bool> = (0..2 * dim).map(|i| i >= dim).collect();
    exact_diagonalize(&h.flatten(), &edge, Some(&sub))
}

impl Model {
    /// Spectrum of `H(Θ, τ)` in natural units.
    pub fn diagonalize(&self, theta: f64, tau: f64) -> Result<EigenSolution> {
        exact_diagonalize(
            &self.hamiltonian(theta, tau),
            &self.edge,
            self.sublattice.as_deref(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{HamiltonianTerms, Valley};

    #[test]
    fn closed_form_values() {
        let p = PhysParams::natural(4);
        assert_eq!(closed_form_spectrum(0, &p), (0.0, -0.0));
        let (plus, minus) = closed_form_spectrum(1, &p);
        assert!((plus - 2f64.sqrt()).abs() < 1e-15 && plus == -minus);
        let phys = PhysParams {
            l_b: 2.5e-8,
            v_f: 1e6,
            hbar: 6.58e-16,
            ..p
        };
        let (e, _) = closed_form_spectrum(1, &phys);
        assert!((e - 0.0372).abs() < 5e-5, "{e}");
    }

    #[test]
    fn spinor_and_model_paths_agree() {
        let p = PhysParams::natural(6).with_deformation(0.0, 0.02);
        let terms = HamiltonianTerms::build(&p).unwrap();
        let a = exact_diagonalize_spinor(&terms.total(), terms.basis()).unwrap();
        let b = Model::dirac(6, Valley::K).unwrap().diagonalize(0.0, 0.02).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn h0_levels_and_degeneracy() {
        let m = Model::dirac(12, Valley::K).unwrap();
        let sol = m.diagonalize(0.0, 0.0).unwrap();
        for e in sol.reliable_eigenvalues() {
            let n = (e * e / 2.0).round();
            assert!((e.abs() - (2.0 * n).sqrt()).abs() < 1e-12);
        }
        assert!(sol.orthonormality_defect() < 1e-12);
        assert!(sol.max_residual() < 1e-12);
    }

    #[test]
    fn chiral_and_parity_structure_under_tau() {
        let m = Model::dirac(8, Valley::K).unwrap();
        let sol = m.diagonalize(0.0, 0.03).unwrap();
        let e = sol.eigenvalues();
        for (a, b) in e.iter().zip(e.iter().rev()) {
            assert!((a + b).abs() < 1e-12);
        }
        // H(τ) splits into the two parity sectors of σ_z ⊗ (−1)^{n_d+n_g}
        assert_eq!(sol.blocks().len(), 2);
    }
}
