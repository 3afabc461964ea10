//! Degenerate perturbation theory for Θ and τ, on both the Dirac
//! Hamiltonian and the Fock-labeled model.

use dnc_graphene::hamiltonian::{Model, ModelKind, Valley};
use dnc_graphene::spectral::{perturbation_report, DEFAULT_GROUP_TOL};

fn main() -> dnc_graphene::Result<()> {
    for (kind, theta, tau) in [
        (ModelKind::Dirac(Valley::K), 1.0, 0.0),
        (ModelKind::Dirac(Valley::K), 0.0, 1.0),
        (ModelKind::PaperLabeled, 0.0, 1.0),
    ] {
        println!("{kind:?}, theta = {theta}, tau = {tau}");
        let report = perturbation_report(&Model::new(kind, 16)?, theta, tau, 2, DEFAULT_GROUP_TOL)?;
        for l in &report.levels {
            let lo = l.second_order.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = l.second_order.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            println!(
                "  n={:>2} E0={:>8.5} deg={:>2} max|E1|={:.3e} E2 in [{lo:.6}, {hi:.6}]",
                l.level_index, l.e0, l.degeneracy, l.first_order_max_abs
            );
        }
    }
    Ok(())
}
