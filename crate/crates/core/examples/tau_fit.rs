//! Quadratic fit of the exact ground energy over a τ sweep, checked against
//! second-order perturbation theory.

use dnc_graphene::hamiltonian::{Model, ModelKind};
use dnc_graphene::spectral::{fit_tau_response, perturbation_report, DEFAULT_GROUP_TOL};

fn main() -> dnc_graphene::Result<()> {
    let model = Model::new(ModelKind::PaperLabeled, 14)?;
    let fit = fit_tau_response(&model, 0, &[1e-4, 2e-4, 4e-4, 7e-4, 1e-3])?;
    let rs = perturbation_report(&model, 0.0, 1.0, 0, DEFAULT_GROUP_TOL)?;
    println!("c0 = {:e}, c1 = {:e}, c2 = {:.6}", fit.c0, fit.c1, fit.c2);
    println!("second order: {:.6}", rs.level(0).map_or(f64::NAN, |l| l.second_order[0]));
    if let Some(w) = fit.warning {
        println!("warning: {w}");
    }
    Ok(())
}
