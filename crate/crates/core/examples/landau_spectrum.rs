//! Exact Landau spectrum of the Dirac Hamiltonian at N_cut = 30, compared
//! with ±√(2n), plus the lowest level in eV at 1 T.

use dnc_graphene::hamiltonian::{Model, PhysParams, Valley};
use dnc_graphene::spectral::{closed_form_spectrum, group_degenerate, DEFAULT_GROUP_TOL};
use dnc_graphene::units::ConstantsSet;

fn main() -> dnc_graphene::Result<()> {
    let sol = Model::dirac(30, Valley::K)?.diagonalize(0.0, 0.0)?;
    println!("{:>4} {:>20} {:>20} {:>6}", "n", "E (ED)", "±sqrt(2n)", "deg");
    for level in group_degenerate(&sol, DEFAULT_GROUP_TOL)?.iter().filter(|l| l.landau_index().abs() <= 4) {
        let n = level.landau_index();
        let exact = n.signum() as f64 * (2.0 * n.abs() as f64).sqrt();
        println!("{n:>4} {:>20.15} {exact:>20.15} {:>6}", level.e0, level.degeneracy());
    }
    let p = PhysParams::from_field(1.0, &ConstantsSet::Codata.constants(), 30)?;
    println!("E_1 at 1 T: {:.4} eV", closed_form_spectrum(1, &p).0);
    Ok(())
}
