//! Upper bound on τ from a 1 meV energy resolution, with both constant sets.

use dnc_graphene::phenomenology::{tau_upper_bound, BoundInput};
use dnc_graphene::units::ConstantsSet;

fn main() -> dnc_graphene::Result<()> {
    for set in [ConstantsSet::Paper, ConstantsSet::Codata] {
        let c = set.constants();
        let input = BoundInput { delta_e: 1e-3, l_b: c.magnetic_length(1.0)?, v_f: c.v_f, hbar: c.hbar };
        let r = tau_upper_bound(&input, &c)?;
        println!(
            "{:<7} l_B = {:.4e} m  sqrt(tau) <= {:.4e} 1/m = {:.3} eV",
            set.name(),
            input.l_b,
            r.sqrt_tau_max_m,
            r.sqrt_tau_max_ev
        );
    }
    Ok(())
}
