//! Canonical algebra on the truncated basis and the deformed relations
//! under Θ, τ, with their second-order residual scaling.

use dnc_graphene::algebra::{build_phase_space, dnc_scaling_study, verify_canonical_algebra};
use dnc_graphene::fock::TruncatedBasis;

fn main() {
    let ops = build_phase_space(&TruncatedBasis::new(20), 1.0);
    for r in &verify_canonical_algebra(&ops, 1e-12).relations {
        println!("{:<12} deviation {:.2e} pass {}", r.relation, r.max_deviation, r.pass);
    }
    let study = dnc_scaling_study(&ops, 0.01, 0.01, 3.5, 1e-13);
    for r in &study.rows {
        let ratio = r.ratio.map_or("exact".to_string(), |x| format!("{x:.3}"));
        println!(
            "{:<12} residual {:.3e} -> {:.3e}  ratio {ratio}",
            r.relation, r.residual_full, r.residual_half
        );
    }
}
