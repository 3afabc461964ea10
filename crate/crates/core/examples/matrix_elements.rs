//! Ladder-operator matrix elements feeding the second-order τ correction.

use dnc_graphene::fock::TruncatedBasis;
use dnc_graphene::spectral::{linear_y_corrections, matrix_element_catalog};

fn main() -> dnc_graphene::Result<()> {
    let basis = TruncatedBasis::new(4);
    for e in matrix_element_catalog(&basis)? {
        println!(
            "{:<8} {:<16} |0,0> = {:<18} (expected {:.12}, sign {:+} / {:+})",
            e.bra, e.word, e.value, e.expected, e.listed_sign, e.expansion_sign
        );
    }
    for e in linear_y_corrections(&basis)? {
        println!("{:<26} = {} (expected {})", e.description, e.value, e.expected);
    }
    Ok(())
}
