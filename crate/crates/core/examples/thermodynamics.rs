//! Extreme-relativistic Fermi gas with and without a negative energy shift.

use dnc_graphene::phenomenology::ordering_table;

fn main() -> dnc_graphene::Result<()> {
    let t = ordering_table(1.0, -0.01, 2.0, 1.0, 1.0)?;
    println!("{:>6} {:>14} {:>14}  computed  claimed", "", "commutative", "shifted");
    for r in &t.rows {
        println!(
            "{:>6} {:>14.6e} {:>14.6e}  {:^8}  {:^9}",
            r.quantity,
            r.commutative,
            r.dnc,
            r.relation.symbol(),
            r.claimed.symbol()
        );
    }
    Ok(())
}
