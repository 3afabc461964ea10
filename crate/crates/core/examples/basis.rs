//! Two-mode truncated Fock basis and its ladder operators.

use dnc_graphene::fock::{FockIndex, LadderSet, TruncatedBasis};

fn main() {
    let basis = TruncatedBasis::new(3);
    println!("N_cut = {}, dim = {}", basis.cutoff(), basis.dim());
    let ladders = LadderSet::new(&basis);
    let state = FockIndex::new(1, 2);
    let i = basis.index_of(state).expect("inside the basis");
    println!("{state} has index {i}, edge: {}", basis.is_edge(i));
    let bra = FockIndex::new(1, 1);
    for (j, amp) in ladders.a_g.row(basis.index_of(bra).unwrap()) {
        println!("<{}, {}| a_g {} = {}", bra.n_d, bra.n_g, basis.state(j), amp.re);
    }
    let commutator = ladders.a_d.commutator(&ladders.a_d_dag).expect("same dimension");
    let edge = basis.index_of(FockIndex::new(3, 0)).unwrap();
    // truncation spoils the commutator on the edge: 1 - (N_cut + 1)
    println!("[a_d, a_d^+] on the edge |3,0>: {}", commutator.get(edge, edge).re);
}
