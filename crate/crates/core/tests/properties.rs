use dnc_graphene::fock::{FockIndex, Ladder, LadderSet, Mode, OperatorMatrix, TruncatedBasis};
use dnc_graphene::hamiltonian::{Model, Valley};
use dnc_graphene::phenomenology::{eos, minimal_length, ordering_table, tau_upper_bound, BoundInput};
use dnc_graphene::units::ConstantsSet;
use num_complex::Complex64;
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Ladder> {
    (any::<bool>(), any::<bool>()).prop_map(|(raise, d)| {
        let m = if d { Mode::D } else { Mode::G };
        if raise {
            Ladder::Raise(m)
        } else {
            Ladder::Lower(m)
        }
    })
}

fn dense_product(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn bound(delta_e: f64, l_b: f64) -> f64 {
    let input = BoundInput { delta_e, l_b, v_f: 1e6, hbar: 6e-15 };
    tau_upper_bound(&input, &ConstantsSet::Paper.constants()).unwrap().sqrt_tau_max_m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eos_identities(p_f in 1e-8f64..1e8, g in 1.0f64..8.0, hbar in 1e-3f64..10.0, c in 1e-2f64..1e3) {
        let s = eos(p_f, g, hbar, c).unwrap();
        prop_assert!(rel(s.p, s.u / 3.0) <= 2.0 * f64::EPSILON);
        prop_assert!(rel(s.dp_dn, s.mu / 3.0) <= 2.0 * f64::EPSILON);
        prop_assert_eq!(s.gamma, 4.0 / 3.0);
        prop_assert!(rel(s.u + s.p, s.mu * s.n) < 1e-14);
    }

    #[test]
    fn eos_monotone_in_fermi_momentum(p in 1e-4f64..1e4, step in 1.0001f64..10.0) {
        let a = eos(p, 2.0, 1.0, 1.0).unwrap();
        let b = eos(p * step, 2.0, 1.0, 1.0).unwrap();
        prop_assert!(b.n > a.n && b.u > a.u && b.mu > a.mu && b.p > a.p && b.dp_dn > a.dp_dn);
    }

    #[test]
    fn negative_shift_orders_every_row(e_f in 0.1f64..100.0, frac in 1e-6f64..0.9) {
        let t = ordering_table(e_f, -frac * e_f, 2.0, 1.0, 1.0).unwrap();
        for q in ["n", "u", "mu", "P", "gamma", "dn/dP"] {
            prop_assert_eq!(t.row(q).unwrap().consistent, Some(true));
        }
        prop_assert_eq!(t.row("dP/dn").unwrap().consistent, Some(false));
    }

    #[test]
    fn word_products_match_dense(word in proptest::collection::vec(letter(), 3)) {
        let basis = TruncatedBasis::new(4);
        let ladders = LadderSet::new(&basis);
        let sparse = ladders.word(&word).to_dense();
        let mut dense = OperatorMatrix::identity(basis.dim()).to_dense();
        for l in &word {
            dense = dense_product(&dense, &ladders.letter(*l).to_dense());
        }
        for (r1, r2) in sparse.iter().zip(&dense) {
            for (x, y) in r1.iter().zip(r2) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_index_round_trip(n in 0usize..12, d in 0usize..12, g in 0usize..12) {
        let basis = TruncatedBasis::new(n);
        let s = FockIndex::new(d, g);
        match basis.index_of(s) {
            Some(i) => prop_assert_eq!(basis.state(i), s),
            None => prop_assert!(d > n || g > n),
        }
    }

    #[test]
    fn bound_scaling(delta_e in 1e-9f64..1.0, l_b in 1e-9f64..1e-6, k in 1.5f64..100.0) {
        let base = bound(delta_e, l_b);
        prop_assert!(rel(bound(k * delta_e, l_b), base * k.powf(0.25)) < 1e-12);
        prop_assert!(rel(bound(delta_e, k * l_b), base * k.powf(-0.75)) < 1e-12);
    }

    #[test]
    fn minimal_length_vanishes_only_without_tau(theta in 1e-6f64..1.0, tau in 0.0f64..1.0, y in -5.0f64..5.0) {
        let l = minimal_length(theta, tau, y).unwrap();
        prop_assert_eq!(l == 0.0, tau == 0.0);
        prop_assert_eq!(minimal_length(theta, 0.0, y).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn deformed_hamiltonian_is_hermitian_and_chiral(theta in -0.05f64..0.05, tau in -0.05f64..0.05, kprime in any::<bool>()) {
        let valley = if kprime { Valley::KPrime } else { Valley::K };
        let model = Model::dirac(5, valley).unwrap();
        prop_assert!(model.hamiltonian(theta, tau).hermiticity_defect() < 1e-12);
        // the τ term is off-diagonal in sublattice space, so E -> -E survives it
        let e = model.diagonalize(0.0, tau).unwrap().eigenvalues();
        for (a, b) in e.iter().zip(e.iter().rev()) {
            prop_assert!((a + b).abs() < 1e-9);
        }
    }
}
