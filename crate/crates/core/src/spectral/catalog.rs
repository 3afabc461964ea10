use serde::Serialize;

use crate::algebra::{build_phase_space, build_tau_products};
use crate::error::{Error, Result};
use crate::fock::{matrix_element, FockIndex, Ladder, LadderSet, Mode, TruncatedBasis};

use Ladder::{Lower, Raise};
use Mode::{D, G};

/// Ground-state source elements of the second-order `x y²` correction:
/// (bra, word, sign listed in front of the element, expected value).
const SOURCES: [(FockIndex, [Ladder; 3], i8, f64); 10] = {
    let s6 = 2.449_489_742_783_178;
    let s2 = std::f64::consts::SQRT_2;
    [
        (FockIndex::new(3, 0), [Raise(D), Raise(D), Raise(D)], 1, s6),
        (FockIndex::new(0, 3), [Raise(G), Raise(G), Raise(G)], 1, s6),
        (FockIndex::new(2, 1), [Raise(D), Raise(G), Raise(D)], -1, s2),
        (FockIndex::new(1, 2), [Raise(G), Raise(D), Raise(G)], -1, s2),
        (FockIndex::new(0, 1), [Lower(D), Raise(G), Raise(D)], -1, 1.0),
        (FockIndex::new(0, 1), [Lower(D), Raise(D), Raise(G)], -1, 1.0),
        (FockIndex::new(0, 1), [Raise(G), Lower(D), Raise(D)], -1, 1.0),
        (FockIndex::new(1, 0), [Raise(D), Lower(G), Raise(G)], -1, 1.0),
        (FockIndex::new(1, 0), [Lower(G), Raise(D), Raise(G)], -1, 1.0),
        (FockIndex::new(1, 0), [Lower(G), Raise(G), Raise(D)], -1, 1.0),
    ]
};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub bra: String,
    pub word: String,
    /// `⟨bra| word |0,0⟩`.
    pub value: f64,
    pub expected: f64,
    /// Sign printed in front of the element in the source list.
    pub listed_sign: i8,
    /// Sign of the word's coefficient in `x y²`, relative to the overall
    /// `−1/(8Γ³)` prefactor, computed from the operators actually built.
    pub expansion_sign: i8,
    pub sign_agrees: bool,
    /// Full `⟨bra| x y² |0,0⟩` and `⟨bra| y²p_y + p_y y² |0,0⟩` for context.
    pub xyy_element: [f64; 2],
    pub sym_pyy_element: [f64; 2],
}

/// Coefficient of each ladder letter in a linear operator, read off from
/// single-quantum matrix elements.
fn letter_coefficient(op: &crate::fock::OperatorMatrix, basis: &TruncatedBasis, l: Ladder) -> num_complex::Complex64 {
    let one = |m: Mode| match m {
        D => FockIndex::new(1, 0),
        G => FockIndex::new(0, 1),
    };
    let (bra, ket) = match l {
        Raise(m) => (one(m), FockIndex::VACUUM),
        Lower(m) => (FockIndex::VACUUM, one(m)),
    };
    matrix_element(bra, op, ket, basis).expect("single quanta lie in the basis")
}

pub fn matrix_element_catalog(basis: &TruncatedBasis) -> Result<Vec<CatalogEntry>> {
    if basis.cutoff() < 3 {
        return Err(Error::InvalidInput(format!(
            "the catalog needs N_cut >= 3, got {}",
            basis.cutoff()
        )));
    }
    let ladders = LadderSet::new(basis);
    let ops = build_phase_space(basis, 1.0);
    let products = build_tau_products(&ops);
    let prefactor = -1.0 / (8.0 * ops.gamma.powi(3));
    let mut out = Vec::with_capacity(SOURCES.len());
    for (bra, word, listed_sign, expected) in SOURCES {
        let value = matrix_element(bra, &ladders.word(&word), FockIndex::VACUUM, basis)?;
        let coefficient = letter_coefficient(&ops.x, basis, word[0])
            * letter_coefficient(&ops.y, basis, word[1])
            * letter_coefficient(&ops.y, basis, word[2]);
        let expansion_sign = if (coefficient / prefactor).re >= 0.0 { 1 } else { -1 };
        let xyy = matrix_element(bra, &products.xyy, FockIndex::VACUUM, basis)?;
        let pyy = matrix_element(bra, &products.sym_pyy, FockIndex::VACUUM, basis)?;
        out.push(CatalogEntry {
            bra: bra.to_string(),
            word: word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
            value: value.re,
            expected,
            listed_sign,
            expansion_sign,
            sign_agrees: listed_sign == expansion_sign,
            xyy_element: [xyy.re, xyy.im],
            sym_pyy_element: [pyy.re, pyy.im],
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearYEntry {
    pub description: String,
    pub value: f64,
    pub expected: f64,
}

/// Contributions of the `2iħy` piece: vanishing vacuum expectation and the
/// two unit single-quantum elements.
pub fn linear_y_corrections(basis: &TruncatedBasis) -> Result<Vec<LinearYEntry>> {
    if basis.cutoff() < 1 {
        return Err(Error::InvalidInput("linear y corrections need N_cut >= 1".into()));
    }
    let ladders = LadderSet::new(basis);
    let ops = build_phase_space(basis, 1.0);
    let vac = FockIndex::VACUUM;
    let y = matrix_element(vac, &ops.y, vac, basis)?;
    let d = matrix_element(FockIndex::new(1, 0), &ladders.a_d_dag, vac, basis)?;
    let g = matrix_element(FockIndex::new(0, 1), &ladders.a_g_dag, vac, basis)?;
    Ok(vec![
        LinearYEntry { description: "<0,0| y |0,0>".into(), value: y.norm(), expected: 0.0 },
        LinearYEntry { description: "<1,0| a_d^+ |0,0>".into(), value: d.re, expected: 1.0 },
        LinearYEntry { description: "<0,1| a_g^+ |0,0>".into(), value: g.re, expected: 1.0 },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        let basis = TruncatedBasis::new(4);
        let cat = matrix_element_catalog(&basis).unwrap();
        assert_eq!(cat.len(), 10);
        for e in &cat {
            assert!((e.value - e.expected).abs() < 1e-12, "{e:?}");
        }
        assert!(cat.iter().all(|e| e.sign_agrees));
    }

    #[test]
    fn catalog_needs_three_quanta() {
        assert!(matrix_element_catalog(&TruncatedBasis::new(2)).is_err());
    }

    #[test]
    fn xyy_couples_vacuum_only_to_listed_states() {
        let basis = TruncatedBasis::new(4);
        let ops = build_phase_space(&basis, 1.0);
        let p = build_tau_products(&ops);
        let listed: Vec<FockIndex> = SOURCES.iter().map(|s| s.0).collect();
        for (i, s) in basis.states().iter().enumerate() {
            let e = p.xyy.get(i, 0);
            if e.norm() > 1e-12 {
                assert!(listed.contains(s), "unexpected coupling to {s}");
            }
        }
    }

    #[test]
    fn linear_y_values() {
        let rows = linear_y_corrections(&TruncatedBasis::new(1)).unwrap();
        for r in rows {
            assert!((r.value - r.expected).abs() < 1e-12, "{r:?}");
        }
        assert!(linear_y_corrections(&TruncatedBasis::new(0)).is_err());
    }
}
