//! Spinor-valued graphene Hamiltonians `H⁰`, `H^(Θ)`, `H^(τ)` on spinor ⊗ Fock space.
//!
//! Natural units (`ħ = v_F = l_B = 1`) inside; [`PhysParams`] carries the SI/eV
//! configuration and converts Θ and τ on the way in.
//!
//! Spinor ordering is fixed: flattened index = `component · dim + fock_index`,
//! component 0 being sublattice A.

use serde::{Deserialize, Serialize};

use crate::algebra::{build_phase_space, build_tau_products, PhaseSpaceOps, TauProducts};
use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, TruncatedBasis, C64, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valley {
    K,
    #[serde(rename = "Kprime")]
    KPrime,
}

/// Physical configuration. `hbar` in eV·s, lengths in meters, so
/// [`PhysParams::energy_unit`] comes out in eV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysParams {
    pub l_b: f64,
    pub v_f: f64,
    pub hbar: f64,
    /// Θ in m².
    pub theta: f64,
    /// τ in m⁻².
    pub tau: f64,
    pub valley: Valley,
    pub n_cut: usize,
}

impl PhysParams {
    /// Everything set to one: Θ and τ are then already natural.
    pub fn natural(n_cut: usize) -> Self {
        Self {
            l_b: 1.0,
            v_f: 1.0,
            hbar: 1.0,
            theta: 0.0,
            tau: 0.0,
            valley: Valley::K,
            n_cut,
        }
    }

    pub fn with_deformation(self, theta: f64, tau: f64) -> Self {
        Self { theta, tau, ..self }
    }

    pub fn with_valley(self, valley: Valley) -> Self {
        Self { valley, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("l_B", self.l_b), ("v_F", self.v_f), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.theta.is_finite() && self.tau.is_finite()) {
            return Err(Error::InvalidInput("theta and tau must be finite".into()));
        }
        if self.n_cut < 1 {
            return Err(Error::InvalidInput(
                "the spinor problem needs N_cut >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn theta_natural(&self) -> f64 {
        self.theta / (self.l_b * self.l_b)
    }

    pub fn tau_natural(&self) -> f64 {
        self.tau * self.l_b * self.l_b
    }

    /// `ħ v_F / l_B`.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.v_f / self.l_b
    }
}

/// 2×2 block operator over a shared Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorOperator {
    pub aa: OperatorMatrix,
    pub ab: OperatorMatrix,
    pub ba: OperatorMatrix,
    pub bb: OperatorMatrix,
}

impl SpinorOperator {
    pub fn zeros(fock_dim: usize) -> Self {
        let z = OperatorMatrix::zeros(fock_dim);
        Self {
            aa: z.clone(),
            ab: z.clone(),
            ba: z.clone(),
            bb: z,
        }
    }

    /// `α₁ ⊗ a1 + α₂ ⊗ a2` with `α₁ = σ_x`, `α₂ = σ_y`.
    pub fn from_pauli(a1: &OperatorMatrix, a2: &OperatorMatrix) -> Self {
        let dim = a1.dim();
        Self {
            aa: OperatorMatrix::zeros(dim),
            ab: a1 - &a2.scaled(I),
            ba: a1 + &a2.scaled(I),
            bb: OperatorMatrix::zeros(dim),
        }
    }

    pub fn fock_dim(&self) -> usize {
        self.aa.dim()
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim()
    }

    pub fn scaled(&self, factor: impl Into<C64> + Copy) -> Self {
        Self {
            aa: self.aa.scaled(factor),
            ab: self.ab.scaled(factor),
            ba: self.ba.scaled(factor),
            bb: self.bb.scaled(factor),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            aa: self.aa.checked_add(&other.aa)?,
            ab: self.ab.checked_add(&other.ab)?,
            ba: self.ba.checked_add(&other.ba)?,
            bb: self.bb.checked_add(&other.bb)?,
        })
    }

    /// `max` over `|AA − AA†|`, `|BB − BB†|`, `|AB − BA†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let off = (&self.ab - &self.ba.dagger()).max_abs();
        self.aa
            .hermiticity_defect()
            .max(self.bb.hermiticity_defect())
            .max(off)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        [&self.aa, &self.ab, &self.ba, &self.bb]
            .iter()
            .map(|b| b.max_abs())
            .fold(0.0, f64::max)
    }

    /// Single matrix on the `2·dim` space, index `component · dim + fock`.
    pub fn flatten(&self) -> OperatorMatrix {
        let d = self.fock_dim();
        let blocks = [(&self.aa, 0, 0), (&self.ab, 0, d), (&self.ba, d, 0), (&self.bb, d, d)];
        OperatorMatrix::from_triplets(
            2 * d,
            blocks
                .iter()
                .flat_map(|(b, r0, c0)| b.iter().map(move |(r, c, v)| (r + r0, c + c0, v))),
        )
    }
}

/// K′ flips the sign of every σ_y-proportional part; on off-diagonal blocks
/// `A ∓ iB` that is a swap of `AB` and `BA`.
pub fn valley_variant(term: &SpinorOperator, valley: Valley) -> SpinorOperator {
    match valley {
        Valley::K => term.clone(),
        Valley::KPrime => SpinorOperator {
            aa: term.aa.clone(),
            ab: term.ba.clone(),
            ba: term.ab.clone(),
            bb: term.bb.clone(),
        },
    }
}

/// `α₁(p_x + κy) + α₂(p_y − κx)` with `κ = ħ/(2 l_B²)`.
pub fn build_h0(ops: &PhaseSpaceOps, valley: Valley) -> SpinorOperator {
    let kappa = ops.hbar / 2.0;
    let pi_x = &ops.p_x + &ops.y.scaled(kappa);
    let pi_y = &ops.p_y - &ops.x.scaled(kappa);
    valley_variant(&SpinorOperator::from_pauli(&pi_x, &pi_y), valley)
}

/// `(Θ/4)(α₁p_x + α₂p_y)`, Θ in units of `l_B²`.
pub fn build_htheta(ops: &PhaseSpaceOps, theta: f64, valley: Valley) -> SpinorOperator {
    let t = SpinorOperator::from_pauli(&ops.p_x, &ops.p_y).scaled(theta / 4.0);
    valley_variant(&t, valley)
}

/// Spatial part of the τ-term: `y²p_y + p_y y² − ħ·½(xy² + y²x)`.
pub fn tau_spatial_part(ops: &PhaseSpaceOps, products: &TauProducts) -> OperatorMatrix {
    &products.sym_pyy - &products.xyy_sym.scaled(ops.hbar)
}

/// `(τ/2) α₂ {y²p_y + p_y y² − ħ x y²}` with the `x y²` term symmetrized; τ in `l_B⁻²`.
pub fn build_htau(
    ops: &PhaseSpaceOps,
    products: &TauProducts,
    tau: f64,
    valley: Valley,
) -> SpinorOperator {
    let w = tau_spatial_part(ops, products).scaled(tau / 2.0);
    let zero = OperatorMatrix::zeros(w.dim());
    valley_variant(&SpinorOperator::from_pauli(&zero, &w), valley)
}

/// `H⁰`, `H^(Θ)` and `H^(τ)` for one parameter set.
#[derive(Clone, Debug)]
pub struct HamiltonianTerms {
    pub h0: SpinorOperator,
    pub htheta: SpinorOperator,
    pub htau: SpinorOperator,
    pub params: PhysParams,
    pub ops: PhaseSpaceOps,
}

impl HamiltonianTerms {
    pub fn build(params: &PhysParams) -> Result<Self> {
        params.validate()?;
        let basis = TruncatedBasis::new(params.n_cut);
        let ops = build_phase_space(&basis, 1.0);
        let products = build_tau_products(&ops);
        Ok(Self {
            h0: build_h0(&ops, params.valley),
            htheta: build_htheta(&ops, params.theta_natural(), params.valley),
            htau: build_htau(&ops, &products, params.tau_natural(), params.valley),
            params: *params,
            ops,
        })
    }

    pub fn basis(&self) -> &TruncatedBasis {
        &self.ops.basis
    }

    pub fn perturbation(&self) -> SpinorOperator {
        self.htheta
            .checked_add(&self.htau)
            .expect("terms share one basis")
    }

    pub fn total(&self) -> SpinorOperator {
        self.h0
            .checked_add(&self.perturbation())
            .expect("terms share one basis")
    }
}

/// Unperturbed operator implied by labeling `|n_d, n_g⟩` with Landau index
/// `n = n_d + n_g`: diagonal, eigenvalue `√(2n)`.
///
/// This is *not* the Dirac operator (whose index is the single mode `n_g`);
/// it exists so the labeled-state calculation can be checked on its own terms.
pub fn fock_labeled_h0(basis: &TruncatedBasis) -> OperatorMatrix {
    let values: Vec<C64> = basis
        .states()
        .iter()
        .map(|s| C64::from((2.0 * s.total() as f64).sqrt()))
        .collect();
    OperatorMatrix::diagonal(&values)
}

/// Scalar τ-perturbation `(τ/2){y²p_y + p_y y² − ħ x y²}` acting on Fock states alone.
pub fn scalar_tau_perturbation(ops: &PhaseSpaceOps, products: &TauProducts, tau: f64) -> OperatorMatrix {
    tau_spatial_part(ops, products).scaled(tau / 2.0)
}

/// Which unperturbed problem a flat model represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Spinor Dirac Hamiltonian in one valley.
    Dirac(Valley),
    /// Scalar Fock states labeled by `n = n_d + n_g`.
    PaperLabeled,
}

/// Flattened unperturbed operator plus unit-strength perturbations, so that
/// `H(Θ, τ) = h0 + Θ·theta_unit + τ·tau_unit` in natural units.
#[derive(Clone, Debug)]
pub struct Model {
    pub kind: ModelKind,
    pub basis: TruncatedBasis,
    pub h0: OperatorMatrix,
    pub theta_unit: OperatorMatrix,
    pub tau_unit: OperatorMatrix,
    /// Flattened indices whose Fock state sits on the cutoff.
    pub edge: Vec<bool>,
    /// Sublattice flag per flattened index (true = B); `None` for scalar models.
    pub sublattice: Option<Vec<bool>>,
}

impl Model {
    pub fn dirac(n_cut: usize, valley: Valley) -> Result<Self> {
        PhysParams::natural(n_cut).validate()?;
        let basis = TruncatedBasis::new(n_cut);
        let ops = build_phase_space(&basis, 1.0);
        let products = build_tau_products(&ops);
        let dim = basis.dim();
        let edge: Vec<bool> = (0..2 * dim).map(|i| basis.is_edge(i % dim)).collect();
        Ok(Self {
            kind: ModelKind::Dirac(valley),
            h0: build_h0(&ops, valley).flatten(),
            theta_unit: build_htheta(&ops, 1.0, valley).flatten(),
            tau_unit: build_htau(&ops, &products, 1.0, valley).flatten(),
            edge,
            sublattice: Some((0..2 * dim).map(|i| i >= dim).collect()),
            basis,
        })
    }

    /// The labeled scalar model carries no Θ term.
    pub fn paper_labeled(n_cut: usize) -> Result<Self> {
        PhysParams::natural(n_cut).validate()?;
        let basis = TruncatedBasis::new(n_cut);
        let ops = build_phase_space(&basis, 1.0);
        let products = build_tau_products(&ops);
        let edge = (0..basis.dim()).map(|i| basis.is_edge(i)).collect();
        Ok(Self {
            kind: ModelKind::PaperLabeled,
            h0: fock_labeled_h0(&basis),
            theta_unit: OperatorMatrix::zeros(basis.dim()),
            tau_unit: scalar_tau_perturbation(&ops, &products, 1.0),
            edge,
            sublattice: None,
            basis,
        })
    }

    pub fn new(kind: ModelKind, n_cut: usize) -> Result<Self> {
        match kind {
            ModelKind::Dirac(v) => Self::dirac(n_cut, v),
            ModelKind::PaperLabeled => Self::paper_labeled(n_cut),
        }
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn perturbation(&self, theta: f64, tau: f64) -> OperatorMatrix {
        &self.theta_unit.scaled(theta) + &self.tau_unit.scaled(tau)
    }

    pub fn hamiltonian(&self, theta: f64, tau: f64) -> OperatorMatrix {
        &self.h0 + &self.perturbation(theta, tau)
    }

    /// Landau index attached to flattened index `i` by this model's labeling:
    /// `n_g` on the sublattice carrying the index (A in K, B in K′), `n_g + 1`
    /// on the other, `n_d + n_g` when labeled.
    pub fn landau_label(&self, i: usize) -> usize {
        let dim = self.basis.dim();
        let s = self.basis.state(i % dim);
        match self.kind {
            ModelKind::Dirac(Valley::K) if i >= dim => s.n_g + 1,
            ModelKind::Dirac(Valley::KPrime) if i < dim => s.n_g + 1,
            ModelKind::Dirac(_) => s.n_g,
            ModelKind::PaperLabeled => s.total(),
        }
    }
}
