//! Phase-space operators in the d/g mode representation and operator-level
//! checks of the commutative and dynamical noncommutative (DNC) algebras.
//!
//! Everything here is in natural units with the magnetic length set to one,
//! so `Γ = 1/√2`. The reduced Planck constant is kept as a parameter so the
//! `iħ` structure of the commutators stays visible in tests.
//!
//! With the circular modes `a_d`, `a_g`:
//!
//! ```text
//! x   = (1/2Γ)   ( a_d + a_d† + a_g + a_g†)
//! y   = (i/2Γ)   ( a_d − a_d† − a_g + a_g†)
//! p_x = (iħΓ/2)  (−a_d + a_d† − a_g + a_g†)
//! p_y = (ħΓ/2)   ( a_d + a_d† − a_g − a_g†)
//! ```
//!
//! All four are Hermitian and satisfy the canonical algebra on the interior
//! of the truncated basis.

use serde::Serialize;

use crate::fock::{LadderSet, OperatorMatrix, TruncatedBasis, I};

/// Longest ladder word appearing in any DNC relation (cubic dressing inside a commutator).
pub const DNC_WORD_LEN: usize = 6;

#[derive(Clone, Debug)]
pub struct PhaseSpaceOps {
    pub basis: TruncatedBasis,
    pub ladders: LadderSet,
    pub x: OperatorMatrix,
    pub y: OperatorMatrix,
    pub p_x: OperatorMatrix,
    pub p_y: OperatorMatrix,
    pub hbar: f64,
    /// `Γ = 1/(√2 l_B)` with `l_B = 1`.
    pub gamma: f64,
}

pub fn build_phase_space(basis: &TruncatedBasis, hbar: f64) -> PhaseSpaceOps {
    assert!(hbar > 0.0, "hbar must be positive");
    let l = LadderSet::new(basis);
    let gamma = std::f64::consts::FRAC_1_SQRT_2;
    let combo = |c: [f64; 4]| {
        &(&(&l.a_d.scaled(c[0]) + &l.a_d_dag.scaled(c[1])) + &l.a_g.scaled(c[2]))
            + &l.a_g_dag.scaled(c[3])
    };
    let x = combo([1.0, 1.0, 1.0, 1.0]).scaled(1.0 / (2.0 * gamma));
    let y = combo([1.0, -1.0, -1.0, 1.0]).scaled(I / (2.0 * gamma));
    let p_x = combo([-1.0, 1.0, -1.0, 1.0]).scaled(I * hbar * gamma / 2.0);
    let p_y = combo([1.0, 1.0, -1.0, -1.0]).scaled(hbar * gamma / 2.0);
    PhaseSpaceOps {
        basis: basis.clone(),
        ladders: l,
        x,
        y,
        p_x,
        p_y,
        hbar,
        gamma,
    }
}

/// Operator products entering the τ-perturbation.
#[derive(Clone, Debug)]
pub struct TauProducts {
    /// `x y²`.
    pub xyy: OperatorMatrix,
    /// `½(x y² + y² x)`; equals `xyy` wherever `[x, y] = 0` holds exactly.
    pub xyy_sym: OperatorMatrix,
    /// `y² p_y + p_y y²`.
    pub sym_pyy: OperatorMatrix,
    /// `2 p_y y² + 2iħ y`, the rearranged form of `sym_pyy`.
    pub sym_pyy_rearranged: OperatorMatrix,
}

impl TauProducts {
    /// Interior max of `sym_pyy − sym_pyy_rearranged`.
    pub fn rearrangement_defect(&self, basis: &TruncatedBasis) -> f64 {
        (&self.sym_pyy - &self.sym_pyy_rearranged).max_abs_on(&basis.interior(3))
    }
}

pub fn build_tau_products(ops: &PhaseSpaceOps) -> TauProducts {
    let yy = &ops.y * &ops.y;
    let xyy = &ops.x * &yy;
    let yyx = &yy * &ops.x;
    let xyy_sym = (&xyy + &yyx).scaled(0.5);
    let sym_pyy = &(&yy * &ops.p_y) + &(&ops.p_y * &yy);
    let sym_pyy_rearranged =
        &(&ops.p_y * &yy).scaled(2.0) + &ops.y.scaled(2.0 * I * ops.hbar);
    TauProducts {
        xyy,
        xyy_sym,
        sym_pyy,
        sym_pyy_rearranged,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub relations: Vec<RelationCheck>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }

    pub fn get(&self, relation: &str) -> Option<&RelationCheck> {
        self.relations.iter().find(|r| r.relation == relation)
    }

    pub fn max_deviation(&self) -> f64 {
        self.relations.iter().map(|r| r.max_deviation).fold(0.0, f64::max)
    }
}

fn relation(name: &str, residual: &OperatorMatrix, interior: &[bool], tol: f64) -> RelationCheck {
    let dev = residual.max_abs_on(interior);
    RelationCheck {
        relation: name.to_string(),
        max_deviation: dev,
        tolerance: tol,
        pass: dev <= tol,
    }
}

/// The six canonical relations on the word-length-2 interior.
pub fn verify_canonical_algebra(ops: &PhaseSpaceOps, tol: f64) -> AlgebraReport {
    let dim = ops.basis.dim();
    let interior = ops.basis.interior(2);
    let ihbar = OperatorMatrix::identity(dim).scaled(I * ops.hbar);
    let comm = |a: &OperatorMatrix, b: &OperatorMatrix| a.commutator(b).expect("shared basis");
    let relations = vec![
        relation("[x,p_x]=i hbar", &(&comm(&ops.x, &ops.p_x) - &ihbar), &interior, tol),
        relation("[y,p_y]=i hbar", &(&comm(&ops.y, &ops.p_y) - &ihbar), &interior, tol),
        relation("[x,y]=0", &comm(&ops.x, &ops.y), &interior, tol),
        relation("[p_x,p_y]=0", &comm(&ops.p_x, &ops.p_y), &interior, tol),
        relation("[x,p_y]=0", &comm(&ops.x, &ops.p_y), &interior, tol),
        relation("[y,p_x]=0", &comm(&ops.y, &ops.p_x), &interior, tol),
    ];
    AlgebraReport { relations }
}

/// Hermitian DNC phase-space variables to first order in Θ and in τ.
#[derive(Clone, Debug)]
pub struct DncOps {
    pub x: OperatorMatrix,
    pub y: OperatorMatrix,
    pub p_x: OperatorMatrix,
    pub p_y: OperatorMatrix,
    pub theta: f64,
    pub tau: f64,
    pub hbar: f64,
}

/// Θ-noncommutative variables from the commutative ones:
/// `x_nc = x − (Θ/2ħ) p_y`, `y_nc = y + (Θ/2ħ) p_x`, momenta unchanged.
fn bopp_shift(ops: &PhaseSpaceOps, theta: f64) -> [OperatorMatrix; 4] {
    let s = theta / (2.0 * ops.hbar);
    [
        &ops.x - &ops.p_y.scaled(s),
        &ops.y + &ops.p_x.scaled(s),
        ops.p_x.clone(),
        ops.p_y.clone(),
    ]
}

/// First-order Dyson dressing `(1+τy²)^{1/2} A (1+τy²)^{1/2} ≈ A + (τ/2)(y²A + Ay²)`
/// applied to `x` and `p_y`; `y` and `p_x` are left alone.
fn dyson_dressing(nc: &[OperatorMatrix; 4], tau: f64) -> [OperatorMatrix; 2] {
    let yy = &nc[1] * &nc[1];
    let dress = |a: &OperatorMatrix| yy.anticommutator(a).expect("shared basis").scaled(tau / 2.0);
    [dress(&nc[0]), dress(&nc[3])]
}

/// Bopp shift, then first-order dressing, keeping terms linear in Θ and in τ.
///
/// The τ-dressing is evaluated on the Θ = 0 variables, which is exactly the
/// statement that Θτ cross terms are dropped.
pub fn build_dnc_coordinates(ops: &PhaseSpaceOps, theta: f64, tau: f64) -> DncOps {
    let [x_nc, y_nc, px_nc, py_nc] = bopp_shift(ops, theta);
    let commutative = bopp_shift(ops, 0.0);
    let [dx, dpy] = dyson_dressing(&commutative, tau);
    DncOps {
        x: &x_nc + &dx,
        y: y_nc,
        p_x: px_nc,
        p_y: &py_nc + &dpy,
        theta,
        tau,
        hbar: ops.hbar,
    }
}

/// Residuals `LHS − RHS` of the six DNC relations, all right-hand sides
/// built from the DNC operators themselves.
pub fn dnc_residuals(dnc: &DncOps) -> Vec<(&'static str, OperatorMatrix)> {
    let dim = dnc.x.dim();
    let id = OperatorMatrix::identity(dim);
    let comm = |a: &OperatorMatrix, b: &OperatorMatrix| a.commutator(b).expect("shared basis");
    let deformation = &id + &(&dnc.y * &dnc.y).scaled(dnc.tau);
    let i_theta = deformation.scaled(I * dnc.theta);
    let i_hbar = deformation.scaled(I * dnc.hbar);
    let mixed = &dnc.y * &(&dnc.p_y.scaled(dnc.theta) + &dnc.x.scaled(dnc.hbar));
    vec![
        ("[x,y]=i Theta(1+tau y^2)", &comm(&dnc.x, &dnc.y) - &i_theta),
        ("[x,p_x]=i hbar(1+tau y^2)", &comm(&dnc.x, &dnc.p_x) - &i_hbar),
        ("[y,p_y]=i hbar(1+tau y^2)", &comm(&dnc.y, &dnc.p_y) - &i_hbar),
        ("[y,p_x]=0", comm(&dnc.y, &dnc.p_x)),
        (
            "[x,p_y]=2i tau y(Theta p_y+hbar x)",
            &comm(&dnc.x, &dnc.p_y) - &mixed.scaled(2.0 * I * dnc.tau),
        ),
        ("[p_x,p_y]=0", comm(&dnc.p_x, &dnc.p_y)),
    ]
}

/// Max interior residual per DNC relation, judged against `tol`.
///
/// The construction is first order, so at finite (Θ, τ) the residuals are
/// `O(Θτ, τ², Θ²τ)`; see [`dnc_scaling_study`] for the order check.
pub fn verify_dnc_algebra(dnc: &DncOps, basis: &TruncatedBasis, tol: f64) -> AlgebraReport {
    let interior = basis.interior(DNC_WORD_LEN);
    let relations = dnc_residuals(dnc)
        .iter()
        .map(|(name, r)| relation(name, r, &interior, tol))
        .collect();
    AlgebraReport { relations }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub relation: String,
    pub residual_full: f64,
    pub residual_half: f64,
    /// `residual_full / residual_half`; `None` when both vanish to `exact_tol`.
    pub ratio: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub theta: f64,
    pub tau: f64,
    pub min_ratio: f64,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Residual shrinkage when (Θ, τ) are halved. A relation passes when its
/// residual ratio is at least `min_ratio` (4 for a quadratic remainder), or
/// when both residuals are below `exact_tol`.
pub fn dnc_scaling_study(
    ops: &PhaseSpaceOps,
    theta: f64,
    tau: f64,
    min_ratio: f64,
    exact_tol: f64,
) -> ScalingReport {
    let interior = ops.basis.interior(DNC_WORD_LEN);
    let full = dnc_residuals(&build_dnc_coordinates(ops, theta, tau));
    let half = dnc_residuals(&build_dnc_coordinates(ops, theta / 2.0, tau / 2.0));
    let rows = full
        .iter()
        .zip(&half)
        .map(|((name, rf), (_, rh))| {
            let residual_full = rf.max_abs_on(&interior);
            let residual_half = rh.max_abs_on(&interior);
            let exact = residual_full < exact_tol && residual_half < exact_tol;
            let ratio = (!exact).then(|| residual_full / residual_half);
            ScalingRow {
                relation: name.to_string(),
                residual_full,
                residual_half,
                ratio,
                pass: exact || ratio.is_some_and(|r| r >= min_ratio),
            }
        })
        .collect();
    ScalingReport {
        theta,
        tau,
        min_ratio,
        rows,
    }
}

/// Cartesian ladder operators `a_x = (κx + ip_x)/√(2κħ)`, `a_y = (κy + ip_y)/√(2κħ)`
/// with `κ = ħ/2` (unit magnetic length).
pub fn cartesian_ladders(ops: &PhaseSpaceOps) -> (OperatorMatrix, OperatorMatrix) {
    let kappa = ops.hbar / 2.0;
    let norm = 1.0 / (2.0 * kappa * ops.hbar).sqrt();
    let a_x = (&ops.x.scaled(kappa) + &ops.p_x.scaled(I)).scaled(norm);
    let a_y = (&ops.y.scaled(kappa) + &ops.p_y.scaled(I)).scaled(norm);
    (a_x, a_y)
}

pub(crate) fn hermitian_defects(ops: &PhaseSpaceOps) -> [f64; 4] {
    [&ops.x, &ops.y, &ops.p_x, &ops.p_y].map(OperatorMatrix::hermiticity_defect)
}
