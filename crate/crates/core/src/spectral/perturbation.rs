use faer::Mat;
use serde::Serialize;

use super::eigen::{dense_eigh, EigenSolution};
use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, StateVector, C64, ZERO};
use crate::hamiltonian::{Model, ModelKind, Valley};

/// Default grouping width for degenerate levels (natural units).
pub const DEFAULT_GROUP_TOL: f64 = 1e-6;
/// Complement states closer than this to the level energy may not enter a sum.
pub const DENOMINATOR_GUARD: f64 = 1e-8;

/// Eigenvector restricted to its support.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalState {
    pub support: Vec<usize>,
    pub amplitudes: Vec<C64>,
}

impl LocalState {
    pub fn to_dense(&self, dim: usize) -> Vec<C64> {
        let mut v = vec![ZERO; dim];
        for (&g, &a) in self.support.iter().zip(&self.amplitudes) {
            v[g] = a;
        }
        v
    }

    /// `⟨self | v⟩` for a dense `v`.
    pub fn inner_dense(&self, v: &[C64]) -> C64 {
        self.support
            .iter()
            .zip(&self.amplitudes)
            .map(|(&g, a)| a.conj() * v[g])
            .sum()
    }
}

/// Reliable eigenvectors sharing one energy.
#[derive(Clone, Debug)]
pub struct DegenerateLevel {
    pub e0: f64,
    /// Positions in the originating [`EigenSolution`].
    pub indices: Vec<usize>,
    pub members: Vec<LocalState>,
    pub dim: usize,
}

impl DegenerateLevel {
    pub fn degeneracy(&self) -> usize {
        self.members.len()
    }

    /// Signed Landau index `n` with `E0 = ±√(2n)`.
    pub fn landau_index(&self) -> i64 {
        landau_index(self.e0)
    }
}

pub fn landau_index(e0: f64) -> i64 {
    let n = (e0 * e0 / 2.0).round() as i64;
    if e0 < 0.0 {
        -n
    } else {
        n
    }
}

/// Partition reliable eigenpairs into clusters of diameter below `tol`.
pub fn group_degenerate(sol: &EigenSolution, tol: f64) -> Result<Vec<DegenerateLevel>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("grouping tolerance must be positive, got {tol}")));
    }
    let mut levels: Vec<DegenerateLevel> = Vec::new();
    let mut first = f64::NEG_INFINITY;
    for (k, pair) in sol.pairs().iter().enumerate().filter(|(_, p)| p.reliable) {
        let member = LocalState {
            support: sol.support(k).to_vec(),
            amplitudes: pair.local.clone(),
        };
        match levels.last_mut() {
            Some(level) if pair.energy - first < tol => {
                level.indices.push(k);
                level.members.push(member);
            }
            _ => {
                first = pair.energy;
                levels.push(DegenerateLevel {
                    e0: 0.0,
                    indices: vec![k],
                    members: vec![member],
                    dim: sol.dim(),
                });
            }
        }
    }
    for level in &mut levels {
        level.e0 = level.indices.iter().map(|&k| sol.pair(k).energy).sum::<f64>()
            / level.indices.len() as f64;
    }
    Ok(levels)
}

fn apply_dense(op: &OperatorMatrix, x: &[C64]) -> Vec<C64> {
    (0..op.dim())
        .map(|r| op.row(r).map(|(c, v)| v * x[c]).sum())
        .collect()
}

fn check_operator(level: &DegenerateLevel, v: &OperatorMatrix) -> Result<()> {
    if v.dim() != level.dim {
        return Err(Error::DimensionMismatch { left: level.dim, right: v.dim() });
    }
    let defect = v.hermiticity_defect();
    if defect > 1e-10 * v.max_abs().max(1.0) {
        return Err(Error::NotHermitian { max_asymmetry: defect });
    }
    Ok(())
}

/// First-order result: eigenvalues of the projected perturbation and the
/// rotation (columns) that diagonalizes it.
#[derive(Clone, Debug)]
pub struct FirstOrder {
    pub values: Vec<f64>,
    pub rotation: Mat<C64>,
    /// Largest `|⟨i|V|j⟩|` over the level.
    pub projected_max: f64,
}

pub fn first_order_degenerate(level: &DegenerateLevel, v: &OperatorMatrix) -> Result<FirstOrder> {
    check_operator(level, v)?;
    let k = level.degeneracy();
    let images: Vec<Vec<C64>> = level
        .members
        .iter()
        .map(|m| apply_dense(v, &m.to_dense(level.dim)))
        .collect();
    let w = Mat::<C64>::from_fn(k, k, |i, j| level.members[i].inner_dense(&images[j]));
    let projected_max = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| w[(i, j)].norm())
        .fold(0.0, f64::max);
    let (values, rotation) = dense_eigh(&w)?;
    Ok(FirstOrder { values, rotation, projected_max })
}

/// Second-order shifts, one per first-order eigenvector, in the same order as
/// `first.values`. Within each group of equal first-order values the
/// effective second-order matrix is diagonalized, and its eigenvalues are
/// returned ascending.
pub fn second_order_shift(
    level: &DegenerateLevel,
    first: &FirstOrder,
    v: &OperatorMatrix,
    sol: &EigenSolution,
) -> Result<Vec<f64>> {
    check_operator(level, v)?;
    if sol.dim() != level.dim {
        return Err(Error::DimensionMismatch { left: level.dim, right: sol.dim() });
    }
    let k = level.degeneracy();
    let dense: Vec<Vec<C64>> = level.members.iter().map(|m| m.to_dense(level.dim)).collect();
    let rotated: Vec<Vec<C64>> = (0..k)
        .map(|b| {
            (0..level.dim)
                .map(|i| (0..k).map(|a| dense[a][i] * first.rotation[(a, b)]).sum())
                .collect()
        })
        .collect();
    let images: Vec<Vec<C64>> = rotated.iter().map(|x| apply_dense(v, x)).collect();

    // couplings[a] = list of (⟨k|V|r_a⟩, E0 − E_k)
    let mut couplings: Vec<(usize, Vec<C64>)> = Vec::new();
    for (idx, pair) in sol.pairs().iter().enumerate() {
        if !pair.reliable || level.indices.contains(&idx) {
            continue;
        }
        if (pair.energy - level.e0).abs() < DENOMINATOR_GUARD {
            return Err(Error::VanishingDenominator {
                level_energy: level.e0,
                state_energy: pair.energy,
                guard: DENOMINATOR_GUARD,
            });
        }
        let c: Vec<C64> = images
            .iter()
            .map(|w| {
                sol.support(idx)
                    .iter()
                    .zip(&pair.local)
                    .map(|(&g, a)| a.conj() * w[g])
                    .sum()
            })
            .collect();
        if c.iter().any(|z| *z != ZERO) {
            couplings.push((idx, c));
        }
    }

    let scale = first.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut shifts = vec![0.0; k];
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && first.values[end] - first.values[start] <= 1e-9 * scale {
            end += 1;
        }
        let g = end - start;
        let m = Mat::<C64>::from_fn(g, g, |a, b| {
            couplings
                .iter()
                .map(|(idx, c)| {
                    c[start + a].conj() * c[start + b] / (level.e0 - sol.pair(*idx).energy)
                })
                .sum()
        });
        let (values, _) = dense_eigh(&m)?;
        shifts[start..end].copy_from_slice(&values);
        start = end;
    }
    Ok(shifts)
}

/// One row of a [`PerturbationReport`].
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level_index: i64,
    pub e0: f64,
    pub degeneracy: usize,
    pub first_order: Vec<f64>,
    pub first_order_max_abs: f64,
    pub second_order: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    pub model: ModelKind,
    pub n_cut: usize,
    pub theta: f64,
    pub tau: f64,
    pub levels: Vec<LevelReport>,
}

impl PerturbationReport {
    pub fn level(&self, index: i64) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.level_index == index)
    }
}

/// First- and second-order corrections from `Θ·H^(Θ) + τ·H^(τ)` for every
/// level with `|n| ≤ max_level`.
pub fn perturbation_report(
    model: &Model,
    theta: f64,
    tau: f64,
    max_level: usize,
    group_tol: f64,
) -> Result<PerturbationReport> {
    let sol = model.diagonalize(0.0, 0.0)?;
    let v = model.perturbation(theta, tau);
    let mut levels = Vec::new();
    for level in group_degenerate(&sol, group_tol)? {
        if level.landau_index().unsigned_abs() as usize > max_level {
            continue;
        }
        let first = first_order_degenerate(&level, &v)?;
        let second = second_order_shift(&level, &first, &v, &sol)?;
        levels.push(LevelReport {
            level_index: level.landau_index(),
            e0: level.e0,
            degeneracy: level.degeneracy(),
            first_order: first.values.clone(),
            first_order_max_abs: first.projected_max,
            second_order: second,
        });
    }
    Ok(PerturbationReport {
        model: model.kind,
        n_cut: model.basis.cutoff(),
        theta,
        tau,
        levels,
    })
}

/// Unperturbed eigenvector used to follow a level through a deformation:
/// the member with `n_d = 0`.
pub fn reference_state(model: &Model, level_index: i64) -> Result<StateVector> {
    let basis = &model.basis;
    let n = level_index.unsigned_abs() as usize;
    if n >= basis.cutoff() {
        return Err(Error::InvalidInput(format!(
            "level {level_index} is not below the cutoff {}",
            basis.cutoff()
        )));
    }
    let fock = |g: usize| basis.index_of(crate::fock::FockIndex::new(0, g)).expect("inside basis");
    let mut v = StateVector::zeros(model.dim());
    match model.kind {
        ModelKind::PaperLabeled => {
            if level_index < 0 {
                return Err(Error::InvalidInput("the labeled model has no negative levels".into()));
            }
            v.amplitudes[fock(n)] = C64::from(1.0);
        }
        ModelKind::Dirac(valley) => {
            // K carries the Landau index on sublattice A, K' on B
            let dim = basis.dim();
            let (upper, lower) = match valley {
                Valley::K => (0, dim),
                Valley::KPrime => (dim, 0),
            };
            let a = upper + fock(n);
            if n == 0 {
                v.amplitudes[a] = C64::from(1.0);
            } else {
                let b = lower + fock(n - 1);
                let h = model.h0.get(b, a);
                let s = if level_index > 0 { 1.0 } else { -1.0 };
                v.amplitudes[a] = C64::from(std::f64::consts::FRAC_1_SQRT_2);
                v.amplitudes[b] = h / h.norm() * (s * std::f64::consts::FRAC_1_SQRT_2);
            }
        }
    }
    Ok(v)
}
