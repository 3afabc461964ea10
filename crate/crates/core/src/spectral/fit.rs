use faer::prelude::SolveLstsq;
use faer::Mat;
use serde::Serialize;

use super::eigen::EigenSolution;
use super::perturbation::reference_state;
use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::hamiltonian::{Model, ModelKind};

/// Largest τ (natural units) accepted by the fit.
pub const MAX_FIT_TAU: f64 = 0.05;

/// Quadratic model `E(τ) = c0 + c1 τ + c2 τ²` of one tracked level.
#[derive(Clone, Debug, Serialize)]
pub struct TauFit {
    pub model: ModelKind,
    pub n_cut: usize,
    pub level_index: i64,
    pub tau_samples: Vec<f64>,
    pub energies: Vec<f64>,
    /// `|⟨reference|ψ⟩|²` of the tracked eigenvector at each sample.
    pub overlaps: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Largest absolute deviation of the samples from the fitted curve.
    pub residual: f64,
    pub residual_threshold: f64,
    pub warning: Option<String>,
}

fn validate_samples(tau: &[f64]) -> Result<()> {
    if tau.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "a quadratic tau fit needs at least 4 samples, got {}",
            tau.len()
        )));
    }
    if tau.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("tau samples must be finite".into()));
    }
    let max = tau.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let min = tau.iter().fold(f64::INFINITY, |m, t| m.min(t.abs()));
    if max == 0.0 {
        return Err(Error::InvalidInput("tau samples are all zero".into()));
    }
    if max > MAX_FIT_TAU {
        return Err(Error::InvalidInput(format!(
            "tau sample {max} lies outside the perturbative window (<= {MAX_FIT_TAU})"
        )));
    }
    if max < 10.0 * min {
        return Err(Error::InvalidInput(format!(
            "tau samples must span a decade, got [{min}, {max}]"
        )));
    }
    Ok(())
}

/// Least-squares quadratic through `(x, y)`, solved on `x / max|x|` for conditioning.
fn quadratic_least_squares(x: &[f64], y: &[f64]) -> Result<[f64; 3]> {
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidInput("tau samples do not determine a quadratic".into()));
    }
    let scale = x.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let design = Mat::from_fn(x.len(), 3, |i, j| (x[i] / scale).powi(j as i32));
    let rhs = Mat::from_fn(y.len(), 1, |i, _| y[i]);
    let c = design.col_piv_qr().solve_lstsq(&rhs);
    Ok([c[(0, 0)], c[(1, 0)] / scale, c[(2, 0)] / (scale * scale)])
}

/// Index of the eigenvector with the largest overlap onto `target`.
pub fn track(sol: &EigenSolution, target: &StateVector) -> (usize, f64) {
    (0..sol.len())
        .map(|k| (k, sol.overlap(k, target).norm_sqr()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty solution")
}

/// Exact-diagonalization energies of level `level_index` for each τ (Θ = 0),
/// followed from its unperturbed `n_d = 0` member by maximal overlap, then
/// fitted by a quadratic.
pub fn fit_tau_response(model: &Model, level_index: i64, tau_samples: &[f64]) -> Result<TauFit> {
    validate_samples(tau_samples)?;
    let target = reference_state(model, level_index)?;
    let mut energies = Vec::with_capacity(tau_samples.len());
    let mut overlaps = Vec::with_capacity(tau_samples.len());
    for &tau in tau_samples {
        let sol = model.diagonalize(0.0, tau)?;
        let (k, w) = track(&sol, &target);
        energies.push(sol.pair(k).energy);
        overlaps.push(w);
    }
    let [c0, c1, c2] = quadratic_least_squares(tau_samples, &energies)?;
    let residual = tau_samples
        .iter()
        .zip(&energies)
        .map(|(t, e)| (e - (c0 + c1 * t + c2 * t * t)).abs())
        .fold(0.0, f64::max);
    let residual_threshold = 1e-6 * c0.abs().max(1.0);
    let warning = (residual > residual_threshold).then(|| {
        format!(
            "fit residual {residual:e} exceeds {residual_threshold:e}: truncation or nonperturbative regime"
        )
    });
    Ok(TauFit {
        model: model.kind,
        n_cut: model.basis.cutoff(),
        level_index,
        tau_samples: tau_samples.to_vec(),
        energies,
        overlaps,
        c0,
        c1,
        c2,
        residual,
        residual_threshold,
        warning,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub level_index: i64,
    pub cutoffs: Vec<usize>,
    pub energies: Vec<f64>,
    /// `|E(N_{i+1}) − E(N_i)|`.
    pub cauchy_differences: Vec<f64>,
    pub converging: bool,
}

/// Energy of each tracked level `|n| ≤ max_level` as the cutoff grows.
pub fn convergence_study(
    kind: ModelKind,
    cutoffs: &[usize],
    theta: f64,
    tau: f64,
    max_level: usize,
) -> Result<Vec<ConvergenceRow>> {
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("cutoffs must be non-empty and strictly ascending".into()));
    }
    if cutoffs[0] <= max_level {
        return Err(Error::InvalidInput(format!(
            "smallest cutoff {} must exceed the highest level {max_level}",
            cutoffs[0]
        )));
    }
    let levels: Vec<i64> = match kind {
        ModelKind::Dirac(_) => (-(max_level as i64)..=max_level as i64).collect(),
        ModelKind::PaperLabeled => (0..=max_level as i64).collect(),
    };
    let mut table: Vec<Vec<f64>> = vec![Vec::new(); levels.len()];
    for &n_cut in cutoffs {
        let model = Model::new(kind, n_cut)?;
        let sol = model.diagonalize(theta, tau)?;
        for (row, &level) in table.iter_mut().zip(&levels) {
            let (k, _) = track(&sol, &reference_state(&model, level)?);
            row.push(sol.pair(k).energy);
        }
    }
    Ok(levels
        .into_iter()
        .zip(table)
        .map(|(level_index, energies)| {
            let cauchy_differences: Vec<f64> =
                energies.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let converging = cauchy_differences.windows(2).all(|w| w[1] <= w[0]);
            ConvergenceRow {
                level_index,
                cutoffs: cutoffs.to_vec(),
                energies,
                cauchy_differences,
                converging,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Valley;

    #[test]
    fn exact_quadratic_is_recovered() {
        let x = [1e-4, 3e-4, 6e-4, 1e-3];
        let y: Vec<f64> = x.iter().map(|t| 0.5 - 2.0 * t + 7.0 * t * t).collect();
        let [c0, c1, c2] = quadratic_least_squares(&x, &y).unwrap();
        assert!((c0 - 0.5).abs() < 1e-12);
        assert!((c1 + 2.0).abs() < 1e-8);
        assert!((c2 - 7.0).abs() < 1e-4);
    }

    #[test]
    fn sample_validation() {
        assert!(validate_samples(&[0.0; 5]).is_err());
        assert!(validate_samples(&[1e-4, 2e-4, 3e-4]).is_err());
        assert!(validate_samples(&[1e-4, 2e-4, 3e-4, 5e-4]).is_err());
        assert!(validate_samples(&[1e-4, 2e-4, 3e-4, 0.1]).is_err());
        assert!(validate_samples(&[1e-4, 2e-4, 5e-4, 1e-3]).is_ok());
    }

    #[test]
    fn labeled_ground_fit_matches_second_order() {
        let m = Model::paper_labeled(14).unwrap();
        let fit = fit_tau_response(&m, 0, &[1e-4, 2.5e-4, 5e-4, 1e-3]).unwrap();
        assert!(fit.warning.is_none(), "{fit:?}");
        let r = super::super::perturbation_report(&m, 0.0, 1.0, 0, 1e-6).unwrap();
        let e2 = r.level(0).unwrap().second_order[0];
        assert!(fit.c2 < 0.0);
        assert!((fit.c2 - e2).abs() < 0.05 * e2.abs(), "{} vs {e2}", fit.c2);
        // E(τ) is even in τ; the quartic term leaks about c4·τ_max³ into c1
        assert!(fit.c1.abs() < 1e-4 * fit.c2.abs() * 1e-3, "{fit:?}");
    }

    #[test]
    fn zero_level_is_stable_across_cutoffs() {
        let rows = convergence_study(ModelKind::Dirac(Valley::K), &[4, 6, 8], 0.0, 0.0, 1).unwrap();
        let zero = rows.iter().find(|r| r.level_index == 0).unwrap();
        assert!(zero.energies.iter().all(|e| e.abs() < 1e-12));
        let one = rows.iter().find(|r| r.level_index == 1).unwrap();
        assert!(one.energies.iter().all(|e| (e - 2f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn cutoffs_must_ascend() {
        assert!(convergence_study(ModelKind::PaperLabeled, &[6, 4], 0.0, 0.0, 1).is_err());
        assert!(convergence_study(ModelKind::PaperLabeled, &[2, 4], 0.0, 0.0, 2).is_err());
    }
}
