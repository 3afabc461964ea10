//! Batch front-end behind the `dncg` binary.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 numerical
//! contract violation (reports are still written before exiting), 1 I/O.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::algebra::{
    build_dnc_coordinates, build_phase_space, build_tau_products, dnc_scaling_study,
    hermitian_defects, verify_canonical_algebra, verify_dnc_algebra, AlgebraReport, ScalingReport,
};
use crate::config::{ModelChoice, OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::fock::{matrix_element, FockIndex, LadderSet, Mode, TruncatedBasis};
use crate::hamiltonian::{Model, ModelKind, PhysParams, Valley};
use crate::phenomenology::{eos, ordering_table, tau_upper_bound, BoundInput, BoundResult, OrderingTable};
use crate::report::{fmt_f64, Metadata, ReportWriter};
use crate::spectral::{
    fit_tau_response, group_degenerate, landau_index, linear_y_corrections,
    matrix_element_catalog, perturbation_report, CatalogEntry, LinearYEntry, TauFit,
};
use crate::units::{ConstantsSet, UnitSystem, SPEED_OF_LIGHT};

#[derive(Debug, Parser)]
#[command(name = "dncg", version, about = "Landau levels of graphene under dynamical noncommutativity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Closed-form vs exact Landau spectrum of H0.
    Spectrum,
    /// First- and second-order corrections per Landau level.
    Perturb,
    /// Quadratic fit of exact level energies over a τ sweep.
    FitTau,
    /// Canonical and deformed commutation relations.
    ValidateAlgebra,
    /// Upper bound on τ from an energy resolution.
    Bound,
    /// Zero-temperature equations of state and their ordering.
    Thermo,
    /// Fock basis enumeration, ladder normalization and matrix elements.
    BasisCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Perturb => "perturb",
            Command::FitTau => "fit-tau",
            Command::ValidateAlgebra => "validate-algebra",
            Command::Bound => "bound",
            Command::Thermo => "thermo",
            Command::BasisCheck => "basis-check",
        }
    }
}

/// Flags that override configuration-file keys.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// natural | physical
    #[arg(long, global = true)]
    pub units: Option<UnitSystem>,
    /// paper | codata
    #[arg(long, global = true)]
    pub constants: Option<ConstantsSet>,
    #[arg(long, global = true, value_name = "N")]
    pub ncut: Option<usize>,
    /// csv | json | both
    #[arg(long, global = true)]
    pub format: Option<OutputFormat>,
    /// dirac | paper-labeled
    #[arg(long, global = true)]
    pub model: Option<ModelChoice>,
    /// K | Kprime
    #[arg(long, global = true)]
    pub valley: Option<Valley>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Magnetic field in tesla.
    #[arg(long, global = true)]
    pub field: Option<f64>,
    /// Signed Landau index tracked by fit-tau.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub level: Option<i64>,
    #[arg(long, global = true)]
    pub max_level: Option<usize>,
    /// Energy resolution for the bound, eV.
    #[arg(long, global = true)]
    pub delta_e: Option<f64>,
    #[arg(long, global = true)]
    pub e_f: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    /// Spin/valley degeneracy factor g (graphene's valley-doubled value is 4).
    #[arg(long, global = true)]
    pub degeneracy: Option<f64>,
}

impl Overrides {
    /// Defaults, then file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! apply {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        apply!(out, units, constants, ncut, format, model, valley, theta, tau, field, level,
               max_level, delta_e, e_f, shift, degeneracy);
        c.validate()?;
        Ok(c)
    }
}

/// What a subcommand produced.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
    /// Set when a numerical contract failed; maps to exit code 3.
    pub violation: Option<String>,
}

impl Outcome {
    fn new(files: &[PathBuf]) -> Self {
        Self {
            files: files.to_vec(),
            summary: Vec::new(),
            warnings: Vec::new(),
            violation: None,
        }
    }
}

fn physical_params(c: &RunConfig) -> Result<PhysParams> {
    let constants = c.constants.constants();
    let mut p = PhysParams::from_field(c.field, &constants, c.ncut)?;
    if let Some(l) = c.l_b {
        p.l_b = l;
    }
    Ok(p.with_valley(c.valley).with_deformation(c.theta, c.tau))
}

/// `(Θ, τ)` in natural units, and the energy unit for reported values.
fn natural_deformation(c: &RunConfig) -> Result<(f64, f64, f64)> {
    match c.units {
        UnitSystem::Natural => Ok((c.theta, c.tau, 1.0)),
        UnitSystem::Physical => {
            let p = physical_params(c)?;
            Ok((p.theta_natural(), p.tau_natural(), p.energy_unit()))
        }
    }
}

fn natural_tau(c: &RunConfig, tau: f64) -> Result<f64> {
    Ok(match c.units {
        UnitSystem::Natural => tau,
        UnitSystem::Physical => tau * physical_params(c)?.l_b.powi(2),
    })
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    energy: f64,
    level_index: i64,
    closed_form: f64,
    abs_error: f64,
    rel_error: f64,
    reliable: bool,
    edge_weight: f64,
}

#[derive(Serialize)]
struct DegeneracyRow {
    level_index: i64,
    energy: f64,
    ed_reliable: usize,
    ed_total: usize,
    labeled_states: Option<usize>,
}

#[derive(Serialize)]
struct SpectrumResult {
    energy_unit: f64,
    valley: Valley,
    max_reliable_rel_error: f64,
    checked_levels: usize,
    eigenpairs: Vec<SpectrumRow>,
    degeneracy: Vec<DegeneracyRow>,
}

pub fn cmd_spectrum(c: &RunConfig) -> Result<Outcome> {
    let (_, _, unit) = natural_deformation(c)?;
    let model = Model::dirac(c.ncut, c.valley)?;
    let sol = model.diagonalize(0.0, 0.0)?;
    let mut rows = Vec::with_capacity(sol.len());
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (k, pair) in sol.pairs().iter().enumerate() {
        let n = landau_index(pair.energy);
        let closed = (2.0 * n.unsigned_abs() as f64).sqrt() * n.signum() as f64;
        let abs_error = (pair.energy - closed).abs();
        let rel_error = abs_error / closed.abs().max(1.0);
        if pair.reliable && n.unsigned_abs() as usize <= c.ncut / 2 {
            worst = worst.max(rel_error);
            checked += 1;
        }
        rows.push(SpectrumRow {
            index: k,
            energy: pair.energy * unit,
            level_index: n,
            closed_form: closed * unit,
            abs_error: abs_error * unit,
            rel_error,
            reliable: pair.reliable,
            edge_weight: pair.edge_weight,
        });
    }
    let mut degeneracy: Vec<DegeneracyRow> = Vec::new();
    for r in &rows {
        match degeneracy.last_mut() {
            Some(d) if d.level_index == r.level_index => {
                d.ed_total += 1;
                d.ed_reliable += r.reliable as usize;
            }
            _ => degeneracy.push(DegeneracyRow {
                level_index: r.level_index,
                energy: r.closed_form,
                ed_total: 1,
                ed_reliable: r.reliable as usize,
                labeled_states: (r.level_index >= 0).then(|| {
                    let n = r.level_index as usize;
                    // states with n_d + n_g = n inside the per-mode cutoff
                    (0..=n).filter(|&d| d <= c.ncut && n - d <= c.ncut).count()
                }),
            }),
        }
    }

    let meta = Metadata::new("spectrum", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    w.csv(
        "spectrum",
        &["index", "energy", "level_index", "closed_form", "abs_error", "rel_error", "reliable", "edge_weight"],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.index.to_string(),
                    f(r.energy),
                    r.level_index.to_string(),
                    f(r.closed_form),
                    f(r.abs_error),
                    f(r.rel_error),
                    r.reliable.to_string(),
                    f(r.edge_weight),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    w.csv(
        "degeneracy",
        &["level_index", "energy", "ed_reliable", "ed_total", "labeled_states"],
        &degeneracy
            .iter()
            .map(|d| {
                vec![
                    d.level_index.to_string(),
                    f(d.energy),
                    d.ed_reliable.to_string(),
                    d.ed_total.to_string(),
                    d.labeled_states.map(|n| n.to_string()).unwrap_or_default(),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let mut positive: Vec<f64> = Vec::new();
    for p in sol.pairs().iter().filter(|p| p.reliable && p.energy > 1e-9) {
        if positive.last().is_none_or(|&e| p.energy - e > 1e-9) && positive.len() < 3 {
            positive.push(p.energy);
        }
    }
    let positive: Vec<String> = positive.iter().map(|e| f(e * unit)).collect();
    let result = SpectrumResult {
        energy_unit: unit,
        valley: c.valley,
        max_reliable_rel_error: worst,
        checked_levels: checked,
        eigenpairs: rows,
        degeneracy,
    };
    w.json("spectrum", &result)?;
    let mut out = Outcome::new(w.written());
    out.summary.push(format!("lowest reliable positive levels: {}", positive.join(", ")));
    out.summary.push(format!("max relative error (reliable, n <= {}): {worst:e}", c.ncut / 2));
    if worst >= 1e-8 {
        out.violation = Some(format!("reliable eigenvalue deviates from closed form by {worst:e}"));
    }
    Ok(out)
}

pub fn cmd_perturb(c: &RunConfig) -> Result<Outcome> {
    let (theta, tau, unit) = natural_deformation(c)?;
    let model = Model::new(c.model_kind(), c.ncut)?;
    let mut report = perturbation_report(&model, theta, tau, c.max_level, c.group_tol)?;
    for l in &mut report.levels {
        l.e0 *= unit;
        l.first_order_max_abs *= unit;
        l.first_order.iter_mut().chain(l.second_order.iter_mut()).for_each(|x| *x *= unit);
    }
    let width = report.levels.iter().map(|l| l.degeneracy).max().unwrap_or(0);
    let mut header: Vec<String> = vec!["level_index".into(), "E0".into(), "degeneracy".into()];
    header.extend((1..=width).map(|i| format!("first_order_{i}")));
    header.extend((1..=width).map(|i| format!("second_order_{i}")));
    let rows: Vec<Vec<String>> = report
        .levels
        .iter()
        .map(|l| {
            let pad = |v: &[f64]| {
                let mut s: Vec<String> = v.iter().map(|x| f(*x)).collect();
                s.resize(width, String::new());
                s
            };
            let mut row = vec![l.level_index.to_string(), f(l.e0), l.degeneracy.to_string()];
            row.extend(pad(&l.first_order));
            row.extend(pad(&l.second_order));
            row
        })
        .collect();
    let meta = Metadata::new("perturb", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    w.csv("perturbation", &header_refs, &rows)?;
    w.json("perturbation", &report)?;
    let mut out = Outcome::new(w.written());
    if tau.abs() > RunConfig::perturbative_window() {
        out.warnings.push(format!(
            "tau * l_B^2 = {tau} lies outside the perturbative window (<= {})",
            RunConfig::perturbative_window()
        ));
    }
    for l in &report.levels {
        let worst_first = l.first_order.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let lowest_second = l.second_order.iter().cloned().fold(f64::INFINITY, f64::min);
        out.summary.push(format!(
            "n={:>3}  E0={:<22} deg={:<3} max|E1|={:<12.3e} min E2={:.6e}",
            l.level_index,
            f(l.e0),
            l.degeneracy,
            worst_first,
            lowest_second
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct FitResult<'a> {
    fit: &'a TauFit,
    /// Second-order coefficients E2/τ² of the tracked level from the perturbation engine.
    second_order_coefficients: Vec<f64>,
    /// `|c2 − E2/τ²| / |E2/τ²|` when the level is non-degenerate.
    c2_relative_difference: Option<f64>,
}

pub fn cmd_fit_tau(c: &RunConfig) -> Result<Outcome> {
    if c.theta != 0.0 {
        return Err(Error::Config("fit-tau requires theta = 0".into()));
    }
    let model = Model::new(c.model_kind(), c.ncut)?;
    let samples: Vec<f64> = c
        .tau_samples
        .iter()
        .map(|&t| natural_tau(c, t))
        .collect::<Result<_>>()?;
    let fit = fit_tau_response(&model, c.level, &samples)?;
    let report = perturbation_report(&model, 0.0, 1.0, c.level.unsigned_abs() as usize, c.group_tol)?;
    let coeffs = report
        .level(c.level)
        .map(|l| l.second_order.clone())
        .unwrap_or_default();
    let rel = (coeffs.len() == 1).then(|| (fit.c2 - coeffs[0]).abs() / coeffs[0].abs());
    let meta = Metadata::new("fit-tau", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    w.csv(
        "tau_fit",
        &["tau", "energy", "overlap", "fitted"],
        &fit.tau_samples
            .iter()
            .zip(&fit.energies)
            .zip(&fit.overlaps)
            .map(|((t, e), o)| vec![f(*t), f(*e), f(*o), f(fit.c0 + fit.c1 * t + fit.c2 * t * t)])
            .collect::<Vec<_>>(),
    )?;
    w.json(
        "tau_fit",
        &FitResult { fit: &fit, second_order_coefficients: coeffs.clone(), c2_relative_difference: rel },
    )?;
    let mut out = Outcome::new(w.written());
    out.summary.push(format!(
        "level {}: c0={:e} c1={:e} c2={:e} residual={:e}",
        c.level, fit.c0, fit.c1, fit.c2, fit.residual
    ));
    out.summary.push(format!("second-order coefficients: {coeffs:?}"));
    if let Some(r) = rel {
        out.summary.push(format!("c2 vs second order: relative difference {r:e}"));
    }
    out.warnings.extend(fit.warning.clone());
    Ok(out)
}

#[derive(Serialize)]
struct AlgebraResult {
    ncut: usize,
    hermiticity_defects: [f64; 4],
    canonical: AlgebraReport,
    rearrangement_defect: f64,
    dnc: AlgebraReport,
    scaling: ScalingReport,
}

pub fn cmd_validate_algebra(c: &RunConfig) -> Result<Outcome> {
    let (theta, tau, _) = natural_deformation(c)?;
    let basis = TruncatedBasis::new(c.ncut);
    let ops = build_phase_space(&basis, 1.0);
    let canonical = verify_canonical_algebra(&ops, c.algebra_tol);
    let products = build_tau_products(&ops);
    let rearrangement_defect = products.rearrangement_defect(&basis);
    let dnc = verify_dnc_algebra(&build_dnc_coordinates(&ops, theta, tau), &basis, c.algebra_tol);
    let (st, stau) = if theta != 0.0 && tau != 0.0 { (theta, tau) } else { (0.01, 0.01) };
    let scaling = dnc_scaling_study(&ops, st, stau, 3.5, 1e-13);
    let result = AlgebraResult {
        ncut: c.ncut,
        hermiticity_defects: hermitian_defects(&ops),
        canonical,
        rearrangement_defect,
        dnc,
        scaling,
    };
    let meta = Metadata::new("validate-algebra", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (group, rep) in [("canonical", &result.canonical), ("dnc", &result.dnc)] {
        for r in &rep.relations {
            rows.push(vec![group.into(), r.relation.clone(), f(r.max_deviation), f(r.tolerance), r.pass.to_string()]);
        }
    }
    rows.push(vec![
        "identity".into(),
        "y^2 p_y + p_y y^2 = 2 p_y y^2 + 2i hbar y".into(),
        f(rearrangement_defect),
        f(c.algebra_tol),
        (rearrangement_defect <= c.algebra_tol).to_string(),
    ]);
    for r in &result.scaling.rows {
        rows.push(vec![
            "scaling".into(),
            r.relation.clone(),
            r.ratio.map(f).unwrap_or_else(|| "exact".into()),
            f(result.scaling.min_ratio),
            r.pass.to_string(),
        ]);
    }
    w.csv("algebra", &["group", "relation", "deviation", "tolerance", "pass"], &rows)?;
    w.json("algebra", &result)?;
    let mut out = Outcome::new(w.written());
    let dnc_expected_exact = theta == 0.0 && tau == 0.0;
    let ok_canonical = result.canonical.all_pass() && rearrangement_defect <= c.algebra_tol;
    let ok_dnc = !dnc_expected_exact || result.dnc.all_pass();
    out.summary.push(format!(
        "canonical: {} (max deviation {:e}); rearrangement identity defect {:e}",
        if result.canonical.all_pass() { "pass" } else { "FAIL" },
        result.canonical.max_deviation(),
        rearrangement_defect
    ));
    out.summary.push(format!(
        "deformed relations at (theta, tau) = ({theta}, {tau}): max deviation {:e}",
        result.dnc.max_deviation()
    ));
    out.summary.push(format!(
        "halving ({st}, {stau}): {}",
        if result.scaling.all_pass() { "all residual ratios >= 3.5" } else { "ratio below 3.5" }
    ));
    if !(ok_canonical && ok_dnc && result.scaling.all_pass()) {
        out.violation = Some("algebra relations violated".into());
    }
    Ok(out)
}

#[derive(Serialize)]
struct BoundReport {
    input: BoundInput,
    constants: crate::units::Constants,
    result: BoundResult,
}

pub fn bound_input(c: &RunConfig) -> Result<BoundInput> {
    let constants = c.constants.constants();
    Ok(BoundInput {
        delta_e: c.delta_e,
        l_b: match c.l_b {
            Some(l) => l,
            None => constants.magnetic_length(c.field)?,
        },
        v_f: constants.v_f,
        hbar: constants.hbar,
    })
}

pub fn cmd_bound(c: &RunConfig) -> Result<Outcome> {
    let constants = c.constants.constants();
    let input = bound_input(c)?;
    let result = tau_upper_bound(&input, &constants)?;
    let meta = Metadata::new("bound", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    w.csv(
        "bound",
        &["delta_e_eV", "l_B_m", "v_F_m_per_s", "hbar_eV_s", "gamma_per_m", "tau_max_per_m2", "sqrt_tau_max_per_m", "sqrt_tau_max_eV"],
        &[vec![
            f(input.delta_e),
            f(input.l_b),
            f(input.v_f),
            f(input.hbar),
            f(result.gamma),
            f(result.tau_max),
            f(result.sqrt_tau_max_m),
            f(result.sqrt_tau_max_ev),
        ]],
    )?;
    w.json("bound", &BoundReport { input, constants, result })?;
    let mut out = Outcome::new(w.written());
    out.summary.push(format!(
        "constants={}: sqrt(tau) <= {:.4e} 1/m = {:.4} eV (tau <= {:.4e} 1/m^2)",
        c.constants.name(),
        result.sqrt_tau_max_m,
        result.sqrt_tau_max_ev,
        result.tau_max
    ));
    Ok(out)
}

#[derive(Serialize)]
struct ThermoResult {
    hbar: f64,
    c: f64,
    degeneracy: f64,
    max_identity_deviation: f64,
    ordering: OrderingTable,
}

pub fn cmd_thermo(c: &RunConfig) -> Result<Outcome> {
    let (hbar, light) = match c.units {
        UnitSystem::Natural => (1.0, 1.0),
        UnitSystem::Physical => (c.constants.constants().hbar, SPEED_OF_LIGHT),
    };
    let ordering = ordering_table(c.e_f, c.shift, c.degeneracy, hbar, light)?;
    let p0 = c.e_f / light;
    let mut samples = Vec::with_capacity(c.eos_samples);
    let mut worst: f64 = 0.0;
    for i in 0..c.eos_samples {
        // log grid over three decades around the Fermi momentum
        let t = if c.eos_samples > 1 { i as f64 / (c.eos_samples - 1) as f64 } else { 0.5 };
        let s = eos(p0 * 10f64.powf(3.0 * t - 1.5), c.degeneracy, hbar, light)?;
        worst = worst
            .max((s.p - s.u / 3.0).abs() / s.p.abs().max(f64::MIN_POSITIVE))
            .max((s.dp_dn - s.mu / 3.0).abs() / s.dp_dn.abs().max(f64::MIN_POSITIVE))
            .max((s.gamma - 4.0 / 3.0).abs());
        samples.push(s);
    }
    let meta = Metadata::new("thermo", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    w.csv(
        "eos",
        &["p_F", "n", "u", "mu", "P", "dP_dn", "gamma"],
        &samples
            .iter()
            .map(|s| vec![f(s.p_f), f(s.n), f(s.u), f(s.mu), f(s.p), f(s.dp_dn), f(s.gamma)])
            .collect::<Vec<_>>(),
    )?;
    w.csv(
        "ordering",
        &["quantity", "commutative", "dnc", "relation", "claimed", "consistent"],
        &ordering
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.quantity.to_string(),
                    f(r.commutative),
                    f(r.dnc),
                    r.relation.symbol().to_string(),
                    r.claimed.symbol().to_string(),
                    r.consistent.map(|b| b.to_string()).unwrap_or_default(),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let result = ThermoResult {
        hbar,
        c: light,
        degeneracy: c.degeneracy,
        max_identity_deviation: worst,
        ordering,
    };
    w.json("thermo", &result)?;
    let mut out = Outcome::new(w.written());
    for r in &result.ordering.rows {
        let flag = match r.consistent {
            Some(false) => "  <- claimed direction contradicts the formulas",
            _ => "",
        };
        out.summary.push(format!(
            "{:>6}: dnc {} commutative (claimed {}){flag}",
            r.quantity,
            r.relation.symbol(),
            r.claimed.symbol()
        ));
    }
    out.summary.push(format!("max identity deviation over {} samples: {worst:e}", c.eos_samples));
    if worst > 1e-12 {
        out.violation = Some(format!("equation-of-state identities violated by {worst:e}"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct BasisResult {
    ncut: usize,
    dim: usize,
    index_round_trip: bool,
    normalization_max_error: f64,
    ladder_commutator_max_error: f64,
    catalog: Vec<CatalogEntry>,
    linear_y: Vec<LinearYEntry>,
    ed_level_degeneracy: Vec<(i64, usize)>,
}

pub fn cmd_basis_check(c: &RunConfig) -> Result<Outcome> {
    let basis = TruncatedBasis::new(c.ncut);
    let round_trip = basis
        .states()
        .iter()
        .enumerate()
        .all(|(i, s)| basis.index_of(*s) == Some(i));
    let ladders = LadderSet::new(&basis);
    let vac = FockIndex::VACUUM;
    let top = c.ncut.min(5);
    let mut norm_err: f64 = 0.0;
    for p in 0..=top {
        for q in 0..=top {
            let mut word = vec![crate::fock::Ladder::Raise(Mode::D); p];
            word.extend(vec![crate::fock::Ladder::Raise(Mode::G); q]);
            let op = ladders.word(&word);
            let value = matrix_element(FockIndex::new(p, q), &op, vac, &basis)?;
            let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
            norm_err = norm_err.max((value.re - (fact(p) * fact(q)).sqrt()).abs() + value.im.abs());
        }
    }
    let interior = basis.interior(2);
    let id = crate::fock::OperatorMatrix::identity(basis.dim());
    let mut comm_err: f64 = 0.0;
    for (a, ad) in [(&ladders.a_d, &ladders.a_d_dag), (&ladders.a_g, &ladders.a_g_dag)] {
        comm_err = comm_err.max((&a.commutator(ad)? - &id).max_abs_on(&interior));
    }
    comm_err = comm_err.max(ladders.a_d.commutator(&ladders.a_g_dag)?.max_abs());
    comm_err = comm_err.max(ladders.a_d.commutator(&ladders.a_g)?.max_abs());
    let catalog = if c.ncut >= 3 { matrix_element_catalog(&basis)? } else { Vec::new() };
    let linear_y = linear_y_corrections(&basis)?;
    let model = Model::new(ModelKind::Dirac(c.valley), c.ncut)?;
    let ed_level_degeneracy = group_degenerate(&model.diagonalize(0.0, 0.0)?, c.group_tol)?
        .iter()
        .map(|l| (l.landau_index(), l.degeneracy()))
        .collect();
    let result = BasisResult {
        ncut: c.ncut,
        dim: basis.dim(),
        index_round_trip: round_trip,
        normalization_max_error: norm_err,
        ladder_commutator_max_error: comm_err,
        catalog,
        linear_y,
        ed_level_degeneracy,
    };
    let meta = Metadata::new("basis-check", c);
    let mut w = ReportWriter::new(&c.out, c.format, meta)?;
    let mut rows: Vec<Vec<String>> = result
        .catalog
        .iter()
        .map(|e| {
            vec![
                format!("{} {} |0,0>", e.bra, e.word),
                f(e.value),
                f(e.expected),
                e.listed_sign.to_string(),
                e.expansion_sign.to_string(),
            ]
        })
        .collect();
    rows.extend(result.linear_y.iter().map(|e| {
        vec![e.description.clone(), f(e.value), f(e.expected), String::new(), String::new()]
    }));
    w.csv("matrix_elements", &["element", "value", "expected", "listed_sign", "expansion_sign"], &rows)?;
    w.json("basis_check", &result)?;
    let mut out = Outcome::new(w.written());
    let catalog_ok = result.catalog.iter().all(|e| (e.value - e.expected).abs() < 1e-12)
        && result.linear_y.iter().all(|e| (e.value - e.expected).abs() < 1e-12);
    let sign_flags = result.catalog.iter().filter(|e| !e.sign_agrees).count();
    out.summary.push(format!(
        "dim={} round_trip={} normalization_err={:e} commutator_err={:e}",
        result.dim, round_trip, norm_err, comm_err
    ));
    out.summary.push(format!(
        "matrix elements: {} entries, {} ({} sign mismatches)",
        result.catalog.len() + result.linear_y.len(),
        if catalog_ok { "all match" } else { "MISMATCH" },
        sign_flags
    ));
    if !(round_trip && norm_err < 1e-12 && comm_err < 1e-12 && catalog_ok) {
        out.violation = Some("basis or matrix-element check failed".into());
    }
    Ok(out)
}

pub fn execute(command: Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Spectrum => cmd_spectrum(config),
        Command::Perturb => cmd_perturb(config),
        Command::FitTau => cmd_fit_tau(config),
        Command::ValidateAlgebra => cmd_validate_algebra(config),
        Command::Bound => cmd_bound(config),
        Command::Thermo => cmd_thermo(config),
        Command::BasisCheck => cmd_basis_check(config),
    }
}

/// Parse, run, print and return the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = cli.overrides.resolve().and_then(|c| execute(cli.command, &c));
    match outcome {
        Ok(o) => {
            for line in &o.summary {
                println!("{line}");
            }
            for p in &o.files {
                println!("wrote {}", p.display());
            }
            for wmsg in &o.warnings {
                eprintln!("warning: {wmsg}");
            }
            match o.violation {
                Some(v) => {
                    eprintln!("error: numerical contract violated: {v}");
                    3
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
