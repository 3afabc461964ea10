//! End-to-end acceptance criteria. Each criterion prints one line
//! `criterion N: PASS|FAIL <detail>` whether or not output capture is on.

use std::io::Write;

use dnc_graphene::algebra::{build_phase_space, build_tau_products, dnc_scaling_study, verify_canonical_algebra};
use dnc_graphene::cli::cmd_bound;
use dnc_graphene::config::{OutputFormat, RunConfig};
use dnc_graphene::fock::{matrix_element, FockIndex, TruncatedBasis};
use dnc_graphene::hamiltonian::{Model, ModelKind, Valley};
use dnc_graphene::phenomenology::{eos, ordering_table, Relation};
use dnc_graphene::spectral::{
    fit_tau_response, landau_index, linear_y_corrections, matrix_element_catalog, perturbation_report,
    DEFAULT_GROUP_TOL,
};
use dnc_graphene::units::ConstantsSet;
use dnc_graphene::Result;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

const TAU_SWEEP: [f64; 6] = [1e-4, 2e-4, 3e-4, 5e-4, 7e-4, 1e-3];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn landau_spectrum() -> Result<Verdict> {
    let sol = Model::dirac(40, Valley::K)?.diagonalize(0.0, 0.0)?;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for p in sol.pairs().iter().filter(|p| p.reliable) {
        let n = landau_index(p.energy);
        if n.abs() > 20 {
            continue;
        }
        let exact = n.signum() as f64 * (2.0 * n.abs() as f64).sqrt();
        // the zero level has no scale of its own; compare it in units of the gap
        worst = worst.max((p.energy - exact).abs() / exact.abs().max(1.0));
        checked += 1;
    }
    verdict(
        worst < 1e-8 && checked > 0,
        format!("{checked} reliable eigenvalues with |n| <= 20, max relative error {worst:.2e}"),
    )
}

fn matrix_elements() -> Result<Verdict> {
    let basis = TruncatedBasis::new(6);
    let catalog = matrix_element_catalog(&basis)?;
    let linear = linear_y_corrections(&basis)?;
    let targets = [6f64.sqrt(), 2f64.sqrt(), 1.0];
    let mut worst: f64 = 0.0;
    let mut on_target = true;
    for e in &catalog {
        worst = worst.max((e.value - e.expected).abs());
        on_target &= targets.iter().any(|t| (e.expected.abs() - t).abs() < 1e-15);
    }
    for e in &linear {
        worst = worst.max((e.value - e.expected).abs());
    }
    let ops = build_phase_space(&basis, 1.0);
    let xyy = build_tau_products(&ops).xyy;
    let vac = FockIndex::VACUUM;
    let one = FockIndex::new(0, 1);
    let vanishing = [
        matrix_element(vac, &xyy, vac, &basis)?,
        matrix_element(one, &xyy, one, &basis)?,
        matrix_element(vac, &ops.y, vac, &basis)?,
    ];
    for v in &vanishing {
        worst = worst.max(v.norm());
    }
    verdict(
        catalog.len() == 10 && on_target && worst < 1e-12,
        format!(
            "{} catalog, {} vanishing and {} single-quantum elements, max deviation {worst:.2e}",
            catalog.len(),
            vanishing.len(),
            linear.len()
        ),
    )
}

/// `(level index, largest projected first-order entry)` per level.
type LevelMaxima = Vec<(i64, f64)>;

fn first_order_nullity(kind: ModelKind) -> Result<(bool, f64, LevelMaxima)> {
    let report = perturbation_report(&Model::new(kind, 40)?, 0.0, 1.0, 3, DEFAULT_GROUP_TOL)?;
    let per_level: Vec<(i64, f64)> = report.levels.iter().map(|l| (l.level_index, l.first_order_max_abs)).collect();
    let worst = per_level.iter().fold(0.0f64, |m, (_, v)| m.max(*v));
    Ok((worst < 1e-10, worst, per_level))
}

fn first_order() -> Result<Verdict> {
    let (pass, worst, per_level) = first_order_nullity(ModelKind::Dirac(Valley::K))?;
    let failing: Vec<String> = per_level
        .iter()
        .filter(|(_, v)| *v >= 1e-10)
        .map(|(n, v)| format!("n={n}:{v:.3}"))
        .collect();
    verdict(
        pass,
        format!("max projected entry {worst:.3e} over |n| <= 3; above 1e-10: [{}]", failing.join(" ")),
    )
}

fn second_order_consistency(kind: ModelKind) -> Result<(bool, f64, f64, f64)> {
    let model = Model::new(kind, 40)?;
    let report = perturbation_report(&model, 0.0, 1.0, 0, DEFAULT_GROUP_TOL)?;
    let shift = report
        .level(0)
        .map(|l| l.second_order.iter().cloned().fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::NAN);
    let fit = fit_tau_response(&model, 0, &TAU_SWEEP)?;
    let rel = (fit.c2 - shift).abs() / shift.abs();
    Ok((shift < 0.0 && rel < 0.05, shift, fit.c2, rel))
}

fn second_order() -> Result<Verdict> {
    let (pass, shift, c2, rel) = second_order_consistency(ModelKind::Dirac(Valley::K))?;
    verdict(
        pass,
        format!("ground shift coefficient {shift:.3e}, exact-diagonalization c2 {c2:.3e}, relative difference {rel:.2e}"),
    )
}

fn bound() -> Result<Verdict> {
    let dir = tempfile::tempdir()?;
    let cfg = RunConfig {
        out: dir.path().to_path_buf(),
        format: OutputFormat::Json,
        constants: ConstantsSet::Paper,
        delta_e: 1e-3,
        l_b: Some(2.5e-8),
        ..RunConfig::default()
    };
    cmd_bound(&cfg)?;
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("bound.json"))?)?;
    let input = &json["result"]["input"];
    let r = &json["result"]["result"];
    let sqrt_tau = r["sqrt_tau_max_m"].as_f64().unwrap_or(f64::NAN);
    let ev = r["sqrt_tau_max_ev"].as_f64().unwrap_or(f64::NAN);
    let inputs_ok = input["v_f"] == 1e6 && input["hbar"] == 6e-15 && input["l_b"] == 2.5e-8;
    verdict(
        inputs_ok && (5e6..=2e7).contains(&sqrt_tau) && (1.0 / 3.0..=3.0).contains(&ev),
        format!("sqrt(tau) <= {sqrt_tau:.3e} 1/m, {ev:.3} eV"),
    )
}

fn dnc_algebra() -> Result<Verdict> {
    let ops = build_phase_space(&TruncatedBasis::new(20), 1.0);
    let study = dnc_scaling_study(&ops, 0.01, 0.01, 3.5, 1e-13);
    let ratios: Vec<String> = study
        .rows
        .iter()
        .map(|r| match r.ratio {
            Some(x) => format!("{x:.2}"),
            None => "exact".into(),
        })
        .collect();
    verdict(
        study.rows.len() == 6 && study.all_pass(),
        format!("residual ratios on halving: [{}]", ratios.join(", ")),
    )
}

fn canonical_algebra() -> Result<Verdict> {
    let basis = TruncatedBasis::new(20);
    let ops = build_phase_space(&basis, 1.0);
    let report = verify_canonical_algebra(&ops, 1e-12);
    let defect = build_tau_products(&ops).rearrangement_defect(&basis);
    verdict(
        report.all_pass() && defect < 1e-12,
        format!(
            "{} relations, max deviation {:.2e}; rearrangement identity defect {defect:.2e}",
            report.relations.len(),
            report.max_deviation()
        ),
    )
}

fn thermodynamics() -> Result<Verdict> {
    let mut runner = TestRunner::deterministic();
    let strategy = (-6.0f64..6.0).prop_map(|e| 10f64.powf(e));
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p_f = strategy.new_tree(&mut runner).expect("sampling").current();
        let s = eos(p_f, 2.0, 1.0, 1.0)?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        worst = worst
            .max(rel(s.p, s.u / 3.0))
            .max(rel(s.dp_dn, s.mu / 3.0))
            .max(rel(s.gamma, 4.0 / 3.0))
            // Gibbs–Duhem at T = 0: u + P = μ n
            .max(rel(s.u + s.p, s.mu * s.n));
    }
    let t = ordering_table(1.0, -0.01, 2.0, 1.0, 1.0)?;
    let rows_ok = ["n", "u", "mu", "P", "gamma"]
        .iter()
        .all(|q| t.row(q).is_some_and(|r| r.consistent == Some(true)));
    let flagged = t
        .row("dP/dn")
        .is_some_and(|r| r.consistent == Some(false) && r.relation == Relation::Less);
    verdict(
        worst < 4.0 * f64::EPSILON && rows_ok && flagged,
        format!("max identity deviation {worst:.1e}; n,u,mu,P,gamma rows match; dP/dn flagged: {flagged}"),
    )
}

fn valley_and_particle_hole() -> Result<Verdict> {
    let k = Model::dirac(40, Valley::K)?.diagonalize(0.0, 0.0)?.reliable_eigenvalues();
    let kp = Model::dirac(40, Valley::KPrime)?.diagonalize(0.0, 0.0)?.reliable_eigenvalues();
    let valley = if k.len() == kp.len() {
        k.iter().zip(&kp).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    } else {
        f64::INFINITY
    };
    let mirror = k.iter().zip(k.iter().rev()).fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
    verdict(
        valley < 1e-10 && mirror < 1e-10,
        format!("{} reliable levels; K vs K' {valley:.2e}; E -> -E {mirror:.2e}", k.len()),
    )
}

fn report(n: usize, outcome: Result<Verdict>) -> bool {
    let (pass, detail) = match outcome {
        Ok(v) => (v.pass, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let line = format!("criterion {n}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    // bypass the test harness capture so the table is always visible
    let mut out = std::io::stdout();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    pass
}

#[test]
fn acceptance_criteria() {
    let criteria: [fn() -> Result<Verdict>; 9] = [
        landau_spectrum,
        matrix_elements,
        first_order,
        second_order,
        bound,
        dnc_algebra,
        canonical_algebra,
        thermodynamics,
        valley_and_particle_hole,
    ];
    let failed: Vec<usize> = criteria
        .iter()
        .enumerate()
        .filter_map(|(i, c)| (!report(i + 1, c())).then_some(i + 1))
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

/// The same first-order statement for the Fock-labeled model, where H0 is
/// diagonal in `|n_d, n_g⟩` and the perturbation is the scalar τ term.
#[test]
fn labeled_model_first_order_vanishes() {
    let (pass, worst, _) = first_order_nullity(ModelKind::PaperLabeled).unwrap();
    assert!(pass, "max projected entry {worst:e}");
}

#[test]
fn labeled_model_second_order_matches_sweep() {
    let (pass, shift, c2, rel) = second_order_consistency(ModelKind::PaperLabeled).unwrap();
    assert!(pass, "shift {shift} c2 {c2} rel {rel}");
    assert!(rel < 1e-3);
}
