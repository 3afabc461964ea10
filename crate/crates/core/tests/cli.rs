use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dncg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dncg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    let out = dir.to_str().unwrap();
    all.extend(["--out", out]);
    dncg(&all)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bound_with_quoted_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["bound", "--constants", "paper", "--field", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("bound.json"));
    assert_eq!(v["metadata"]["subcommand"], "bound");
    assert_eq!(v["metadata"]["constants"], "paper");
    let r = &v["result"]["result"];
    assert!((r["sqrt_tau_max_m"].as_f64().unwrap() - 7.84e6).abs() < 1e4);
    assert!((r["sqrt_tau_max_ev"].as_f64().unwrap() - 1.57).abs() < 0.01);
    let csv = fs::read_to_string(dir.path().join("bound.csv")).unwrap();
    assert!(csv.starts_with("# artifact: dnc-graphene\n"));
    assert!(csv.contains("# constants: paper\n"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["perturb", "--ncut", "8", "--tau", "1e-3", "--theta", "1e-3", "--max-level", "2"];
    assert_eq!(run_in(a.path(), &args).status.code(), Some(0));
    assert_eq!(run_in(b.path(), &args).status.code(), Some(0));
    for name in ["perturbation.csv", "perturbation.json"] {
        let x = fs::read_to_string(a.path().join(name)).unwrap();
        let y = fs::read_to_string(b.path().join(name)).unwrap();
        // the output directory is echoed in the metadata
        let x = x.replace(a.path().to_str().unwrap(), "OUT");
        let y = y.replace(b.path().to_str().unwrap(), "OUT");
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn zero_cutoff_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["spectrum", "--ncut", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ncut"));
}

#[test]
fn bad_flag_values_and_unknown_keys_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["bound", "--units", "si"]).status.code(), Some(2));
    assert_eq!(dncg(&["no-such-command"]).status.code(), Some(2));
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "ncutt = 4\n").unwrap();
    let o = run_in(dir.path(), &["bound", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "ncut = 6\nformat = \"json\"\nvalley = \"Kprime\"\n").unwrap();
    let o = run_in(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap(), "--ncut", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!dir.path().join("spectrum.csv").exists());
    let v = json(&dir.path().join("spectrum.json"));
    assert_eq!(v["metadata"]["config"]["ncut"], 5);
    assert_eq!(v["result"]["valley"], "Kprime");
    assert_eq!(v["result"]["eigenpairs"].as_array().unwrap().len(), 2 * 36);
}

#[test]
fn spectrum_physical_units() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["spectrum", "--ncut", "6", "--units", "physical", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&dir.path().join("spectrum.json"));
    let first = v["result"]["eigenpairs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["level_index"] == 1)
        .unwrap()["energy"]
        .as_f64()
        .unwrap();
    assert!((first - 0.0363).abs() < 1e-4, "{first}");
}

#[test]
fn fit_tau_rejects_bad_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "ncut = 4\ntau_samples = [1e-4, 2e-4]\n").unwrap();
    let o = run_in(dir.path(), &["fit-tau", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn algebra_thermo_and_basis_succeed() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["validate-algebra", "thermo", "basis-check"] {
        let o = run_in(&dir.path().join(cmd), &[cmd, "--ncut", "8"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let t = json(&dir.path().join("thermo/thermo.json"));
    let rows = t["result"]["ordering"]["rows"].as_array().unwrap();
    let stiff = rows.iter().find(|r| r["quantity"] == "dP/dn").unwrap();
    assert_eq!(stiff["consistent"], false);
}

#[test]
fn deformed_algebra_halving_passes() {
    // deformed relations are only approximate; the halving study decides
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["validate-algebra", "--ncut", "8", "--theta", "0.01", "--tau", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn large_tau_warns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["perturb", "--ncut", "4", "--tau", "0.5", "--max-level", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("perturbative window"));
}

#[test]
fn contract_violation_exits_3_after_writing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    fs::write(&cfg, "algebra_tol = 1e-30\n").unwrap();
    let o = run_in(dir.path(), &["validate-algebra", "--ncut", "6", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("algebra.json").exists());
}
