use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_string()
}

fn qdfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdfs")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Writes a variant of a shipped config with one line substituted.
fn variant(dir: &Path, base: &str, from: &str, to: &str) -> String {
    let text = std::fs::read_to_string(configs().join(base)).unwrap();
    assert!(text.contains(from), "{base} has no {from:?}");
    let p = dir.join(format!("variant-{}.toml", text.len() ^ to.len()));
    std::fs::write(&p, text.replace(from, to)).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn report_has_the_documented_top_level_keys() {
    let out = qdfs(&["axioms"]);
    assert_eq!(code(&out), 0);
    let keys: Vec<String> = json(&out).as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["config", "version", "results", "warnings", "timings"]);
}

#[test]
fn axioms_default_and_generator_level() {
    let r = json(&qdfs(&["axioms"]));
    let checks = r["results"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(code(&qdfs(&["axioms", "--max-word-len", "1"])), 0);
}

#[test]
fn faulty_antipode_exits_2_with_counterexample() {
    let out = qdfs(&["axioms", "--inject-faulty-antipode"]);
    assert_eq!(code(&out), 2);
    let r = json(&out);
    let bad = r["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "antipode")
        .unwrap();
    assert_eq!(bad["passed"], false);
    assert_eq!(bad["counterexample"]["word"], "α");
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(code(&qdfs(&[])), 1);
    assert_eq!(code(&qdfs(&["frobnicate"])), 1);
    assert_eq!(code(&qdfs(&["axioms", "--max-word-len", "x"])), 1);
    assert_eq!(code(&qdfs(&["evolve"])), 1);
    assert_eq!(code(&qdfs(&["invariants", "--config", "/nonexistent.toml"])), 1);
    assert_eq!(code(&qdfs(&["--help"])), 0);
    assert_eq!(code(&qdfs(&["--version"])), 0);
}

#[test]
fn invariants_two_qubits_is_the_singlet() {
    let out = qdfs(&["invariants", "--config", &config("default.toml")]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["results"]["multiplicity"], 1);
    let overlap = r["results"]["singlet"]["kernel_overlap"].as_f64().unwrap();
    assert!((overlap - 1.0).abs() < 1e-10);
    assert!(r["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn invariants_four_qubits_have_two_invariant_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = variant(
        dir.path(),
        "sweep.toml",
        "n_qubits = 2\n\n[sweep]",
        "n_qubits = 4\n\n[sweep]",
    );
    let cfg = std::fs::read_to_string(&cfg)
        .unwrap()
        .replace("mu = 0.7\nn_qubits = 4", "mu = 0.5\nn_qubits = 4");
    let p = dir.path().join("n4.toml");
    std::fs::write(&p, cfg).unwrap();
    let out = qdfs(&["invariants", "--config", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["results"]["multiplicity"], 2);
}

#[test]
fn verbatim_invariants_warn_without_changing_exit_code() {
    let out = qdfs(&["invariants", "--config", &config("verbatim.example.toml")]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    let codes: Vec<&str> = r["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["code"].as_str().unwrap())
        .collect();
    assert!(codes.contains(&"verbatim_transverse_residuals"));
    let s = &r["results"]["singlet"];
    assert!(s["residuals"]["k3"].as_f64().unwrap() < 1e-12);
    assert!(s["transverse_residuals"]["k1"].as_f64().unwrap() > 1e-3);
}

#[test]
fn evolve_default_writes_matching_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("out").join("series.csv");
    let json_path = dir.path().join("report.json");
    let out = qdfs(&[
        "evolve",
        "--config",
        &config("default.toml"),
        "--csv",
        csv_path.to_str().unwrap(),
        "--output",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,fidelity,trace_distance,purity,energy");
    assert_eq!(lines.len(), 102);

    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report, json(&out));
    assert_eq!(report["results"]["csv_series"], "pure");
    let series = &report["results"]["pure"]["series"];
    for (i, line) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let from_json: Vec<String> = ["times", "fidelity", "trace_distance", "purity", "energy"]
            .iter()
            .map(|k| series[*k][i].to_string())
            .collect();
        assert_eq!(cells, from_json, "row {i}");
        assert!(cells[1].parse::<f64>().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn evolve_contrast_is_informational() {
    let out = qdfs(&["evolve", "--config", &config("contrast.toml")]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["results"]["pure"]["asserted"], false);
    let min_purity = r["results"]["pure"]["summary"]["min_purity"].as_f64().unwrap();
    assert!(min_purity < 1.0 - 1e-3);
}

#[test]
fn triplet_component_loses_fidelity() {
    let r = json(&qdfs(&["evolve", "--config", &config("triplet.toml")]));
    let f = r["results"]["pure"]["summary"]["min_fidelity"].as_f64().unwrap();
    assert!(f < 0.999);
    // pinned from the shipped configuration
    assert!((f - 0.846_263_238_782).abs() < 1e-9, "{f}");
}

#[test]
fn non_invariant_state_in_a_theorem_run_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = variant(
        dir.path(),
        "default.toml",
        "register = \"singlet\"",
        "register = \"++\"",
    );
    let out = qdfs(&["evolve", "--config", &cfg]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["results"]["pure"]["passed"], false);
}

#[test]
fn invalid_bath_and_unknown_keys_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = variant(dir.path(), "default.toml", "fock_cutoff = 8", "fock_cutoff = 1");
    assert_eq!(code(&qdfs(&["evolve", "--config", &cfg])), 1);
    let cfg = variant(dir.path(), "default.toml", "points = 101", "points = 101\nstep = 0.1");
    let out = qdfs(&["evolve", "--config", &cfg]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
}

#[test]
fn sweep_table_and_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = variant(dir.path(), "sweep.toml", "n_qubits = [2, 4, 6]", "n_qubits = [2, 4]");
    let out = qdfs(&["sweep", "--config", &cfg]);
    assert_eq!(code(&out), 0);
    let table = json(&out)["results"]["table"].as_array().unwrap().clone();
    let mult: Vec<u64> = table.iter().map(|r| r["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mult, [1, 1, 1, 2, 2, 2]);

    let full = json(&qdfs(&["sweep", "--config", &config("sweep.toml")]));
    let n6: Vec<u64> = full["results"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["n_qubits"] == 6)
        .map(|r| r["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(n6, [5, 5, 5]);

    let empty = variant(dir.path(), "sweep.toml", "mu = [0.3, 0.7, 1.0]", "mu = []");
    assert_eq!(code(&qdfs(&["sweep", "--config", &empty])), 1);
}
