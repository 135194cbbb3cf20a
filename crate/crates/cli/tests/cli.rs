//! End-to-end checks of the command-line interface: exit codes, file
//! outputs, schema conformance, and bit-reproducibility.

mod support;

use std::fs;
use std::path::Path;

use support::{bellsim, read_json, schema, validate};

fn stdout_of(output: &std::process::Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn stderr_of(output: &std::process::Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

#[test]
fn basis_writes_valid_json_and_census() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "basis",
        "--dim",
        "4",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("symmetric=6 antisymmetric=2 neither=8"));

    let states = read_json(&dir.path().join("states.json"));
    validate(&schema("basis.schema.json"), &states).unwrap();
    assert_eq!(states["states"].as_array().unwrap().len(), 16);

    let manifest = read_json(&dir.path().join("manifest.json"));
    validate(&schema("manifest.schema.json"), &manifest).unwrap();
    for name in manifest["outputs"].as_array().unwrap() {
        assert!(dir.path().join(name.as_str().unwrap()).exists());
    }

    // Identity overlap matrix on the diagonal.
    let overlap = fs::read_to_string(dir.path().join("overlap.csv")).unwrap();
    let second_line = overlap.lines().nth(1).unwrap();
    assert!(second_line.starts_with("psi_00,1.000,0.000"));
}

#[test]
fn basis_dim_two_gives_four_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "basis",
        "--dim",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let states = read_json(&dir.path().join("states.json"));
    assert_eq!(states["states"].as_array().unwrap().len(), 4);
}

#[test]
fn basis_rejects_bad_dimension_as_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "basis",
        "--dim",
        "12",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr_of(&out));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = bellsim(&["basis", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_gates_passes_and_reports() {
    let out = bellsim(&["verify-gates"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert_eq!(text.matches("PASS").count(), 3);
    assert!(text.contains("success probability 0.500"));
}

#[test]
fn verify_gates_deterministic_has_unit_probability() {
    let out = bellsim(&["verify-gates", "--recombination", "deterministic"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("success probability 1.000"));
}

#[test]
fn verify_gates_small_window_is_config_error_for_x2() {
    let out = bellsim(&["verify-gates", "--window", "-2..2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("SPP(+2)"), "{err}");
    assert!(err.contains("mode 1 maps to 3"), "{err}");
}

#[test]
fn verify_gates_detuned_interferometer_fails_verification() {
    let out = bellsim(&["verify-gates", "--trim-phase", "0.1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout_of(&out).contains("FAIL"));
}

#[test]
fn experiment_all16_outputs_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "experiment",
        "--all16",
        "--noise",
        "paper",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));

    let results = read_json(&dir.path().join("results.json"));
    validate(&schema("experiment.schema.json"), &results).unwrap();
    let states = results["states"].as_array().unwrap();
    assert_eq!(states.len(), 16);
    for s in states {
        assert_eq!(s["witness"]["certified_dimension"], 4);
        assert_eq!(s["overlap_row"].as_array().unwrap().len(), 16);
    }

    for m in 0..4 {
        let table = fs::read_to_string(dir.path().join(format!("overlap_group{m}.csv"))).unwrap();
        assert_eq!(table.lines().count(), 5);
        assert!(table.starts_with(&format!(",psi_{m}0,psi_{m}1,psi_{m}2,psi_{m}3")));
    }

    let manifest = read_json(&dir.path().join("manifest.json"));
    validate(&schema("manifest.schema.json"), &manifest).unwrap();
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 5);
}

#[test]
fn experiment_seeded_runs_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = bellsim(&[
            "experiment",
            "--all16",
            "--noise",
            "paper",
            "--counts",
            "1e4",
            "--replicas",
            "200",
            "--seed",
            "7",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr_of(&out));
    }
    for name in [
        "results.json",
        "overlap_group0.csv",
        "overlap_group1.csv",
        "overlap_group2.csv",
        "overlap_group3.csv",
        "manifest.json",
    ] {
        let a = fs::read(dir_a.path().join(name)).unwrap();
        let b = fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical seeded runs");
    }
}

#[test]
fn experiment_different_seeds_differ_with_counts() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for (dir, seed) in [(&dir_a, "1"), (&dir_b, "2")] {
        let out = bellsim(&[
            "experiment",
            "--counts",
            "1e4",
            "--replicas",
            "100",
            "--seed",
            seed,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr_of(&out));
    }
    let a = fs::read(dir_a.path().join("results.json")).unwrap();
    let b = fs::read(dir_b.path().join("results.json")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn experiment_appendix_style_uses_comma_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "experiment",
        "--all16",
        "--noise",
        "paper",
        "--appendix-style",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = fs::read_to_string(dir.path().join("overlap_group0.csv")).unwrap();
    // Comma-decimal cells are quoted per RFC 4180.
    assert!(table.contains("\"0,804\""), "{table}");
}

#[test]
fn experiment_accepts_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.json");
    fs::write(
        &config_path,
        r#"{"gate": "x", "alpha_over_pi": 0.25, "recombination": "probabilistic"}"#,
    )
    .unwrap();
    let out = bellsim(&[
        "experiment",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let results = read_json(&dir.path().join("out/results.json"));
    let state = &results["states"][0];
    assert_eq!(state["config"]["m"], 1);
    assert_eq!(state["config"]["n"], 1);
    assert!((state["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((state["success_probability"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn experiment_bad_config_reports_path_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.json");
    fs::write(
        &config_path,
        r#"{"gate": "x", "alpha_over_pi": "not-a-number"}"#,
    )
    .unwrap();
    let out = bellsim(&[
        "experiment",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("alpha_over_pi"), "{}", stderr_of(&out));
}

#[test]
fn witness_reports_certification() {
    let out = bellsim(&["witness", "--m", "0", "--n", "0", "--noise", "paper"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    validate(&schema("witness.schema.json"), &doc).unwrap();
    assert_eq!(doc["witness"]["certified_dimension"], 4);
    assert!(doc["witness"]["f_wit"].as_f64().unwrap() > 0.75);
}

#[test]
fn dense_code_noiseless_is_four_bits() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&["dense-code", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("4.000 bits"));

    let summary = read_json(&dir.path().join("summary.json"));
    validate(&schema("dense_code.schema.json"), &summary).unwrap();
    assert_eq!(summary["all_correct"], true);

    let confusion = fs::read_to_string(dir.path().join("confusion.csv")).unwrap();
    let row0 = confusion.lines().nth(1).unwrap();
    assert!(row0.starts_with("0,1.000,0.000"));
}

#[test]
fn dense_code_with_noise_loses_bits() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "dense-code",
        "--noise",
        "paper",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = read_json(&dir.path().join("summary.json"));
    let bits = summary["channel_bits"].as_f64().unwrap();
    assert!(bits < 4.0 && bits > 2.0, "bits {bits}");
    assert_eq!(summary["all_correct"], true);
}

#[test]
fn noise_fit_inverts_the_ceiling() {
    let out = bellsim(&["noise-fit", "--target-fidelity", "0.91"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let eps = doc["crosstalk_epsilon"].as_f64().unwrap();
    assert!((eps - 0.09).abs() < 1e-12);
}

#[test]
fn noise_model_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("noise.json");
    fs::write(
        &model_path,
        r#"{
            "spiral": {"ratios": {"alpha_over_beta": 0.69, "alpha_over_gamma": 0.45}},
            "crosstalk_epsilon": 0.11,
            "coherence_factor": 0.97
        }"#,
    )
    .unwrap();
    let out = bellsim(&[
        "experiment",
        "--noise",
        model_path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let results = read_json(&dir.path().join("out/results.json"));
    let f = results["states"][0]["fidelity"].as_f64().unwrap();
    assert!((f - 0.804).abs() < 0.001, "fidelity {f}");
}

#[test]
fn invalid_noise_file_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("noise.json");
    fs::write(
        &model_path,
        r#"{"spiral": {"ratios": {"alpha_over_beta": 0.69, "alpha_over_gamma": 0.45}},
            "crosstalk_epsilon": 7.0, "coherence_factor": 0.97}"#,
    )
    .unwrap();
    let out = bellsim(&[
        "experiment",
        "--noise",
        model_path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_files_use_crlf_line_endings() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&["basis", "--dim", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let bytes = fs::read(dir.path().join("overlap.csv")).unwrap();
    assert!(bytes.windows(2).any(|w| w == b"\r\n"));
}

#[test]
fn manifest_is_written_last_and_lists_everything() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(&[
        "experiment",
        "--all16",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest = read_json(&dir.path().join("manifest.json"));
    let mut listed: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    listed.push("manifest.json".into());
    listed.sort();
    let mut on_disk: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
        .collect();
    on_disk.sort();
    assert_eq!(listed, on_disk);
}

#[test]
fn path_support_exists() {
    // Keep the schemas directory wired to the crate: every shipped schema
    // parses.
    for name in [
        "basis.schema.json",
        "experiment.schema.json",
        "dense_code.schema.json",
        "witness.schema.json",
        "manifest.schema.json",
    ] {
        let s = schema(name);
        assert!(s.is_object());
    }
    let _ = Path::new(env!("CARGO_MANIFEST_DIR"));
}
