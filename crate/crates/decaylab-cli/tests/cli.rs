//! End-to-end tests of the `decaylab` binary: exit-code contract, exact
//! pinned exponent values, output-format plumbing (JSON schema conformance,
//! CSV roundtrip), Monte Carlo reproducibility, and the output-sink
//! precedence rules (flag > config file > environment > default).

mod support;

use std::fs;

use support::{assert_valid, bin_cmd, rat_of, run, run_json};

// ─────────────────────────────────────────────────────────────────────────
// Pinned exponent values
// ─────────────────────────────────────────────────────────────────────────

#[test]
fn exponents_su13_pinned_values() {
    let out = run_json(&["exponents", "--group", "su1n", "--n", "3"]);
    assert_valid("exponents", &out);
    assert_eq!(out["group"], "SU(1,3)");
    assert_eq!(rat_of(&out["baseline"]["p"]), (54, 1));
    assert_eq!(rat_of(&out["improved"]["p"]), (6, 1));
}

#[test]
fn exponents_sl3_quaternion_pinned_values() {
    let out = run_json(&["exponents", "--group", "sl3", "--field", "H"]);
    assert_valid("exponents", &out);
    assert_eq!(rat_of(&out["baseline"]["p"]), (144, 1));
    assert_eq!(rat_of(&out["improved"]["p"]), (4, 1));
    // No product construction exists for this entry; the reason is surfaced
    // as a note rather than an error.
    assert!(out["howe_product"].is_null());
    assert!(!out["notes"].as_array().unwrap().is_empty());
}

#[test]
fn exponents_sl2_adjoint_real_pinned_values() {
    let out = run_json(&[
        "exponents", "--group", "sl2", "--rep", "adjoint", "--field", "R",
    ]);
    assert_valid("exponents", &out);
    assert_eq!(rat_of(&out["baseline"]["p"]), (3, 1));
    assert_eq!(rat_of(&out["improved"]["p"]), (2, 1));
}

// ─────────────────────────────────────────────────────────────────────────
// Exit-code contract: 0 success, 1 invariant failure, 2 usage
// ─────────────────────────────────────────────────────────────────────────

#[test]
fn unknown_group_is_usage_error() {
    let out = run(&["exponents", "--group", "e8"]);
    assert_eq!(out.status, 2, "stderr: {}", out.stderr);
    assert!(out.stderr.contains("error"));
}

#[test]
fn unsupported_numeric_model_is_usage_error() {
    let out = run(&["hc", "--group", "sp1n", "--n", "2", "--t", "1"]);
    assert_eq!(out.status, 2, "stderr: {}", out.stderr);
    assert!(out.stderr.contains("Sp(1,2)"));
}

#[test]
fn unknown_verify_suite_is_usage_error() {
    let out = run(&["verify", "--only", "nope"]);
    assert_eq!(out.status, 2, "stderr: {}", out.stderr);
    assert!(out.stderr.contains("unknown suite"));
}

#[test]
fn verify_clean_build_exits_zero() {
    let out = run(&["verify"]);
    assert_eq!(out.status, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("all suites passed"));

    let only = run(&["verify", "--only", "lattice"]);
    assert_eq!(only.status, 0);
    assert!(only.stdout.contains("lattice"));
    assert!(!only.stdout.contains("catalog:"));
}

#[test]
fn verify_json_matches_schema() {
    let out = run_json(&["verify"]);
    assert_valid("verify", &out);
    assert_eq!(out["passed"], true);
    assert!(out["first_failure"].is_null());
}

#[test]
fn injected_fault_is_invariant_failure() {
    let out = run(&["verify", "--inject-fault", "delta-b"]);
    assert_eq!(out.status, 1, "stdout: {}", out.stdout);
    assert!(
        out.stderr.contains("delta-b-crosscheck"),
        "first failing invariant should be named on stderr: {}",
        out.stderr
    );
}

// ─────────────────────────────────────────────────────────────────────────
// Table output formats
// ─────────────────────────────────────────────────────────────────────────

#[test]
fn table_default_has_full_family_grid() {
    let out = run_json(&["table"]);
    assert_valid("table", &out);
    // 3 rank-one adjoint rows, 4 families over n ∈ [2,8], and the two-
    // parameter family over n ≤ m ≤ 8.
    assert_eq!(out["rows"].as_array().unwrap().len(), 59);
}

#[test]
fn table_csv_roundtrips_against_json() {
    let args = ["table", "--n-max", "4"];
    let json = run_json(&args);

    let mut csv_args = vec!["--format", "csv"];
    csv_args.extend_from_slice(&args);
    let out = run(&csv_args);
    assert_eq!(out.status, 0);

    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        vec![
            "group", "mechanism", "n", "m", "p_num", "p_den", "p_decimal",
            "m_int", "epsilon_flag"
        ]
    );

    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let json_rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    for (csv_row, json_row) in rows.iter().zip(json_rows) {
        assert_eq!(csv_row.get(0).unwrap(), json_row["group"].as_str().unwrap());
        let (num, den) = rat_of(&json_row["p"]);
        assert_eq!(csv_row.get(4).unwrap(), num.to_string());
        assert_eq!(csv_row.get(5).unwrap(), den.to_string());
        let m_int: u64 = csv_row.get(7).unwrap().parse().unwrap();
        assert_eq!(m_int, json_row["m_int"].as_u64().unwrap());
    }
}

#[test]
fn table_empty_range_is_empty_success() {
    let json = run_json(&["table", "--n-min", "5", "--n-max", "2"]);
    assert_valid("table", &json);
    assert_eq!(json["rows"].as_array().unwrap().len(), 0);

    let text = run(&["table", "--n-min", "5", "--n-max", "2"]);
    assert_eq!(text.status, 0);
}

// ─────────────────────────────────────────────────────────────────────────
// Spherical-function commands
// ─────────────────────────────────────────────────────────────────────────

#[test]
fn hc_quadrature_matches_closed_form() {
    let out = run_json(&[
        "hc", "--group", "sl2", "--field", "R", "--t", "2", "--method", "quadrature",
    ]);
    assert_valid("hc_estimate", &out);
    assert_eq!(out["method"], "quadrature");
    let value = out["points"][0]["value"].as_f64().unwrap();
    assert!(
        (value - 0.464_099_29).abs() < 1e-6,
        "quadrature value drifted: {value}"
    );
    // Quadrature is deterministic: sampling metadata is omitted entirely.
    let point = out["points"][0].as_object().unwrap();
    assert!(!point.contains_key("std_error"));
    assert!(!point.contains_key("seed"));
}

#[test]
fn hc_monte_carlo_is_seed_deterministic() {
    let args = [
        "--format", "json", "hc", "--group", "sl2", "--field", "R",
        "--t", "1.5", "--samples", "2000", "--seed", "42",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status, 0);
    assert_eq!(
        first.stdout, second.stdout,
        "same seed must reproduce byte-identical output"
    );

    let mut other_seed: Vec<&str> = args.to_vec();
    other_seed[12] = "43";
    let third = run(&other_seed);
    assert_ne!(
        first.stdout, third.stdout,
        "a different seed should perturb the estimate"
    );

    let parsed: serde_json::Value = serde_json::from_str(&first.stdout).unwrap();
    assert_valid("hc_estimate", &parsed);
    assert_eq!(parsed["points"][0]["seed"].as_u64(), Some(42));
    assert_eq!(parsed["points"][0]["n_samples"].as_u64(), Some(2000));
}

#[test]
fn hc_envelope_check_emits_schema_valid_report() {
    let out = run_json(&[
        "hc", "--group", "sl2", "--field", "R", "--epsilon", "0.1",
        "--t-grid", "1:6", "--method", "quadrature",
    ]);
    assert_valid("hc_bound_check", &out);
    assert_eq!(out["pass_lower"], true);
    assert_eq!(out["pass_upper"], true);
    assert_eq!(out["points"].as_array().unwrap().len(), 6);
}

#[test]
fn kazhdan_reports_seeded_witness() {
    let out = run_json(&[
        "kazhdan", "--group", "so01n", "--n", "2", "--t", "2",
        "--samples", "2000", "--seed", "9",
    ]);
    assert_valid("kazhdan", &out);
    assert_eq!(out["xi"]["seed"].as_u64(), Some(9));
    let kappa = out["kappa"].as_f64().unwrap();
    assert!(kappa > 0.0 && kappa < 0.5, "kappa out of range: {kappa}");
}

#[test]
fn orbit_pack_small_run_matches_schema() {
    let out = run_json(&[
        "orbit-pack", "--example", "sl2-adjoint", "--c0-grid", "2^-4:2^-7",
        "--grid-resolution", "200", "--samples", "200", "--seed", "11",
    ]);
    assert_valid("orbit_pack", &out);
    assert_eq!(out["example"], "sl2_adjoint");
    assert_eq!(out["seed"].as_u64(), Some(11));
    let points = out["points"].as_array().unwrap();
    assert_eq!(points.len(), 4);
    for point in points {
        assert_eq!(point["violations"].as_u64(), Some(0));
    }
}

#[test]
fn orbit_pack_needs_enough_grid_points_for_a_fit() {
    let out = run(&[
        "orbit-pack", "--example", "sl3-standard", "--c0-grid", "2^-4:2^-6",
        "--grid-resolution", "200", "--samples", "200",
    ]);
    assert_eq!(out.status, 2, "three octaves cannot support a fit");
    assert!(out.stderr.contains("4 points"));
}

// ─────────────────────────────────────────────────────────────────────────
// Output sinks: --out, environment directory, config file, precedence
// ─────────────────────────────────────────────────────────────────────────

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "--format", "json", "--out", path.to_str().unwrap(),
        "exponents", "--group", "sl2", "--field", "R", "--rep", "adjoint",
    ]);
    assert_eq!(out.status, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.is_empty(), "file sink should silence stdout");
    let body: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("exponents", &body);
}

#[test]
fn env_dir_anchors_relative_out_paths() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin_cmd()
        .env("DECAYLAB_OUT_DIR", dir.path())
        .args([
            "--format", "json", "--out", "nested/report.json",
            "table", "--n-max", "2",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let written = dir.path().join("nested/report.json");
    assert!(written.exists(), "relative --out should land under the env dir");
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("decaylab.conf");
    let out_dir = dir.path().join("results");
    fs::write(
        &conf,
        format!(
            "# defaults for this machine\nformat = json\nout_dir = {}\nseed = 99\n",
            out_dir.display()
        ),
    )
    .unwrap();

    // Config alone: JSON format, seed 99, file lands under out_dir.
    let out = run(&[
        "--config", conf.to_str().unwrap(), "--out", "k.json",
        "kazhdan", "--group", "so01n", "--n", "2", "--t", "1", "--samples", "2000",
    ]);
    assert_eq!(out.status, 0, "stderr: {}", out.stderr);
    let body: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("k.json")).unwrap()).unwrap();
    assert_eq!(body["xi"]["seed"].as_u64(), Some(99));

    // Explicit flags override the same config.
    let out = run(&[
        "--config", conf.to_str().unwrap(), "--format", "text", "--out", "k.txt",
        "kazhdan", "--group", "so01n", "--n", "2", "--t", "1",
        "--samples", "2000", "--seed", "5",
    ]);
    assert_eq!(out.status, 0, "stderr: {}", out.stderr);
    let text = fs::read_to_string(out_dir.join("k.txt")).unwrap();
    assert!(text.contains("seed = 5"), "flag seed must win: {text}");
    assert!(!text.trim_start().starts_with('{'), "flag format must win");
}

#[test]
fn config_env_flag_precedence_for_out_dir() {
    let conf_dir = tempfile::tempdir().unwrap();
    let env_dir = tempfile::tempdir().unwrap();
    let conf = conf_dir.path().join("decaylab.conf");
    fs::write(
        &conf,
        format!("out_dir = {}\n", conf_dir.path().join("from-config").display()),
    )
    .unwrap();

    // Config out_dir beats the environment directory.
    let status = bin_cmd()
        .env("DECAYLAB_OUT_DIR", env_dir.path())
        .args([
            "--config", conf.to_str().unwrap(), "--format", "json",
            "--out", "t.json", "table", "--n-max", "2",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(conf_dir.path().join("from-config/t.json").exists());
    assert!(!env_dir.path().join("t.json").exists());

    // Without a config, the environment directory is used.
    let status = bin_cmd()
        .env("DECAYLAB_OUT_DIR", env_dir.path())
        .args(["--format", "json", "--out", "t.json", "table", "--n-max", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(env_dir.path().join("t.json").exists());
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "formt = json\n").unwrap();
    let out = run(&["--config", conf.to_str().unwrap(), "table", "--n-max", "2"]);
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("formt"));
}
