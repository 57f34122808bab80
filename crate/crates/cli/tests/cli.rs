//! End-to-end tests driving the `grasstat` binary: exit codes, payload
//! schemas, CSV layouts, determinism, and agreement with the library.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn grasstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grasstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn grasstat_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grasstat"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(1), "expected exit 1");
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

/// Validates a payload against one of the schema documents shipped with the
/// binary.
fn validate(instance: &Value, schema_file: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema_file);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|err| panic!("read {}: {err}", path.display()));
    let schema: Value = serde_json::from_str(&text).expect("schema parses");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|err| err.to_string()).collect();
    assert!(errors.is_empty(), "{schema_file} violations: {errors:#?}");
}

/// Splits CSV output into the schema comment, the header, and numeric rows.
fn csv_rows(out: &Output) -> (String, String, Vec<Vec<f64>>) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8");
    let mut lines = text.lines();
    let comment = lines.next().expect("schema comment").to_string();
    let header = lines.next().expect("header").to_string();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|cell| cell.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect();
    (comment, header, rows)
}

fn csv_descriptor(schema_file: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema_file);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_code_file(path: &Path, t: usize, m: usize, points: Value) {
    let k = points.as_array().expect("points array").len();
    let doc = serde_json::json!({ "T": t, "M": m, "K": k, "points": points });
    std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
}

/// The two coordinate lines in the plane: chordal product 1, exact pairwise
/// error probability 1/(2 + 2ρ).
fn orthogonal_pair_file(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("pair.json");
    write_code_file(
        &path,
        2,
        1,
        serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]),
    );
    path
}

#[test]
fn gv_by_cardinality_matches_reference() {
    let out = grasstat(&["gv", "--T", "10", "--M", "2", "--K", "512"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.gv.v1.json");
    assert_eq!(payload["schema"], "grasstat.gv.v1");
    assert_eq!(payload["K"], 512);
    let delta = payload["delta"].as_f64().unwrap();
    assert!((delta - 0.2129).abs() < 5e-4, "delta = {delta}");
}

#[test]
fn gv_by_separation_returns_cardinality() {
    let out = grasstat(&["gv", "--T", "5", "--M", "1", "--delta", "0.5"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.gv.v1.json");
    assert_eq!(payload["K"], 16);
    assert_eq!(payload["delta"], 0.5);
}

#[test]
fn gv_requires_exactly_one_target() {
    let neither = grasstat(&["gv", "--T", "10", "--M", "2"]);
    assert_eq!(neither.status.code(), Some(2));
    let both = grasstat(&["gv", "--T", "10", "--M", "2", "--K", "4", "--delta", "0.1"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn moments_zero_order_is_one() {
    let out = grasstat(&["moments", "--T", "2", "--M", "1", "--p", "0"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.moments.v1.json");
    assert_eq!(payload["entries"][0]["moment"], 1.0);
    assert_eq!(payload["entries"][0]["exact"], Value::Null);
}

#[test]
fn moments_exact_agrees_with_float_path() {
    let out = grasstat(&["moments", "--T", "10", "--M", "2", "--p", "1", "--p", "2", "--exact"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.moments.v1.json");
    let entries = payload["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for entry in entries {
        let moment = entry["moment"].as_f64().unwrap();
        let exact = entry["exact"].as_str().expect("exact rational");
        let value = match exact.split_once('/') {
            Some((num, den)) => num.parse::<f64>().unwrap() / den.parse::<f64>().unwrap(),
            None => exact.parse::<f64>().unwrap(),
        };
        assert!((moment - value).abs() <= 1e-12 * value, "{exact} vs {moment}");
    }
}

#[test]
fn moments_exact_rejects_fractional_order() {
    let out = grasstat(&["moments", "--T", "10", "--M", "2", "--p", "0.5", "--exact"]);
    let payload = stderr_json(&out);
    validate(&payload, "grasstat.error.v1.json");
    assert_eq!(payload["kind"], "domain-error");
}

#[test]
fn pdf_grid_rows_are_nonnegative() {
    let out = grasstat(&["pdf", "--M", "2", "--T", "20", "--grid", "4"]);
    let (comment, header, rows) = csv_rows(&out);
    let descriptor = csv_descriptor("grasstat.pdf-grid.v1.json");
    assert_eq!(comment, descriptor["comment"].as_str().unwrap());
    assert_eq!(header, descriptor["header"].as_str().unwrap());
    assert_eq!(rows.len(), 4);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 2);
        assert!((row[0] - (k + 1) as f64 / 4.0).abs() < 1e-15);
        assert!(row[1] >= 0.0, "pdf value {} at x = {}", row[1], row[0]);
    }
}

#[test]
fn cdf_grid_is_monotone_and_ends_at_one() {
    let out = grasstat(&["cdf", "--M", "2", "--T", "10", "--grid", "8"]);
    let (comment, header, rows) = csv_rows(&out);
    let descriptor = csv_descriptor("grasstat.cdf-grid.v1.json");
    assert_eq!(comment, descriptor["comment"].as_str().unwrap());
    assert_eq!(header, descriptor["header"].as_str().unwrap());
    assert_eq!(rows.len(), 8);
    for pair in rows.windows(2) {
        assert!(pair[1][1] >= pair[0][1], "cdf must not decrease");
    }
    assert_eq!(rows.last().unwrap()[1], 1.0);
}

#[test]
fn invert_round_trips_the_distribution() {
    let out = grasstat(&["invert", "--M", "2", "--T", "10", "--q", "0.25"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.invert.v1.json");
    let x = payload["x"].as_f64().unwrap();
    let mass = grasstat::density::cdf_eval(2, 10, x).unwrap();
    assert!((mass - 0.25).abs() <= 1e-9 * 0.25 + 1e-11, "mass = {mass}");
}

#[test]
fn invert_rejects_mass_outside_unit_interval() {
    let out = grasstat(&["invert", "--M", "2", "--T", "10", "--q", "1.5"]);
    let payload = stderr_json(&out);
    validate(&payload, "grasstat.error.v1.json");
    assert_eq!(payload["kind"], "domain-error");
}

#[test]
fn energy_bound_composes_library_pieces() {
    let out = grasstat(&[
        "energy-bound", "--T", "4", "--M", "1", "--N", "1", "--K", "2", "--rho", "100",
    ]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.energy-bound.v1.json");
    let energy = payload["expected_energy"].as_f64().unwrap();
    let c = payload["C"].as_f64().unwrap();
    let union = payload["union_bound"].as_f64().unwrap();
    assert!((energy - 3.0).abs() <= 1e-12 * 3.0);
    assert!((c - 0.25).abs() <= 1e-12);
    assert!((union - 3.0 / 800.0).abs() <= 1e-12 * union, "union = {union}");
    assert_eq!(payload["rho_db"], 20.0);
}

#[test]
fn energy_bound_accepts_decibels() {
    let linear = stdout_json(&grasstat(&[
        "energy-bound", "--T", "4", "--M", "1", "--N", "1", "--K", "2", "--rho", "100",
    ]));
    let db = stdout_json(&grasstat(&[
        "energy-bound", "--T", "4", "--M", "1", "--N", "1", "--K", "2", "--rho", "20", "--db",
    ]));
    let rho = db["rho"].as_f64().unwrap();
    assert!((rho - 100.0).abs() <= 1e-9 * 100.0, "rho = {rho}");
    let a = linear["union_bound"].as_f64().unwrap();
    let b = db["union_bound"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-9 * a);
}

#[test]
fn sample_writes_a_loadable_code_file() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("code.json");
    let out = grasstat(&[
        "sample", "--T", "4", "--M", "2", "--count", "3",
        "--seed", "11", "--out", out_path.to_str().unwrap(),
    ]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.sample.v1.json");
    assert_eq!(payload["K"], 3);
    let min_product = payload["min_product"].as_f64().unwrap();
    assert!(min_product > 0.0 && min_product <= 1.0);

    let file: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    validate(&file, "grasstat.codefile.v1.json");
    let code = grasstat::codefile::load_code(&out_path, false).expect("file loads strictly");
    assert_eq!(code.len(), 3);
    assert_eq!(code.ambient_dim(), 4);
}

#[test]
fn outputs_are_deterministic_for_identical_argv() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("code.json");
    let sample_args = [
        "sample", "--T", "3", "--M", "1", "--count", "2",
        "--seed", "1", "--out", out_path.to_str().unwrap(),
    ];
    let first = grasstat(&sample_args);
    let first_file = std::fs::read(&out_path).unwrap();
    let second = grasstat(&sample_args);
    let second_file = std::fs::read(&out_path).unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first_file, second_file);

    let pdf_args = ["pdf", "--M", "2", "--T", "20", "--grid", "16"];
    assert_eq!(grasstat(&pdf_args).stdout, grasstat(&pdf_args).stdout);

    let pair = orthogonal_pair_file(&dir);
    let pep_args = [
        "pep", "--code", pair.to_str().unwrap(), "--i", "0", "--j", "1",
        "--N", "1", "--rho", "10", "--trials", "4096", "--seed", "3",
    ];
    let pep_first = grasstat(&pep_args);
    let pep_second = grasstat(&pep_args);
    assert_eq!(pep_first.stdout, pep_second.stdout);

    let reparsed: Value =
        serde_json::from_str(&serde_json::to_string(&stdout_json(&pep_first)).unwrap()).unwrap();
    assert_eq!(reparsed, stdout_json(&pep_second));
}

#[test]
fn pep_reproduces_the_known_error_rate() {
    let dir = TempDir::new().unwrap();
    let pair = orthogonal_pair_file(&dir);
    let out = grasstat(&[
        "pep", "--code", pair.to_str().unwrap(), "--i", "0", "--j", "1",
        "--N", "1", "--rho", "10", "--trials", "20000", "--seed", "7",
    ]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.pep.v1.json");
    let p_hat = payload["p_hat"].as_f64().unwrap();
    let exact = 1.0f64 / 22.0;
    let four_sigma = 4.0 * (exact * (1.0 - exact) / 20000.0).sqrt();
    assert!((p_hat - exact).abs() < four_sigma, "p_hat = {p_hat}");
    let ratio = payload["ratio"].as_f64().unwrap();
    let asymptotic = payload["asymptotic"].as_f64().unwrap();
    assert!((ratio - p_hat / asymptotic).abs() < 1e-15);
}

#[test]
fn pep_accepts_decibel_snr() {
    let dir = TempDir::new().unwrap();
    let pair = orthogonal_pair_file(&dir);
    let out = grasstat(&[
        "pep", "--code", pair.to_str().unwrap(), "--i", "0", "--j", "1",
        "--N", "1", "--rho", "10", "--db", "--trials", "1000", "--seed", "2",
    ]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.pep.v1.json");
    let rho = payload["rho"].as_f64().unwrap();
    assert!((rho - 10.0).abs() <= 1e-9 * 10.0);
    let rho_db = payload["rho_db"].as_f64().unwrap();
    assert!((rho_db - 10.0).abs() <= 1e-9);
}

#[test]
fn pep_rejects_bad_word_indices() {
    let dir = TempDir::new().unwrap();
    let pair = orthogonal_pair_file(&dir);
    let equal = grasstat(&[
        "pep", "--code", pair.to_str().unwrap(), "--i", "1", "--j", "1",
        "--N", "1", "--rho", "10", "--trials", "100",
    ]);
    let payload = stderr_json(&equal);
    validate(&payload, "grasstat.error.v1.json");
    assert_eq!(payload["kind"], "domain-error");

    let out_of_range = grasstat(&[
        "pep", "--code", pair.to_str().unwrap(), "--i", "5", "--j", "1",
        "--N", "1", "--rho", "10", "--trials", "100",
    ]);
    assert_eq!(stderr_json(&out_of_range)["kind"], "domain-error");
}

#[test]
fn repair_flag_restores_a_scaled_basis() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("scaled.json");
    write_code_file(
        &path,
        2,
        1,
        serde_json::json!([[[0.9, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]),
    );
    let strict = grasstat(&["energy", "--code", path.to_str().unwrap(), "--N", "1"]);
    assert_eq!(stderr_json(&strict)["kind"], "invalid-code-file");

    let repaired = grasstat(&["energy", "--code", path.to_str().unwrap(), "--N", "1", "--repair"]);
    let payload = stdout_json(&repaired);
    validate(&payload, "grasstat.energy.v1.json");
    assert_eq!(payload["finite"], true);
    assert_eq!(payload["energy"], 2.0);
}

#[test]
fn energy_of_the_orthogonal_pair_is_two() {
    let dir = TempDir::new().unwrap();
    let pair = orthogonal_pair_file(&dir);
    let out = grasstat(&["energy", "--code", pair.to_str().unwrap(), "--N", "1"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.energy.v1.json");
    assert_eq!(payload["finite"], true);
    assert_eq!(payload["energy"], 2.0);
    assert_eq!(payload["min_product"], 1.0);
    assert_eq!(payload["argmin"], serde_json::json!([0, 1]));
}

#[test]
fn energy_reports_an_intersecting_pair_as_infinite() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dup.json");
    write_code_file(
        &path,
        2,
        1,
        serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]),
    );
    let out = grasstat(&["energy", "--code", path.to_str().unwrap(), "--N", "1"]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.energy.v1.json");
    assert_eq!(payload["finite"], false);
    assert_eq!(payload["energy"], Value::Null);
    assert_eq!(payload["min_product"], 0.0);
}

#[test]
fn sweep_spaces_rows_uniformly_in_decibels() {
    let dir = TempDir::new().unwrap();
    let pair = orthogonal_pair_file(&dir);
    let args = [
        "sweep", "--code", pair.to_str().unwrap(), "--i", "0", "--j", "1",
        "--N", "1", "--rho-min", "1", "--rho-max", "100", "--points", "3",
        "--trials", "2000", "--seed", "5",
    ];
    let out = grasstat(&args);
    let (comment, header, rows) = csv_rows(&out);
    let descriptor = csv_descriptor("grasstat.pep-sweep.v1.json");
    assert_eq!(comment, descriptor["comment"].as_str().unwrap());
    assert_eq!(header, descriptor["header"].as_str().unwrap());
    assert_eq!(rows.len(), 3);
    for (row, expected_rho) in rows.iter().zip([1.0, 10.0, 100.0]) {
        assert_eq!(row.len(), 6);
        assert!((row[0] - expected_rho).abs() <= 1e-9 * expected_rho);
        assert!((row[1] - 10.0 * expected_rho.log10()).abs() <= 1e-9);
        assert!(row[4] > 0.0, "asymptotic must be positive");
    }
    assert_eq!(grasstat(&args).stdout, out.stdout);
}

#[test]
fn design_reaches_the_existence_threshold() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("designed.json");
    let out = grasstat(&[
        "design", "--T", "4", "--M", "1", "--K", "3",
        "--objective", "max-min-product", "--iters", "1000", "--restarts", "2",
        "--seed", "9", "--out", out_path.to_str().unwrap(),
    ]);
    let payload = stdout_json(&out);
    validate(&payload, "grasstat.design.v1.json");
    assert_eq!(payload["objective"], "max-min-product");
    assert_eq!(payload["N"], Value::Null);
    let value = payload["value"].as_f64().unwrap();
    let threshold = grasstat::bounds::gv_min_product(4, 1, 3).unwrap();
    assert!(value >= threshold, "value {value} below existence threshold {threshold}");
    assert_eq!(payload["min_product"], payload["value"]);

    let file: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    validate(&file, "grasstat.codefile.v1.json");
    let code = grasstat::codefile::load_code(&out_path, false).expect("designed code loads");
    assert_eq!(code.len(), 3);
}

#[test]
fn design_min_energy_requires_diversity_order() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("never.json");
    let out = grasstat(&[
        "design", "--T", "4", "--M", "1", "--K", "2",
        "--objective", "min-energy", "--iters", "10", "--restarts", "1",
        "--seed", "0", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "missing --N must be a usage error");
}

#[test]
fn usage_errors_exit_with_status_two() {
    assert_eq!(grasstat(&["bogus"]).status.code(), Some(2));
    assert_eq!(grasstat(&["pdf", "--M", "2"]).status.code(), Some(2));
    assert_eq!(grasstat(&[]).status.code(), Some(2));
    assert!(grasstat(&["--help"]).status.success());
}

#[test]
fn domain_errors_exit_with_status_one() {
    let out = grasstat(&["gv", "--T", "10", "--M", "2", "--K", "1"]);
    let payload = stderr_json(&out);
    validate(&payload, "grasstat.error.v1.json");
    assert_eq!(payload["kind"], "invalid-cardinality");

    let diverging = grasstat(&["moments", "--T", "4", "--M", "2", "--p", "-2"]);
    assert_eq!(stderr_json(&diverging)["kind"], "moment-diverges");
}

#[test]
fn thread_cap_env_var_is_honored() {
    let capped = grasstat_env(&["gv", "--T", "10", "--M", "2", "--K", "512"], "GRASSTAT_THREADS", "1");
    let payload = stdout_json(&capped);
    assert_eq!(payload["schema"], "grasstat.gv.v1");

    let invalid = grasstat_env(&["gv", "--T", "10", "--M", "2", "--K", "512"], "GRASSTAT_THREADS", "many");
    assert!(invalid.status.success(), "invalid value must only warn");
    let warning = String::from_utf8_lossy(&invalid.stderr).to_string();
    assert!(warning.contains("GRASSTAT_THREADS"), "stderr: {warning}");
}
