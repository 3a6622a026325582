use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;
use tempfile::TempDir;

use permabound::bounds;
use permabound::ensemble::{gaussian_complex, trial_rng};
use permabound::permanent::per_ryser;
use permabound::{ColumnPartition, ComplexMatrix, IndexSubset};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_permabound"));
    c.env_remove("PERMABOUND_EXACT_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Self(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, z: &ComplexMatrix) -> String {
        let path: PathBuf = self.0.path().join(name);
        std::fs::write(&path, z.to_json()).unwrap();
        path.to_string_lossy().into_owned()
    }
}

#[test]
fn per_identity_and_ones() {
    let f = Files::new();
    let out = run(&["per", &f.write("i.json", &ComplexMatrix::identity(3))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["value_re"].as_f64(), v["value_im"].as_f64()), (Some(1.0), Some(0.0)));
    assert_eq!(v["algorithm"], "ryser");

    let out = run(&["per", &f.write("o.json", &ComplexMatrix::ones(4, 4))]);
    assert_eq!(json(&out)["value_re"].as_f64(), Some(24.0));
}

#[test]
fn per_naive_and_ryser_agree_on_csv_input() {
    let f = Files::new();
    let z = gaussian_complex(&mut trial_rng(2024, 0, 0), 8, 8);
    let path = f.0.path().join("z.csv");
    std::fs::write(&path, z.to_csv()).unwrap();
    let p = path.to_str().unwrap();
    let a = json(&run(&["per", p]));
    let b = json(&run(&["per", p, "--algo", "naive"]));
    let ca = Complex64::new(a["value_re"].as_f64().unwrap(), a["value_im"].as_f64().unwrap());
    let cb = Complex64::new(b["value_re"].as_f64().unwrap(), b["value_im"].as_f64().unwrap());
    assert!((ca - cb).norm() <= 1e-10 * cb.norm());
    assert_eq!(b["algorithm"], "naive");
}

#[test]
fn size_and_parse_errors_map_to_exit_codes() {
    let f = Files::new();
    let big = f.write("big.json", &ComplexMatrix::identity(31));
    assert_eq!(run(&["per", &big]).status.code(), Some(3));
    let small = f.write("small.json", &ComplexMatrix::identity(4));
    let out = bin().args(["per", &small]).env("PERMABOUND_EXACT_CAP", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["per", &small, "--exact-cap", "4"]).status.code(), Some(0));

    let rect = f.write("rect.json", &ComplexMatrix::ones(2, 3));
    assert_eq!(run(&["per", &rect]).status.code(), Some(2));
    let bad = f.0.path().join("bad.csv");
    std::fs::write(&bad, "1,2\n3,x\n").unwrap();
    assert_eq!(run(&["per", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--ensemble", "nope"]).status.code(), Some(2));
}

#[test]
fn bound_on_all_ones() {
    let f = Files::new();
    let p = f.write("o.json", &ComplexMatrix::ones(3, 3));
    let v = json(&run(&["bound", &p, "--partition", "1,1,1"]));
    assert_eq!(v["per_abs"].as_f64(), Some(6.0));
    for b in v["bounds"].as_array().unwrap() {
        if b["name"] == "classic" || b["name"] == "partition" {
            assert!((b["value"].as_f64().unwrap() - 6.0).abs() < 1e-12);
        }
    }
    let v = json(&run(&["bound", &p, "--partition", "3"]));
    let part = v["bounds"].as_array().unwrap().iter().find(|b| b["name"] == "partition").unwrap();
    assert!((part["value"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!((part["tightness"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn bound_values_match_library_exactly() {
    let f = Files::new();
    let z = gaussian_complex(&mut trial_rng(77, 0, 0), 3, 3);
    let path = f.write("z.json", &z);
    let v = json(&run(&["bound", &path, "--partition", "2,1"]));
    let p = ColumnPartition::consecutive(&[2, 1], IndexSubset::full(3)).unwrap();
    let cli_part = v["bounds"].as_array().unwrap().iter().find(|b| b["name"] == "partition").unwrap()["value"].as_f64().unwrap();
    let cli_classic = v["bounds"][0]["value"].as_f64().unwrap();
    assert_eq!(cli_part, bounds::bound_partition(&z, &p).unwrap());
    assert_eq!(cli_classic, bounds::bound_classic(&z).unwrap());
    assert_eq!(v["per_abs"].as_f64().unwrap(), per_ryser(&z).unwrap().norm());

    // (|e|^2|f|^2 + |e|^2|g|^2 + |f|^2|g|^2) |h|^2 with e, f, g the rows of the first two columns
    let row = |j: usize| z.norm_sqr(j, 0) + z.norm_sqr(j, 1);
    let h: f64 = (0..3).map(|j| z.norm_sqr(j, 2)).sum();
    let rhs = (row(0) * row(1) + row(0) * row(2) + row(1) * row(2)) * h;
    assert!((rhs.sqrt() - cli_part).abs() <= 1e-12 * cli_part);
}

#[test]
fn bound_with_explicit_blocks_and_bad_specs() {
    let f = Files::new();
    let z = gaussian_complex(&mut trial_rng(78, 0, 0), 4, 4);
    let path = f.write("z.json", &z);
    let v = json(&run(&["bound", &path, "--blocks", "1,3|2|4"]));
    let p = ColumnPartition::new(vec![
        IndexSubset::from_indices(&[0, 2], 4).unwrap(),
        IndexSubset::singleton(1, 4).unwrap(),
        IndexSubset::singleton(3, 4).unwrap(),
    ])
    .unwrap();
    let cli = v["bounds"].as_array().unwrap().iter().find(|b| b["name"] == "partition").unwrap()["value"].as_f64().unwrap();
    assert_eq!(cli, bounds::bound_partition(&z, &p).unwrap());
    assert_eq!(run(&["bound", &path, "--partition", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["bound", &path, "--blocks", "1|2|3"]).status.code(), Some(2));
    assert_eq!(run(&["bound", &path, "--blocks", "1,2|2,3|4"]).status.code(), Some(2));
    let table = run(&["bound", &path, "--partition", "2,2", "--output", "table"]);
    assert!(String::from_utf8(table.stdout).unwrap().contains("partition"));
}

#[test]
fn bregman_minc_appears_for_binary_input() {
    let f = Files::new();
    let z = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0]]).unwrap();
    let v = json(&run(&["bound", &f.write("b.json", &z)]));
    let bm = v["bounds"].as_array().unwrap().iter().find(|b| b["name"] == "bregman_minc").unwrap();
    // every row sum is 2, so the bound is (2!)^(3/2)
    assert!((bm["value"].as_f64().unwrap() - 2f64.powf(1.5)).abs() < 1e-12);
    assert_eq!(v["per_abs"].as_f64(), Some(2.0));
}

#[test]
fn verify_default_sweep_is_clean_and_deterministic() {
    let args = ["verify", "--trials", "100", "--n", "6", "--seed", "42"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let v = json(&a);
    assert_eq!(v["violations"].as_u64(), Some(0));
    let names: Vec<&str> = v["inequalities"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    for expected in ["classic", "partition", "subsum", "step", "master", "coeff", "bregman_minc", "corollary"] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    let m0 = v["equalities"].as_array().unwrap().iter().find(|s| s["name"] == "master_m0_condition_i").unwrap();
    assert_eq!(m0["failures"].as_u64(), Some(0));
    assert_eq!(run(&args).stdout, a.stdout);
}

#[test]
fn verify_on_equality_family_is_tight() {
    let v = json(&run(&["verify", "--trials", "30", "--n", "5", "--ensemble", "rank-one-phase"]));
    let part = v["inequalities"].as_array().unwrap().iter().find(|s| s["name"] == "partition").unwrap();
    assert!(part["worst_ratio"].as_f64().unwrap() >= 1.0 - 1e-10);
    for e in v["equalities"].as_array().unwrap() {
        assert!(e["min_tightness"].as_f64().unwrap() >= 1.0 - 1e-10, "{e}");
    }
}

#[test]
fn verify_general_g_probe_is_reported_only() {
    let out = run(&["verify", "--trials", "20", "--n", "5", "--general-g-probe"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["general_g_probe"]["checked"].as_u64(), Some(20));
}

#[test]
fn identities_default_and_single_case() {
    let out = run(&["identities"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["single_step_failures"].as_array().unwrap().is_empty());

    let v = json(&run(&["identities", "--max-n", "2", "--case", "1,1,1"]));
    let case = &v["case"];
    assert_eq!(case["c"], "1");
    let f: Vec<(u64, u64, &str)> = case["f"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["a"].as_u64().unwrap(), e["b"].as_u64().unwrap(), e["f"].as_str().unwrap()))
        .collect();
    assert_eq!(f, vec![(0, 0, "0"), (0, 1, "1"), (1, 0, "1")]);
    assert_eq!(case["row_sums"], serde_json::json!(["1", "1"]));
}

#[test]
fn coeff_command() {
    let f = Files::new();
    let z = gaussian_complex(&mut trial_rng(90, 0, 0), 4, 4);
    let v = json(&run(&["coeff", &f.write("z.json", &z), "--exponent", "1,1,1,1"]));
    let per = per_ryser(&z).unwrap();
    let c = Complex64::new(v["coeff_re"].as_f64().unwrap(), v["coeff_im"].as_f64().unwrap());
    assert!((c - per).norm() <= 1e-12 * per.norm());
    assert_eq!(v["expansion_agrees"], true);

    let xi = [Complex64::new(0.6, 0.8), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)];
    let y = [Complex64::new(2.0, -1.0), Complex64::new(0.5, 0.0)];
    let zy = ComplexMatrix::from_fn(3, 2, |j, k| xi[j] * y[k]);
    let v = json(&run(&["coeff", &f.write("y.json", &zy), "--exponent", "2,1"]));
    assert_eq!(v["tight"], true);

    let zc = gaussian_complex(&mut trial_rng(91, 0, 0), 4, 3);
    let out = run(&["coeff", &f.write("c.json", &zc), "--exponent", "3,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["expansion_agrees"], true);
    assert_eq!(run(&["coeff", &f.write("d.json", &zc), "--exponent", "1,1,1"]).status.code(), Some(2));
}

#[test]
fn bench_w_signs() {
    let twin = json(&run(&["bench", "--ensemble", "twin-columns", "--n", "3", "--trials", "200", "--partition", "2,1"]));
    assert!(twin["records"].as_array().unwrap().iter().all(|r| r["w_sign"].as_i64().unwrap() <= 0));
    let cst = json(&run(&["bench", "--ensemble", "constant-columns", "--n", "3", "--trials", "200"]));
    assert!(cst["records"].as_array().unwrap().iter().all(|r| r["w_sign"].as_i64().unwrap() >= 0));
    assert_eq!(cst["summary"]["w_negative"].as_u64(), Some(0));
}

#[test]
fn bench_tightness_and_determinism() {
    let args = ["bench", "--ensemble", "gaussian-complex", "--n", "6", "--trials", "1000", "--seed", "5"];
    let a = run(&args);
    let v = json(&a);
    assert!(v["summary"]["max_tightness"].as_f64().unwrap() <= 1.0);
    let frac = v["summary"]["partition_beats_classic"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&frac));
    assert_eq!(run(&args).stdout, a.stdout);

    let csv = run(&["bench", "--ensemble", "bernoulli01", "--n", "4", "--trials", "3", "--output", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("trial,ensemble,n,"));
}

#[test]
fn library_entry_point_reports_exit_codes() {
    assert_eq!(permabound::cli::run(["permabound", "verify", "--trials", "2", "--n", "3"]), 0);
    assert_eq!(permabound::cli::run(["permabound", "verify", "--trials", "0"]), 2);
}
