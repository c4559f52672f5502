use std::process::Command;

use bhlab_cli::{run_command, CliError, EXIT_CHECK_FAILED, EXIT_COMPUTATION, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn run(args: &str) -> bhlab_cli::Outcome {
    run_command(std::iter::once("bhlab").chain(args.split_whitespace()))
}

fn json(args: &str) -> Value {
    let out = run(args);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|pair| pair[1].as_str().unwrap().to_string()).collect()
}

#[test]
fn level_one_kl_table() {
    let v = json("measure kl --p 5 --n 1 --c 2 --N 3");
    assert_eq!(strings(&v["values"]), ["0", "2", "4", "-4", "-2"]);
    assert_eq!(v["modulus"], "exact");
}

#[test]
fn weight_two_eisenstein_coefficients() {
    let v = json("qexp gk --k 2 --qprec 5");
    assert_eq!(strings(&v["coeffs"]), ["-1/12", "2", "6", "8", "14", "12"]);
    let csv = run("qexp gk --k 2 --qprec 2 --out csv").stdout;
    assert_eq!(csv, "m,value,modulus\n0,-1/12,exact\n1,2,exact\n2,6,exact\n");
}

#[test]
fn residue_suite_passes() {
    let v = json("verify residue --p 5 --n 3");
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"][0]["check"], "residue");
}

#[test]
fn periods_recover_the_table() {
    let v = json("measure periods --n 1 --prec 6");
    assert_eq!(strings(&v["values"]), ["0", "2", "4", "-4", "-2"]);
    assert_eq!(v["modulus"], "5^5");
}

#[test]
fn moment_matches_target() {
    let v = json("moment --k 3 --n 6");
    assert_eq!(v["target"], "8");
    assert_eq!(v["riemann"]["residue"], "8");
    assert_eq!(v["riemann"]["modulus"], "5^6");
}

#[test]
fn zeta_pole_and_regular_values() {
    let v = json("zeta eval --s 1 --n 3 --qprec 4");
    assert_eq!(v["pole_order"], "1");
    assert!(v["residue"].is_object());
    let v = json("zeta eval --s -3 --omega-power 4 --n 3 --qprec 4");
    assert_eq!(v["pole_order"], "0");
    assert_eq!(v["value"]["coeffs"].as_array().unwrap().len(), 5);
    let v = json("zeta eval --s 1/3 --omega-power 3 --n 3 --qprec 4");
    assert_eq!(v["pole_order"], "0");
}

#[test]
fn oracle_reports_surface_the_comparison() {
    let v = json("oracle gk-poisson --k 3 --tau 0.2,1.3");
    let r = &v["reports"][0];
    for key in ["lhs", "rhs", "rel_error", "tolerance"] {
        assert!(r[key].is_string(), "{key}");
    }
    assert_eq!(r["pass"], true);
}

#[test]
fn outputs_are_byte_identical() {
    for args in ["verify weight-congruence --n 2", "oracle z-interp --k 4", "qexp delta-p --qprec 20"] {
        assert_eq!(run(args), run(args), "{args}");
    }
}

#[test]
fn reports_are_sorted() {
    let v = json("verify limit");
    let ns: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["params"]["n"].as_str().unwrap()).collect();
    assert_eq!(ns, ["2", "3"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run("oracle gk-poisson --k 3 --tau 0.2,1.3 --tol 1e-30").code, EXIT_CHECK_FAILED);
    assert_eq!(run("measure kl --c 5").code, EXIT_USAGE);
    assert_eq!(run("qexp gk --k 0").code, EXIT_USAGE);
    assert_eq!(run("zeta eval").code, EXIT_USAGE);
    assert_eq!(run("nonsense").code, EXIT_USAGE);
    assert_eq!(run("oracle cm-period --p 7").code, EXIT_USAGE);
    assert_eq!(run("--help").code, EXIT_PASS);
    let e: CliError = bhlab_core::Error::Consistency("x".into()).into();
    assert_eq!(e.exit_code(), EXIT_COMPUTATION);
}

#[test]
fn config_file_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("bhlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"p": 7, "n": 1, "c": 2, "N": 3}"#).unwrap();
    let cfg = path.display().to_string();
    let v = json(&format!("measure kl --config {cfg}"));
    assert_eq!(v["values"].as_array().unwrap().len(), 7);
    let v = json(&format!("measure kl --config {cfg} --p 5"));
    assert_eq!(v["values"].as_array().unwrap().len(), 5);
    std::fs::write(&path, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(run(&format!("measure kl --config {cfg}")).code, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_bhlab");
    let ok = Command::new(bin).args(["measure", "kl", "--n", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["oracle", "gk-poisson", "--k", "3", "--tau", "0.2,1.3", "--tol", "1e-30"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stdout.is_empty());
    let usage = Command::new(bin).args(["measure", "kl", "--N", "5"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
