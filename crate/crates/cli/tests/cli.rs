use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infoenergy"))
        .args(args)
        .env_remove("INFOENERGY_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn energy_of_exponential() {
    let v = json(&["energy", "--family", "exponential", "--params", "lambda=2"]);
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["method"], "closed_form");
    assert_eq!(v["valid"], true);
    assert_eq!(v["inputs"]["p"]["params"], "lambda=2");
}

#[test]
fn self_divergence_is_zero() {
    let v = json(&[
        "csd",
        "--family",
        "normal",
        "--params",
        "mu=0,sigma=1",
        "--params2",
        "mu=0,sigma=1",
    ]);
    assert_eq!(v["value"], 0.0);
}

#[test]
fn methods_agree() {
    let base = [
        "rho",
        "--family",
        "exponential",
        "--params",
        "lambda=1",
        "--params2",
        "lambda=4",
    ];
    for method in ["closed", "omega", "oracle"] {
        let mut args = base.to_vec();
        args.extend(["--method", method]);
        let v = json(&args);
        assert!(
            (v["value"].as_f64().unwrap() - 0.8).abs() < 1e-9,
            "{method}: {v}"
        );
    }
    let v = json(&[
        "energy", "--family", "pareto", "--params", "a=1,k=1", "--method", "omega", "--omega", "1",
    ]);
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["diagnostics"]["omega"][0], 1.0);
}

#[test]
fn show_natural_echoes_theta() {
    let v = json(&[
        "entropy",
        "--family",
        "normal",
        "--params",
        "mu=0,var=1",
        "--show-natural",
    ]);
    assert_eq!(v["inputs"]["p"]["natural"], serde_json::json!([0.0, -0.5]));
}

#[test]
fn exit_codes() {
    let domain = run(&[
        "energy",
        "--family",
        "gamma",
        "--params",
        "alpha=0.4,beta=1",
    ]);
    assert_eq!(domain.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&domain.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "DomainViolation");

    let slow = run(&[
        "entropy",
        "--family",
        "lognormal",
        "--params",
        "mu=0,sigma=0.2",
        "--method",
        "oracle",
        "--max-subdivisions",
        "1",
        "--rel-tol",
        "1e-15",
        "--abs-tol",
        "1e-300",
    ]);
    assert_eq!(slow.status.code(), Some(3));

    for args in [
        vec!["energy", "--family", "exponential"],
        vec!["energy", "--family", "weibull", "--params", "k=1"],
        vec!["energy", "--family", "exponential", "--params", "lambda=-1"],
        vec![
            "cross",
            "--family",
            "normal",
            "--params",
            "mu=0,sigma=1",
            "--params2",
            "mu=0,sigma=1",
            "--method",
            "omega",
        ],
        vec![
            "holder",
            "--family",
            "poisson",
            "--params",
            "lambda=1",
            "--params2",
            "lambda=2",
            "--alpha",
            "2",
            "--gamma",
            "2",
            "--method",
            "omega",
        ],
        vec![
            "energy",
            "--family",
            "exponential",
            "--params",
            "lambda=1",
            "--output",
            "yaml",
        ],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn poisson_holder_falls_back_to_oracle() {
    let v = json(&[
        "holder",
        "--family",
        "poisson",
        "--params",
        "lambda=1",
        "--params2",
        "lambda=3",
        "--alpha",
        "2",
        "--gamma",
        "2",
    ]);
    assert_eq!(v["method"], "oracle");
    let cs = json(&[
        "csd",
        "--family",
        "poisson",
        "--params",
        "lambda=1",
        "--params2",
        "lambda=3",
    ]);
    assert!((v["value"].as_f64().unwrap() - cs["value"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn mixture_by_both_paths() {
    let base = [
        "mixture",
        "--family",
        "exponential",
        "--weights",
        "0.5,0.5",
        "--component",
        "lambda=1",
        "--component",
        "lambda=2",
    ];
    for method in ["closed", "oracle"] {
        let mut args = base.to_vec();
        args.extend(["--method", method]);
        assert!((json(&args)["value"].as_f64().unwrap() - 0.7083333333333334).abs() < 1e-10);
    }
    let mut short = base.to_vec();
    short[4] = "1";
    assert_eq!(run(&short).status.code(), Some(1));
}

#[test]
fn csv_and_text_use_ten_significant_digits() {
    let out = run(&[
        "energy",
        "--family",
        "normal",
        "--params",
        "mu=0,sigma=1",
        "--output",
        "csv",
    ]);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let idx = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "value")
        .unwrap();
    let row = reader.records().next().unwrap().unwrap();
    assert_eq!(&row[idx], "0.2820947918");
    assert_eq!(&row[2], "mu=0,sigma=1");

    let out = run(&[
        "entropy",
        "--family",
        "normal",
        "--params",
        "mu=0,sigma=1",
        "--output",
        "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("value") && l.ends_with("1.418938533")),
        "{text}"
    );
}

#[test]
fn table_anchors() {
    let v = json(&["table"]);
    let rows = v["rows"].as_array().unwrap();
    let find = |fam: &str, params: &str| {
        rows.iter()
            .find(|r| r["family"] == fam && r["params"] == params)
            .unwrap_or_else(|| panic!("{fam} {params}"))
    };
    let n = find("normal", "mu=0,sigma=1");
    assert!((n["I_closed"].as_f64().unwrap() - 0.2820947918).abs() < 1e-10);
    assert!((n["H_closed"].as_f64().unwrap() - 1.4189385332).abs() < 1e-10);
    assert_eq!(
        find("gamma", "alpha=0.4,beta=1")["I_closed"],
        "EnergyUndefined"
    );
    assert!(
        (find("poisson", "lambda=1")["I_closed"].as_f64().unwrap() - 0.3085083225).abs() < 1e-10
    );
}

#[test]
fn verify_flags_the_literal_beta_row() {
    let out = run(&["verify", "--family", "beta", "--grid", "default"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failures"], 0);
    let rows = v["rows"].as_array().unwrap();
    let literal = rows
        .iter()
        .find(|r| r["measure"] == "energy_table_literal")
        .unwrap();
    assert_eq!(literal["within_tolerance"], false);
    assert_eq!(literal["expected"], false);
    for r in rows.iter().filter(|r| r["measure"] == "energy") {
        assert!(r["rel_delta"].as_f64().unwrap() <= 1e-7);
    }
}

#[test]
fn verify_fails_when_tolerance_is_missed() {
    // a loose oracle cannot meet the 1e-7 comparison
    let out = run(&[
        "verify",
        "--family",
        "normal",
        "--rel-tol",
        "1e-3",
        "--abs-tol",
        "1e-3",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failures = v["failures"].as_u64().unwrap();
    assert_eq!(out.status.code(), Some(if failures > 0 { 4 } else { 0 }));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quad.conf");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "# starve the oracle\nmax_subdivisions = 1\nrel_tol = 1e-15\nabs_tol = 1e-300"
    )
    .unwrap();
    drop(f);
    let args = [
        "entropy",
        "--family",
        "lognormal",
        "--params",
        "mu=0,sigma=0.2",
        "--method",
        "oracle",
    ];

    let with_env = Command::new(env!("CARGO_BIN_EXE_infoenergy"))
        .args(args)
        .env("INFOENERGY_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(with_env.status.code(), Some(3));

    let p = path.to_str().unwrap();
    let mut flagged = args.to_vec();
    flagged.extend([
        "--config",
        p,
        "--max-subdivisions",
        "2000",
        "--rel-tol",
        "1e-10",
        "--abs-tol",
        "1e-12",
    ]);
    assert_eq!(run(&flagged).status.code(), Some(0));

    std::fs::write(&path, "bogus = 1\n").unwrap();
    let mut bad = args.to_vec();
    bad.extend(["--config", p]);
    assert_eq!(run(&bad).status.code(), Some(1));
}
