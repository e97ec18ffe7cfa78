use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_robust-ensembles");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("ROBUST_ENSEMBLES_THREADS").output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// Data lines of a CSV document (comments dropped), header first.
fn csv_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn coherent_free_field_tau_is_three() {
    let out = stdout(&["tau", "--chi", "0", "--nu", "0", "--gamma", "1", "--beta", "0", "--lambda", "0.5"]);
    let lines = csv_lines(&out);
    assert_eq!(lines[0], "tau");
    let tau: f64 = lines[1].parse().unwrap();
    assert!((tau - 3.0).abs() < 1e-9, "{tau}");
}

#[test]
fn optimize_json_document() {
    let out = stdout(&["optimize", "--chi", "50", "--constrained"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["provenance"]["command"], "optimize");
    assert_eq!(doc["provenance"]["parameters"]["constrained"], "true");
    let r = &doc["result"];
    let (beta, gamma, tau) = (r["beta_star"].as_f64().unwrap(), r["gamma_star"].as_f64().unwrap(), r["tau_star"].as_f64().unwrap());
    assert!(beta < 0.0 && (0.05..0.15).contains(&gamma), "{r}");
    assert_eq!(r["on_boundary"], true);
    assert!(tau > doc["tau_coherent"].as_f64().unwrap());
    assert!(doc["tilt_deg"].as_f64().unwrap() < 0.0);
}

#[test]
fn sweep_csv_header_and_fit() {
    let out = stdout(&["sweep", "--param", "chi", "--from", "1", "--to", "1e4", "--points", "53", "--constrained", "--fit"]);
    let lines = csv_lines(&out);
    assert_eq!(lines[0], "param,beta_star,gamma_star,alpha_star,tau_star,tau_coherent,constrained,measure,lambda");
    assert_eq!(lines.len(), 54);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true,survival,0.5")));
    let exponent = |name: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(&format!("# fit {name} "))).expect("fit line");
        let field = line.split(' ').find_map(|w| w.strip_prefix("exponent=")).unwrap();
        field.parse().unwrap()
    };
    assert!((exponent("gamma") + 2.0 / 3.0).abs() < 0.05);
    assert!((exponent("alpha") - 2.0 / 3.0).abs() < 0.05);
    assert!((exponent("tau") + 2.0 / 3.0).abs() < 0.05);
    assert!((exponent("tau_coherent") + 1.0).abs() < 0.05);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["sweep", "--param", "nu", "--from", "1", "--to", "100", "--points", "7", "--constrained", "--fit"];
    assert_eq!(stdout(&args), stdout(&args));
    let args = ["contour", "--chi", "7.7", "--gamma-points", "8", "--beta-points", "9", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn svg_timestamp_is_optional() {
    let args = ["survival", "--chi", "50", "--format", "svg", "--no-timestamp"];
    let a = stdout(&args);
    assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
    assert!(!a.contains("generated="));
    assert_eq!(a, stdout(&args));
    let stamped = stdout(&["survival", "--chi", "50", "--format", "svg"]);
    assert!(stamped.contains("generated="));
}

#[test]
fn exit_codes() {
    // bad input
    assert_eq!(code(&["tau", "--gamma", "2"]), 2);
    assert_eq!(code(&["tau", "--bogus"]), 2);
    assert_eq!(code(&["transition", "--param", "chi", "--from", "1", "--to", "20", "--format", "svg"]), 2);
    assert_eq!(code(&["sweep", "--param", "chi", "--from", "10", "--to", "1"]), 2);
    // numerical failure
    assert_eq!(code(&["transition", "--param", "chi", "--from", "1", "--to", "2"]), 3);
    // I/O
    assert_eq!(code(&["tau", "-o", "/nonexistent-dir/tau.csv"]), 4);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let p = path.to_str().unwrap();
    assert_eq!(code(&["transition", "--param", "chi", "--from", "1", "--to", "2", "-o", p]), 3);
    assert!(!path.exists());
    assert_eq!(code(&["transition", "--param", "chi", "--from", "1", "--to", "20", "-o", p]), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let value: f64 = csv_lines(&text)[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 7.673).abs() < 0.05, "{value}");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn config_file_with_cli_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# defaults\nchi = 50\nconstrained = true\nmeasure = survival\nformat = csv\n").unwrap();
    let c = cfg.to_str().unwrap();

    let from_file = stdout(&["optimize", "--config", c]);
    assert!(from_file.lines().next().unwrap().contains(" chi=50 "));
    assert!(from_file.contains("constrained=true"));

    let overridden = stdout(&["--config", c, "optimize", "--chi", "10", "--constrained=false"]);
    let head = overridden.lines().next().unwrap();
    assert!(head.contains(" chi=10 ") && head.contains("constrained=false"), "{head}");

    std::fs::write(&cfg, "chi 50\n").unwrap();
    assert_eq!(code(&["optimize", "--config", c]), 2);
    assert_eq!(code(&["optimize", "--config", "/nonexistent.conf"]), 2);
}

#[test]
fn thread_count_from_environment() {
    let args = ["sweep", "--param", "chi", "--from", "3", "--to", "300", "--points", "5", "--constrained", "--mode", "cold"];
    let with = |n: &str| {
        let out = Command::new(BIN).args(args).env("ROBUST_ENSEMBLES_THREADS", n).output().unwrap();
        (out.status.code(), out.stdout)
    };
    let (c1, one) = with("1");
    let (c2, two) = with("2");
    assert_eq!((c1, c2), (Some(0), Some(0)));
    assert_eq!(one, two);
    assert_eq!(with("zero").0, Some(2));
}

#[test]
fn evolve_table() {
    let out = stdout(&["evolve", "--chi", "50", "--beta", "0.225", "--gamma", "0.1", "--xbar", "1.2247", "--times", "0,0.1"]);
    let lines = csv_lines(&out);
    assert_eq!(lines[0], "t,mean_x,mean_y,var_x,cov_xy,var_y,purity,tilt_deg,overlap");
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((first[6] - 1.0).abs() < 1e-12 && first[8] == 1.0);
    let later: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert!(later[6] < 1.0 && later[8] < 1.0);
}

#[test]
fn report_needs_mu_for_regime() {
    let doc: Value = serde_json::from_str(&stdout(&["report", "--chi", "50"])).unwrap();
    assert!(doc["regime"]["error"].is_string());
    let doc: Value = serde_json::from_str(&stdout(&["report", "--chi", "50", "--mu", "100"])).unwrap();
    assert_eq!(doc["regime"]["output_coherent"], true);
    assert!((doc["coherent"]["tau_asymptotic"].as_f64().unwrap() - 8f64.sqrt() / 50.0).abs() < 1e-15);
}
