use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourgeom")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv(args: &[&str]) -> (Vec<String>, Vec<Vec<f64>>) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<f64>> = lines
        .map(|l| {
            let row: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(row.len(), header.len());
            row
        })
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k]).collect()
}

#[test]
fn analyze_page_is_einstein() {
    let v = json(&["analyze", "--geometry", "page", "--point", "chi=1.0,theta=0.7,phi=0,psi=0"]);
    assert_eq!(v["schema"], 1);
    assert!(v["einstein_residual"].as_f64().unwrap() < 1e-9);
    for key in ["fpp", "fpm", "fmm", "ricci", "scalar", "lambda_est", "weyl_eigenvalues", "densities"] {
        assert!(!v[key].is_null(), "{key}");
    }
}

#[test]
fn analyze_squashed_ellipsoid_is_not_einstein() {
    let v = json(&[
        "analyze",
        "--geometry",
        "ellipsoid-s4",
        "--params",
        "r=1,l=1,lt=1.2",
        "--point",
        "phi=0.3,chi=0.5,theta=0.8,rho=1.0",
    ]);
    assert!(v["einstein_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn analyze_round_sphere_scalar() {
    let v = json(&["analyze", "--geometry", "round-s4", "--params", "radius=1", "--point", "r=1,theta=1,phi=1,psi=1"]);
    assert!((v["scalar"].as_f64().unwrap() - 12.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["analyze", "--geometry", "round-s4", "--params", "radius=-1"]), Some(1));
    assert_eq!(code(&["analyze", "--geometry", "cp2"]), Some(1));
    assert_eq!(code(&["analyze", "--point", "r=4,theta=1,phi=1,psi=1"]), Some(1));
    assert_eq!(code(&["analyze", "--nodes", "many"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    // a frame that degenerates in floating point is a numeric failure
    assert_eq!(code(&["analyze", "--point", "r=1,theta=1e-300,phi=1,psi=1"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn invariants_schema() {
    let v = json(&["invariants", "--geometry", "s2xs2", "--nodes", "12"]);
    assert_eq!(v["schema"], 1);
    assert!((v["chi"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    for path in [
        "/quadrature/nodes",
        "/margins/ht_plus",
        "/margins/ht_minus",
        "/margins/refined",
        "/residuals/chi_int",
        "/residuals/tau_int",
        "/residuals/refine_delta",
    ] {
        assert!(v.pointer(path).is_some(), "{path}");
    }
    assert!(v["hitchin_thorpe"]["holds"].as_bool().unwrap());
    let v = json(&["invariants", "--geometry", "ellipsoid-s4", "--params", "lt=1.3", "--nodes", "12"]);
    assert!(v.get("hitchin_thorpe").is_none());
}

#[test]
fn sweep_ellipsoid_has_a_unique_einstein_member() {
    let (h, rows) = csv(&["sweep", "--geometry", "ellipsoid-s4", "--vary", "lt=0.8:1.2:41"]);
    let lt = column(&h, &rows, "lt");
    let res = column(&h, &rows, "max_einstein_residual");
    let zeros: Vec<f64> = lt.iter().zip(&res).filter(|(_, r)| **r < 1e-10).map(|(l, _)| *l).collect();
    assert_eq!(zeros, vec![1.0]);
}

#[test]
fn sweep_radius_keeps_chi() {
    let (h, rows) = csv(&["sweep", "--vary", "radius=0.5:2:4", "--with-invariants", "--nodes", "12"]);
    for chi in column(&h, &rows, "chi") {
        assert!((chi - 2.0).abs() < 1e-9);
    }
}

#[test]
fn sweep_deformation_residual_is_quadratic() {
    let (h, rows) =
        csv(&["sweep", "--geometry", "biaxial-s4", "--params", "c1=0,c2=1", "--vary", "epsilon=1e-4:1e-2:5", "--log"]);
    let eps = column(&h, &rows, "epsilon");
    let res = column(&h, &rows, "max_einstein_residual");
    let slope = fourgeom::deformation::log_log_slope(&eps, &res);
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn sweep_errors() {
    assert_eq!(run(&["sweep", "--vary", "radius=1:2:0"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--vary", "lt=1:2:3"]).status.code(), Some(1));
    assert_eq!(run(&["sweep"]).status.code(), Some(1));
}

#[test]
fn check_suite_and_mutations() {
    let v = json(&["check"]);
    assert_eq!(v["passed"], true);
    let out = run(&["check", "--inject-eta-flip"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-duality"));
    let out = run(&["check", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(3));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["passed"], false);
}

#[test]
fn deform_and_shoot() {
    let v = json(&["deform", "--params", "c1=0,c2=1,epsilon=1e-3", "--nodes", "16"]);
    assert_eq!(v["passed"], true);
    assert!((v["coefficient_slope"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert_eq!(run(&["deform", "--params", "c2=1,epsilon=0.5"]).status.code(), Some(1));
    let v = json(&["shoot", "--params", "k=2"]);
    assert_eq!(v["closes"], true);
    let v = json(&["shoot", "--params", "ratio=1.05"]);
    assert!(v["match_deficit"].as_f64().unwrap() > 1e-2);
    let (h, rows) = csv(&["shoot", "--format", "csv"]);
    assert_eq!(h, ["r", "f", "g", "fp", "gp", "deficit"]);
    assert!(rows.len() > 10);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("fourgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# sweep setup\ngeometry = round-s4\nvary = radius=0.5:2:4\nformat = json\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let v = json(&["sweep", "--config", cfg_s]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    let v = json(&["sweep", "--config", cfg_s, "--vary", "radius=1:2:2"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    std::fs::write(&cfg, "geometry = round-s4\ncolour = blue\n").unwrap();
    assert_eq!(run(&["analyze", "--config", cfg_s]).status.code(), Some(1));
    let out = dir.join("out.json");
    let code = run(&["analyze", "--seed", "3", "--output", out.to_str().unwrap()]).status.code();
    assert_eq!(code, Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "analyze");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_ignores_thread_count() {
    for args in [
        vec!["invariants", "--geometry", "ellipsoid-s4", "--params", "lt=1.2", "--nodes", "10"],
        vec!["sweep", "--vary", "radius=0.5:2:6", "--with-invariants", "--nodes", "8"],
        vec!["analyze", "--geometry", "page", "--seed", "11"],
    ] {
        let one = run(&[args.as_slice(), &["--threads", "1"]].concat()).stdout;
        let four = run(&[args.as_slice(), &["--threads", "4"]].concat()).stdout;
        assert!(!one.is_empty());
        assert_eq!(one, four, "{args:?}");
    }
}
