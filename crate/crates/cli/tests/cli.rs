use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pzeta"))
        .args(args)
        .env_remove("PZETA_BUDGET")
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", text(&o)));
    (v, o.status.code().unwrap())
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn zeta_of_sum_of_squares() {
    let (v, code) = json(&["zeta", "--prime", "3", "--n", "2", "--form", "x1^2+x2^2", "--depth", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "CONSISTENT");
    assert_eq!(v["zeta"]["closed_form"], "(8/9)/(1 - 3^(-2-2*s))");
    assert_eq!(v["series"], serde_json::json!(["8/9", "0", "8/81", "0", "8/729"]));
    assert_eq!(v["zeta"]["poles"][0]["real_part"], "-1");
}

#[test]
fn zeta_of_hyperbolic_plane() {
    let o = run(&["zeta", "--prime", "3", "--n", "2", "--form", "x1*x2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let t = text(&o);
    assert!(t.contains("(4/9)/(1 - 3^(-1-s))^2"), "{t}");
    assert!(t.contains("verdict      CONSISTENT"));
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["zeta", "--prime", "3", "--n", "2", "--form", "x1^2+x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("not homogeneous"));
    let o = run(&["zeta", "--prime", "4", "--form", "x1*x2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["zeta", "--form", "x1 + y2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn wrong_user_zeta_is_inconsistent() {
    let o = run(&["zeta", "--form", "x1^2+x2^2", "--zeta-num", "8/9", "--zeta-den", "1,0,-1/3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("series mismatch at t^2"));
    let o = run(&["verify", "--form", "x1^2+x2^2", "--zeta-num", "8/9", "--zeta-den", "1,0,-1/9"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let o = run(&["verify", "--form", "x1^2+x2^2", "--zeta-num", "8/9", "--zeta-den", "1,0,-1/3"]);
    assert_eq!(o.status.code(), Some(1));
    let t = text(&o);
    assert!(t.contains("FAIL zeta series vs counted masses: series mismatch at t^2: counted mass 8/81"), "{t}");
}

#[test]
fn verify_passes_for_known_forms() {
    for args in [vec!["verify", "--prime", "3"], vec!["verify", "--prime", "7", "--form", "x1^3+x2^3"]] {
        let (v, code) = json(&args);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["verdict"], "PASS");
    }
}

#[test]
fn solve_elliptic_and_inadmissible() {
    let (v, code) = json(&["solve", "--n", "3", "--beta", "1", "--prime", "5", "--elliptic"]);
    assert_eq!(code, 0);
    assert_eq!(v["coefficient"], "6/5");
    assert_eq!(v["exponent"], "-1");
    let (v, code) = json(&["solve", "--form", "x1^2+x2^2", "--beta", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["coefficient"], "-10/81");
    assert_eq!(v["matches_elliptic"], true);
    assert_eq!(v["holomorphy_verdict"], "PASS");
    assert_eq!(v["asymptotics"]["nonsingular_at_origin"], true);

    let o = run(&["solve", "--form", "x1*x2", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(text(&o).contains("pole of Z at s=-1"));
    let o = run(&["solve", "--n", "2", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(text(&o).contains("beta = n/d"));
    let o = run(&["solve", "--form", "x1*x2", "--beta", "-1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn green_partials() {
    let (v, code) = json(&["green", "--prime", "3", "--n", "2", "--beta", "1", "--lambda", "1", "--level", "1", "--depth", "3"]);
    assert_eq!(code, 0);
    assert!((num(&v["exact"]) - 0.9098914).abs() < 1e-6);
    let p: Vec<f64> = v["partial"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| num(&x["value"]["numeric"]))
        .collect();
    assert_eq!(p.len(), 4);
    assert!((p[1] - 0.9).abs() < 1e-12);
    assert!((p[2] - 0.9109890).abs() < 1e-7);
    assert!((p[3] - 0.9097695).abs() < 1e-7);
    assert!((v["decay_exponent"].as_f64().unwrap() - 8.0).abs() < 0.1);

    let (v, code) = json(&["green", "--depth", "0", "--lambda", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["partial"].as_array().unwrap().len(), 1);
    assert_eq!(v["partial"][0]["value"]["exact"], "1/4");

    let o = run(&["green", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("lambda must be positive"));
    let o = run(&["green", "--level", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn catalog_lists_forms() {
    let (v, code) = json(&["catalog", "--prime", "3", "--n", "2"]);
    assert_eq!(code, 0);
    let forms = v["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 3);
    assert_eq!(forms[0]["form"], "x1^2 + x2^2");
    assert!(forms.iter().all(|f| f["anisotropic"] == true));
    let o = run(&["catalog", "--prime", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "green", "--depth", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["--json", "zeta", "--form", "x1^3 - x2^3", "--depth", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn budget_exhaustion_exits_four() {
    let o = Command::new(env!("CARGO_BIN_EXE_pzeta"))
        .args(["verify", "--prime", "5", "--n", "3", "--form", "x1^2*x2 + x3^3"])
        .env("PZETA_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4), "{}", text(&o));
}
