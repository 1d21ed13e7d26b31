use std::process::{Command, Output};

use serde_json::Value;

const LINEAR: &str = r#"{"kind":"poly","coeffs":[{"rows":1,"cols":1,"data":[[0,0]]},{"rows":1,"cols":1,"data":[[1,0]]}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur-order")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("schur-order-cli-{}-{name}", std::process::id()))
}

#[test]
fn scalar_preorder_witness() {
    let o = run(&["check", "--mode", "preceq", "--a", "[[0.5]]-const", "--b", "[[0.3]]-const", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let x = json(&o)["summary"]["x"].as_f64().unwrap();
    assert!((x - 0.2 / 0.91).abs() < 1e-12, "{x}");
    let human = run(&["check", "--a", "[[0.5]]-const", "--b", "[[0.3]]-const"]);
    assert!(String::from_utf8_lossy(&human.stdout).contains("0.21978"));
    let csv = run(&["check", "--a", "[[0.5]]-const", "--b", "[[0.3]]-const", "--format", "csv"]);
    assert!(String::from_utf8_lossy(&csv.stdout).contains("summary,x,0.21978"));
}

#[test]
fn exit_codes() {
    let refused = run(&["check", "--a", "[[0.9]]-const", "--b", "[[1]]-const"]);
    assert_eq!(code(&refused), 1);
    let diverging = run(&["check", "--f", "[[0]]-const", "--g", LINEAR, "--format", "json"]);
    assert_eq!(code(&diverging), 1);
    assert_eq!(json(&diverging)["verdict"], "refuted-diverging");
    let radii = "0.5,0.75,0.875,0.9375,0.96875,0.984375,0.9921875,0.99609375";
    let flat = run(&["check", "--f", LINEAR, "--g", "[[0.5]]-const", "--radii", radii, "--format", "json"]);
    assert_eq!(code(&flat), 2);
    assert_eq!(json(&flat)["verdict"], "inconclusive");
    let supported = run(&["check", "--f", LINEAR, "--g", "[[0.5]]-const"]);
    assert_eq!(code(&supported), 0);
    let equiv = run(&["check", "--mode", "equiv", "--a", "[[0.5]]-const", "--b", "[[0.3]]-const"]);
    assert_eq!(code(&equiv), 0);
}

#[test]
fn input_errors_exit_3() {
    let o = run(&["check", "--a", r#"{"kind": "const", "value": "#, "--b", "[[0]]"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column"));
    assert_eq!(code(&run(&["check", "--a", "[[2]]-const", "--b", "[[0]]-const"])), 3);
    assert_eq!(code(&run(&["check", "--a", "/no/such/input.json", "--b", "[[0]]-const"])), 3);
    assert_eq!(code(&run(&["check", "--a", "[[0]]-const", "--b", "[[0]]-const", "--tol-psd", "-1"])), 3);
    assert_eq!(code(&run(&["check", "--bogus"])), 3);
    let unknown = run(&["demo", "nope"]);
    assert_eq!(code(&unknown), 3);
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("cor23, ex24, ex216, ex35, thm03, thm04, prop38"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["check", "--f", "[[0]]-const", "--g", LINEAR, "--format", "json", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let demo = ["demo", "thm03", "--format", "json", "--seed", "7"];
    assert_eq!(run(&demo).stdout, run(&demo).stdout);
}

#[test]
fn profile_csv() {
    let path = temp_path("profile.csv");
    let p = path.to_str().unwrap();
    let o = run(&["profile", "--f", "[[0]]-const", "--g", LINEAR, "--radii", "0.5,0.9", "--angles", "8", "--csv", p]);
    assert_eq!(code(&o), 0);
    let body = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(body.starts_with("radius,angle,norm_q,norm_r,r_lambda,residual\n"));
    let row: Vec<f64> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect::<Vec<f64>>())
        .find(|r| r[0] == 0.9)
        .unwrap();
    assert!((row[2] - 0.9 / 0.19).abs() < 1e-10);

    let same = run(&["profile", "--f", LINEAR, "--g", LINEAR, "--format", "csv"]);
    let text = String::from_utf8(same.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0.0")));

    let b = |w: f64| format!(r#"{{"kind":"blaschke","omega":[{w},0],"alpha":0}}"#);
    let o = run(&["profile", "--f", &b(0.3), "--g", &b(0.5), "--format", "json"]);
    assert_eq!(json(&o)["summary"]["classification"], "evidence-diverging");

    let bad = run(&["profile", "--f", LINEAR, "--g", LINEAR, "--csv", "/no/such/dir/x.csv"]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn redheffer_modes() {
    let o = run(&["redheffer", "--phi", "family:0.8", "--f", "[[0.5]]-const", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["detail"]["r"]["kind"], "redheffer");
    let b = |w: f64| format!(r#"{{"kind":"blaschke","omega":[{w},0],"alpha":0}}"#);
    let refused = run(&["redheffer", "--mode", "equiv", "--phi", "family:0.8", "--f", &b(0.3), "--g", &b(0.5)]);
    assert_eq!(code(&refused), 1);
    let ok = run(&["redheffer", "--mode", "equiv", "--phi", "family:0.8", "--f", "[[0]]-const", "--g", "[[0.5]]-const"]);
    assert_eq!(code(&ok), 0);
    let pre = run(&["redheffer", "--mode", "preceq", "--phi", "family:0.8", "--f", "[[1]]-const", "--g", "[[0]]-const"]);
    assert_eq!(code(&pre), 0);
    let pull = run(&["redheffer", "--mode", "pullback", "--phi", "family:0.5,0.8", "--f", "[[0, 0], [0, 0]]-const", "--g", "[[0.5, 0], [0, 0.5]]-const"]);
    assert_eq!(code(&pull), 0);
    let outside = run(&["redheffer", "--phi", "[[1, 0], [0, 1]]", "--split", "1,1", "--f", "[[1]]-const"]);
    assert_eq!(code(&outside), 3);
    assert_eq!(code(&run(&["redheffer", "--phi", "[[1, 0], [0, 1]]", "--f", "[[0]]-const"])), 3);
}

#[test]
fn demos_pass() {
    for name in ["cor23", "ex24", "ex216", "thm03", "thm04", "prop38"] {
        let o = run(&["demo", name]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let o = run(&["demo", "ex35", "--deltas", "0.5,0.75,0.875", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows = json(&o)["tables"][0]["rows"].as_array().unwrap().len();
    assert_eq!(rows, 3);
    assert_eq!(code(&run(&["demo", "ex35", "--deltas", "0.5,1.5"])), 3);
}

#[test]
fn version() {
    let o = run(&["version"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
}
