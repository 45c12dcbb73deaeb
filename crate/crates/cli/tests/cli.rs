use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodgecalc"))
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hodgecalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_report(script: &Path) -> Value {
    let o = run(&["run", script.to_str().unwrap(), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_us");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn has_json_number(v: &Value) -> bool {
    match v {
        Value::Number(_) => true,
        Value::Object(m) => m.values().any(has_json_number),
        Value::Array(a) => a.iter().any(has_json_number),
        _ => false,
    }
}

#[test]
fn every_documented_script_passes() {
    for name in [
        "blowup_point_p2",
        "blowup_line_p3",
        "affine_compact",
        "curve_center",
        "bundle",
    ] {
        let p = examples().join(format!("{name}.json"));
        let o = run(&["run", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("0 failed"), "{name}");
    }
}

#[test]
fn point_blowup_diamond() {
    let report = json_report(&examples().join("blowup_point_p2.json"));
    let diamond = &report["results"][0];
    assert_eq!(diamond["kind"], "diamond");
    assert_eq!(diamond["data"]["text"], "1 / 0 0 / 0 2 0 / 0 0 / 1");
    assert_eq!(
        report["results"][1]["data"]["betti"],
        serde_json::json!(["1", "0", "2", "0", "1"])
    );
    assert_eq!(report["passed"], true);
    assert_eq!(report["version"], 1);
}

#[test]
fn compact_flavor_diamond() {
    let report = json_report(&examples().join("affine_compact.json"));
    let hodge = |i: usize| report["results"][i]["data"]["hodge"].clone();
    assert_eq!(hodge(0), serde_json::json!({"(0,0)": "1", "(1,1)": "1"}));
    assert_eq!(hodge(1), serde_json::json!({"(1,1)": "1", "(2,2)": "1"}));
}

#[test]
fn reports_are_deterministic_and_float_free() {
    let p = examples().join("blowup_line_p3.json");
    let (mut a, mut b) = (json_report(&p), json_report(&p));
    assert!(!has_json_number(&a["results"]), "numbers must be strings");
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn json_file_output() {
    let out = std::env::temp_dir().join(format!("hodgecalc-report-{}.json", std::process::id()));
    let p = examples().join("bundle.json");
    let o = run(&["run", p.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert!(v["results"][0]["elapsed_us"].as_str().unwrap().parse::<u64>().is_ok());
}

#[test]
fn undefined_reference_exits_2() {
    let p = scratch(
        "undefined.json",
        r#"{"version":1,"spaces":{"X":{"op":"product","left":"P2","right":"Q"},"P2":{"op":"projective_space","n":2}}}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains(r#"spaces.X.right: undefined reference "Q""#),
        "{}",
        stderr(&o)
    );
}

#[test]
fn cycle_exits_2() {
    let p = scratch(
        "cycle.json",
        r#"{"version":1,"spaces":{"A":{"op":"twist","base":"B","name":"L"},"B":{"op":"twist","base":"A","name":"M"}}}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cycle A -> B -> A"), "{}", stderr(&o));
}

#[test]
fn malformed_input_reports_path_and_line() {
    let p = scratch(
        "bad.json",
        "{\"version\": 1,\n \"spaces\": {\n  \"P\": {\"op\": \"projective_space\", \"n\": -1}\n }\n}\n",
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("spaces.P") && e.contains("line 4"), "{e}");

    let o = run(&["run", "/nonexistent/script.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inconsistent_datum_exits_2() {
    // i_*(H_Y) = 0 breaks the projection formula.
    let p = scratch(
        "datum.json",
        r#"{"version":1,"spaces":{
            "P3":{"op":"projective_space","n":3},"L":{"op":"projective_space","n":1},
            "X":{"op":"blow_up","ambient":"P3","center":"L","codim":2,"normal_chern":[{"H":2},{}],
                 "restriction":{"1":{"1":1},"H":{"H":1}},"gysin":{"1":{"H^2":1}}}}}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("projection formula"), "{}", stderr(&o));

    let p = scratch(
        "label.json",
        r#"{"version":1,"spaces":{"P":{"op":"projective_space","n":1},
            "E":{"op":"projective_bundle","base":"P","rank":2,"chern":[{"K":1},{}]}}}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains(r#"spaces.E.chern[0]: unknown basis label "K""#),
        "{}",
        stderr(&o)
    );
}

#[test]
fn diamond_of_de_rham_space_is_an_input_error() {
    let p = scratch(
        "derham.json",
        r#"{"version":1,"mode":"derham","spaces":{"C":{"op":"curve","genus":2}},"queries":[{"kind":"diamond","space":"C"}]}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("queries[0]"), "{}", stderr(&o));
}

#[test]
fn selftest_passes_with_timing() {
    let o = run(&["selftest", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    for c in checks {
        assert_eq!(c["passed"], true, "{c}");
        assert!(c["elapsed_us"].as_str().unwrap().parse::<u64>().is_ok());
    }
}

#[test]
fn poly_check_table() {
    let o = run(&["poly-check", "--max-r", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.trim_end().ends_with("PASS      PASS")).count(),
        8,
        "{out}"
    );
}

#[test]
fn poly_check_as_a_script_query() {
    let p = scratch(
        "poly.json",
        r#"{"version":1,"queries":[{"kind":"poly-check","max_r":8}]}"#,
    );
    let v = json_report(&p);
    assert_eq!(v["results"][0]["checks"].as_array().unwrap().len(), 16);
    assert_eq!(v["passed"], true);
}

#[test]
fn bc_aeppli_of_a_zigzag() {
    let p = examples().join("zigzag.json");
    let o = run(&["bc-aeppli", p.to_str().unwrap(), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["complex"]["bott_chern"], serde_json::json!({"(1,1)": "1"}));
    assert_eq!(v["complex"]["aeppli"], serde_json::json!({"(0,1)": "1", "(1,0)": "1"}));
    assert_eq!(v["complex"]["total"], serde_json::json!({"1": "1"}));

    let bad = scratch(
        "notcomplex.json",
        r#"{"components":[{"p":0,"q":0,"dim":1},{"p":1,"q":0,"dim":1},{"p":2,"q":0,"dim":1}],
        "d1":[{"p":0,"q":0,"matrix":[[1]]},{"p":1,"q":0,"matrix":[[1]]}]}"#,
    );
    let o = run(&["bc-aeppli", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d1 d1 != 0"), "{}", stderr(&o));
}

#[test]
fn complexes_inside_scripts() {
    let p = scratch(
        "complex.json",
        r#"{"version":1,"spaces":{"K":{"op":"double_complex",
            "components":[{"p":1,"q":0,"dim":1},{"p":0,"q":1,"dim":1},{"p":1,"q":1,"dim":1}],
            "d1":[{"p":0,"q":1,"matrix":[["1"]]}],"d2":[{"p":1,"q":0,"matrix":[["1"]]}]}},
          "queries":[{"kind":"bc-aeppli","target":"K"},{"kind":"verify","target":"K"},{"kind":"betti","space":"K"}]}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    // The betti query needs a space, not a complex.
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a space"), "{}", stderr(&o));

    let p = scratch(
        "complex2.json",
        r#"{"version":1,"spaces":{"K":{"op":"double_complex",
            "components":[{"p":1,"q":0,"dim":1},{"p":0,"q":1,"dim":1},{"p":1,"q":1,"dim":1}],
            "d1":[{"p":0,"q":1,"matrix":[["1"]]}],"d2":[{"p":1,"q":0,"matrix":[["1"]]}]}},
          "queries":[{"kind":"bc-aeppli","target":"K"},{"kind":"verify","target":"K"}]}"#,
    );
    let v = json_report(&p);
    assert_eq!(v["results"][0]["data"]["bott_chern"], serde_json::json!({"(1,1)": "1"}));
    assert_eq!(v["results"][1]["passed"], true);
}
