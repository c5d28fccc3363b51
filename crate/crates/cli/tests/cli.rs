use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).display().to_string()
}

fn opalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opalg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = opalg(&all);
    (o.status.code().unwrap(), serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{}: {}", e, stderr(&o))))
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("opalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn lie_dimensions() {
    let o = opalg(&["operad-dims", "lie", "--max-arity", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Lie dimensions, arities 1..4: 1,1,2,6\n"));
    let (_, v) = json(&["operad-dims", "asc", "--max-arity", "4"]);
    assert_eq!(v["report"]["dims"], serde_json::json!([1, 2, 6, 24]));
    assert_eq!(v["schema"], 1);
}

#[test]
fn hand_written_lie_presentation_matches_the_tag() {
    let (code, v) = json(&["operad-dims", &example("lie_presentation.toml"), "--max-arity", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["dims"], serde_json::json!([1, 1, 2, 6, 24]));
}

#[test]
fn com_is_koszul() {
    let o = opalg(&["koszul-check", "com", "--max-arity", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("acyclic up to arity 4\n"));
}

#[test]
fn sl2_certificate_and_swapped_failure() {
    let (code, v) = json(&["seminf-check", &example("sl2.toml"), "--max-weight", "4"]);
    assert_eq!(code, 0);
    let table = v["report"]["k_table"].as_array().unwrap();
    let cell = table.iter().find(|c| c["base_weight"] == -2 && c["complement_weight"] == 2).unwrap();
    assert_eq!((cell["k_min"].as_i64(), cell["k_max"].as_i64()), (Some(0), Some(2)));
    let (code, v) = json(&["seminf-check", &example("sl2_swapped.toml"), "--max-weight", "4"]);
    assert_eq!(code, 1);
    assert!(v["report"]["violated"].as_array().unwrap().contains(&serde_json::json!(3)));
}

#[test]
fn abelian_semi_infinite_homology() {
    let (code, v) = json(&["seminf-homology", &example("abelian.toml"), "--max-weight", "2", "--window=-3:3"]);
    assert_eq!(code, 0);
    let t = &v["report"]["totals"];
    let interior: Vec<i64> = ["-2", "-1", "0", "1", "2"].iter().map(|n| t[n].as_i64().unwrap()).collect();
    assert_eq!(interior, vec![0, 3, 7, 3, 0]);
    assert_eq!(v["report"]["by_weight"]["0"]["unverified"], serde_json::json!([-3, 3]));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["seminf-homology".to_string(), example("abelian.toml"), "--max-weight".into(), "2".into()],
        vec!["check-algebra".to_string(), example("sl2.toml"), "--seed".into(), "17".into()],
        vec!["relative-homology".to_string(), example("sl2.toml")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (opalg(&args), opalg(&args));
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn reports_carry_conventions() {
    let (_, v) = json(&["cohomology", &example("sl2.toml")]);
    let c = &v["config"]["conventions"];
    assert_eq!(c["operadic_to_classical_degree_shift"], 1);
    assert!(c["hom_action"].as_str().unwrap().contains("outermost U(A) factor"));
    assert_eq!(v["report"]["betti"], serde_json::json!({ "0": 0, "1": 0, "2": 1 }));
}

#[test]
fn relative_comparison_reports_the_mismatch() {
    let (code, v) = json(&["compare-koszul", &example("sl2.toml")]);
    assert_eq!(code, 1);
    let m = v["report"]["mismatches"].as_array().unwrap();
    assert!(m.contains(&serde_json::json!("homology degree 2: relative 0 vs operadic 1")));
}

#[test]
fn prime_fields() {
    let (code, v) = json(&["operad-dims", "lie", "--field", "F7", "--max-arity", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["field"], "F7");
    assert_eq!(v["report"]["dims"], serde_json::json!([1, 1, 2, 6, 24]));
    let o = opalg(&["operad-dims", "lie", "--field", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not prime"));
    let o = opalg(&["operad-dims", "lie", "--field", "3", "--max-arity", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let cases = [
        ("anti.toml", "[algebra]\noperad = \"lie\"\nbasis = [\"a\",\"b\"]\n[algebra.brackets]\n\"a,b\" = \"a\"\n\"b,a\" = \"a\"\n", "pair (a,b)"),
        ("syntax.toml", "[algebra]\noperad = \"lie\"\nbasis = [\"a\"\n", "line 3, column"),
        ("tag.toml", "[algebra]\noperad = \"pre-lie\"\n", "unknown operad tag"),
        ("dangling.toml", "[algebra]\noperad = \"lie\"\nbasis = [\"a\"]\n[morphism]\nsource = \"b\"\n", "dangling reference"),
    ];
    for (name, text, needle) in cases {
        let o = opalg(&["relative-homology", &scratch(name, text)]);
        assert_eq!(o.status.code(), Some(2), "{}", name);
        assert!(stderr(&o).contains(needle), "{}: {}", name, stderr(&o));
    }
}

#[test]
fn algebra_checks() {
    let empty = scratch("empty.toml", "[algebra]\noperad = \"lie\"\n");
    let (code, v) = json(&["check-algebra", &empty]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["dimension"], 0);
    let broken = scratch("jacobi.toml", "[algebra]\noperad = \"lie\"\nbasis = [\"x\",\"y\",\"z\"]\n[algebra.brackets]\n\"x,y\" = \"z\"\n\"x,z\" = \"x\"\n");
    let (code, v) = json(&["check-algebra", &broken]);
    assert_eq!(code, 1);
    assert!(!v["report"]["violations"].as_array().unwrap().is_empty());
    assert!(!v["report"]["sampled_checks"]["failures"].as_array().unwrap().is_empty());
}
