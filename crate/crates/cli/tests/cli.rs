use std::path::Path;
use std::process::{Command, Output};

use polymat::construct::{canonical_counterexample, cycle_matroid, uniform, unique_ordering_default};
use polymat::format::{load, save};
use polymat::catalog::CatalogEntry;
use polymat::verify::{run_checker, VerifyConfig};
use polymat::Polymatroid;
use tempfile::TempDir;

fn pm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("pm runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn examples() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = pm(&["examples", "--emit", "."], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    dir
}

#[test]
fn chain_on_counterexample() {
    let dir = examples();
    let out = pm(&["chain", "counterexample.json", "line_z.json"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "delete x\ndelete y\n");
}

#[test]
fn singleton_removal_has_one_constrained_ordering() {
    let dir = examples();
    let args = [
        "orderings",
        "unique_ordering_1.json",
        "unique_ordering_minor.json",
        "--constrained",
        "--count-only",
    ];
    let out = pm(&args, dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn forced_family_orderings() {
    let dir = examples();
    let out = pm(&["orderings", "unique_ordering_2.json", "unique_ordering_minor.json"], dir.path());
    assert_eq!(stdout(&out), "f1 f2\n");
    let out = pm(
        &["orderings", "--constrained", "unique_ordering_2.json", "unique_ordering_minor.json"],
        dir.path(),
    );
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert!(lines.len() >= 2);
    assert!(lines.contains(&"contract f1, delete f2".to_string()));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = examples();
    for args in [
        vec!["chain", "counterexample.json", "line_z.json"],
        vec!["orderings", "--constrained", "unique_ordering_3.json", "unique_ordering_minor.json"],
        vec!["info", "unique_ordering_3.json"],
    ] {
        let a = pm(&args, dir.path());
        let b = pm(&args, dir.path());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn examples_load_and_validate() {
    let dir = examples();
    let m = load(dir.path().join("counterexample.json")).unwrap();
    assert!(m.equals(&canonical_counterexample()));
    let n = load(dir.path().join("unique_ordering_minor.json")).unwrap();
    assert!(n.equals(&uniform(2, 3, &["a", "b", "c"]).unwrap()));
    let f = load(dir.path().join("unique_ordering_2.json")).unwrap();
    assert!(f.equals(&unique_ordering_default(2).unwrap()));
    let out = pm(&["validate", "counterexample.json"], dir.path());
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "valid\n"));
}

#[test]
fn validate_reports_violations() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"format_version":"pm1","ground_set":["a"],"k":2,"ranks":{"a":3}}"#;
    std::fs::write(dir.path().join("bad.json"), text).unwrap();
    let out = pm(&["validate", "bad.json"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("singleton-bound"));
    // other commands refuse invalid tables outright
    let out = pm(&["info", "bad.json"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn input_errors_name_the_offender() {
    let dir = examples();
    let out = pm(&["minor", "counterexample.json", "--delete", "q"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("\"q\""));
    let out = pm(&["verify", "--bogus"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--bogus"));
    let out = pm(&["verify", "--suite", "nope"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nope"));
    let out = pm(&["info", "missing.json"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("missing.json"));
}

#[test]
fn missing_rank_key_is_structural_error() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"format_version":"pm1","ground_set":["x","z"],"k":2,"ranks":{"x":2,"z":2}}"#;
    std::fs::write(dir.path().join("short.json"), text).unwrap();
    let out = pm(&["validate", "short.json"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("x,z"));
}

#[test]
fn minor_components_and_natural() {
    let dir = examples();
    let out = pm(&["minor", "counterexample.json", "--contract", "y", "-o", "m.json"], dir.path());
    assert_eq!(code(&out), 0);
    let m = load(dir.path().join("m.json")).unwrap();
    assert!(m.equals(&uniform(2, 2, &["x", "z"]).unwrap()));

    let out = pm(&["minor", "counterexample.json", "--delete", "y", "-o", "d.json"], dir.path());
    assert_eq!(code(&out), 0);
    let out = pm(&["components", "d.json"], dir.path());
    assert_eq!(stdout(&out), "x\nz\n");

    let out = pm(&["natural", "counterexample.json", "-o", "nat.json"], dir.path());
    assert_eq!(stdout(&out), "x -> x_1,x_2\ny -> y_1,y_2\nz -> z_1,z_2\n");
    assert_eq!(load(dir.path().join("nat.json")).unwrap().len(), 6);
}

#[test]
fn decompose_then_twosum() {
    let dir = TempDir::new().unwrap();
    let square = cycle_matroid(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap();
    save(&square, dir.path().join("square.json")).unwrap();
    let out = pm(&["decompose", "square.json", "--side", "a,b", "-o", "part"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("basepoint p_"));
    let basepoint = stdout(&out).lines().next().unwrap()["basepoint ".len()..].to_string();
    let out = pm(
        &["twosum", "part_1.json", "part_2.json", "--basepoint", &basepoint, "-o", "sum.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(load(dir.path().join("sum.json")).unwrap().equals(&square));

    save(&uniform(2, 4, &["a", "b", "c", "d"]).unwrap(), dir.path().join("u24.json")).unwrap();
    let out = pm(&["decompose", "u24.json", "--side", "a,b", "-o", "bad"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_single_checker_with_reports() {
    let dir = TempDir::new().unwrap();
    let args = ["verify", "--suite", "hall_splitter", "--max-n", "4", "--out", "reports"];
    let out = pm(&args, dir.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("hall_splitter PASS checked="), "{text}");
    assert!(!text.contains("elapsed"));
    assert!(dir.path().join("reports/hall_splitter.json").exists());
    let out = pm(&["verify", "--suite", "hall_splitter", "--max-n", "4", "--timing"], dir.path());
    assert!(stdout(&out).contains("elapsed="));
}

#[test]
fn full_suite_passes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["verify", "--suite", "all", "--max-n", "5", "--seed", "42"];
    let a = pm(&args, dir.path());
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(stdout(&a).lines().count(), polymat::verify::CHECKERS.len());
    let b = pm(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failing_counterexample_replays_with_exit_3() {
    let dir = TempDir::new().unwrap();
    let bad = Polymatroid::from_labels(&["a", "b"], 4, |m| m.count_ones().pow(2)).unwrap();
    let entry = CatalogEntry { name: "bad".into(), polymatroid: bad };
    let report = run_checker("local_conn_monotone", &[entry], &VerifyConfig::default()).unwrap();
    let file = report.counterexamples[0].to_file();
    std::fs::write(dir.path().join("cx.json"), serde_json::to_string(&file).unwrap()).unwrap();
    let out = pm(&["replay", "cx.json"], dir.path());
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).starts_with("local_conn_monotone FAIL"));
}
