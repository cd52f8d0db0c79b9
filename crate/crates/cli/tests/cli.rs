use std::collections::HashSet;
use std::process::{Command, Output};

fn logfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logfree"))
        .args(args)
        .env_remove("LOGFREE_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn digit_runs(s: &str) -> HashSet<String> {
    s.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

#[test]
fn free_boolean_triple() {
    let o = logfree(&["free", "boolean-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "FREE, exponents {1,1}, certificate: Saito det = 3·f");
}

#[test]
fn compare_generic_and_concurrent() {
    let o = logfree(&["compare", "generic-3-2", "concurrent-3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "lattices NOT isomorphic (rank-2 counts 3 vs 1)");
    assert!(out.contains("elements         7              5"), "{out}");
}

#[test]
fn compare_isomorphic_gives_atom_map() {
    let o = logfree(&["compare", "boolean-2", "generic-3-2"]);
    assert!(stdout(&o).starts_with("lattices isomorphic (atom map "));
}

#[test]
fn zero_denominator_is_a_parse_error_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.arr");
    std::fs::write(&f, "# header next\nP 2 Q\n1 0 0\n1/0 1 0\n").unwrap();
    let o = logfree(&["free", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 4") && err.contains("1/0"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(logfree(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(logfree(&["free", "no-such-arrangement"]).status.code(), Some(1));
    assert_eq!(logfree(&["--field", "F4", "free", "boolean-2"]).status.code(), Some(1));
    assert_eq!(logfree(&["search", "--n", "2", "--k", "5..3"]).status.code(), Some(1));
    assert_eq!(logfree(&["--help"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_exits_two() {
    let o = logfree(&["--budget", "2", "classify", "braid-3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget exhausted"));
}

#[test]
fn stablefree_reports_vacuity() {
    let o = logfree(&["stablefree", "generic-4-2"]);
    assert!(stdout(&o).starts_with("STABLY FREE (vacuous range: n = 2 <= 3)"));
    let o = logfree(&["stablefree", "generic-6-4"]);
    assert!(stdout(&o).starts_with("STABLY FREE (H^i_* = 0 for 2 <= i <= 2)"));
}

#[test]
fn field_override_and_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("four.arr");
    std::fs::write(&f, "P 2 F5\n1 0 0\n0 1 0\n0 0 1\n1 1 1\n").unwrap();
    let o = logfree(&["free", f.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("NOT FREE, projective dimension 1"));
    let o = logfree(&["--json", "free", f.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["field"], "F5");
    let o = logfree(&["--json", "--field", "Q", "free", f.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["field"], "Q");
}

#[test]
fn cohomology_window() {
    let o = logfree(&["cohomology", "generic-4-2", "--window", "-2", "2"]);
    let out = stdout(&o);
    assert!(out.contains("explicit window [-2, 2]"), "{out}");
    let h1 = out.lines().find(|l| l.starts_with("h^1")).unwrap();
    assert_eq!(h1.split_whitespace().skip(1).collect::<Vec<_>>(), vec!["0", "0", "1", "0", "0"]);
}

#[test]
fn machine_output_is_stable_and_round_trips() {
    for args in [
        vec!["--json", "classify", "generic-5-3"],
        vec!["--json", "lattice", "braid-2"],
        vec!["--json", "compare", "braid-2", "deleted-braid-2"],
        vec!["--json", "--no-cache", "search", "--n", "2", "--k", "..4", "--field", "F3"],
        vec!["--json", "catalog"],
    ] {
        let a = stdout(&logfree(&args));
        let b = stdout(&logfree(&args));
        assert_eq!(a, b, "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], "logfree-report/1");
        assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), a, "{args:?}");
    }
}

#[test]
fn human_numbers_appear_in_machine_output() {
    for cmd in [
        vec!["free", "braid-3"],
        vec!["stablefree", "generic-6-4"],
        vec!["module", "generic-4-2"],
        vec!["cohomology", "generic-5-3"],
        vec!["lattice", "one-triple-4"],
        vec!["classify", "deleted-braid-2"],
        vec!["compare", "generic-3-2", "concurrent-3"],
        vec!["--no-cache", "search", "--n", "2", "--k", "3..4", "--field", "F3"],
    ] {
        let text = stdout(&logfree(&cmd));
        let mut json_args = vec!["--json"];
        json_args.extend(&cmd);
        let machine = digit_runs(&stdout(&logfree(&json_args)));
        let missing: Vec<String> = digit_runs(&text).difference(&machine).cloned().collect();
        assert!(missing.is_empty(), "{cmd:?}: {missing:?} missing from the machine document");
    }
}

#[test]
fn search_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache", d, "search", "--n", "2", "--k", "3", "--field", "F3"];
    let first = logfree(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stderr(&first).contains("0 hits"));
    let second = logfree(&args);
    assert!(stderr(&second).contains("286 hits, 0 new"), "{}", stderr(&second));
    assert_eq!(stdout(&first), stdout(&second));
    let out = stdout(&first);
    assert!(out.contains("286 arrangements"));
    assert!(out.contains("0 VIOLATION"));
    assert!(out.contains("no characteristic-zero claim"));
}

#[test]
fn catalog_lists_patterns() {
    let out = stdout(&logfree(&["catalog"]));
    for p in ["boolean-<n>", "concurrent-3", "generic-<k>-<n>", "braid-<n>"] {
        assert!(out.contains(p), "{p}");
    }
}
