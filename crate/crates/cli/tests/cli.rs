use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sectreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sectreg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generators(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("ring ")).collect()
}

fn construct_to(dir: &Path, name: &str, recipe: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["construct"];
    args.extend_from_slice(recipe);
    args.extend_from_slice(&["-o", &p]);
    let o = sectreg(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn invariants_json(file: &str, extra: &[&str]) -> Value {
    let mut args = vec!["invariants", file, "--json"];
    args.extend_from_slice(extra);
    let o = sectreg(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn construct_scroll() {
    let o = sectreg(&["construct", "scroll", "1", "1", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# recipe: scroll 1 1 1"));
    assert!(text.contains("ring 32003 x0 x1 x2 x3 x4 x5\n"));
    let gens = generators(&text);
    assert_eq!(gens.len(), 3);
    assert!(gens.iter().all(|g| g.split(" + ").chain(g.split(" - ")).all(|t| !t.contains('^'))));
}

#[test]
fn construct_example_has_minimal_generators() {
    let o = sectreg(&["construct", "example-7.3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let degrees: Vec<usize> = generators(&text)
        .iter()
        .map(|g| {
            let lead = g.split([' ']).next().unwrap();
            lead.split('*')
                .map(|f| f.split_once('^').map_or(1, |(_, e)| e.parse::<usize>().unwrap()))
                .sum()
        })
        .collect();
    // six quadrics, four cubics and one quintic, as in the first column of the table
    assert_eq!(degrees.iter().filter(|&&d| d == 2).count(), 6);
    assert_eq!(degrees.iter().filter(|&&d| d == 3).count(), 4);
    assert_eq!(degrees.iter().filter(|&&d| d == 5).count(), 1);
    assert_eq!(degrees.len(), 11);
}

#[test]
fn malformed_recipes_are_rejected() {
    let o = sectreg(&["construct", "scroll 1 1;frobnicate 2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("frobnicate"), "{err}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.recipe");
    std::fs::write(&path, "scroll 1 1 1\ndivisor H+2F section g0=s^3, g1=t, g2=t^3\n").unwrap();
    let o = sectreg(&["construct", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("g1"));
    assert_eq!(sectreg(&["construct", "example-9.9"]).status.code(), Some(2));
}

#[test]
fn invariants_of_a_scroll() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct_to(dir.path(), "s12.ideal", &["scroll", "1", "2"]);
    let rep = invariants_json(&f, &[]);
    assert_eq!(rep["dim"], 2);
    assert_eq!(rep["degree"], 3);
    assert_eq!(rep["reg"], 2);
    assert_eq!(rep["depth"], 3);
    assert_eq!(rep["complete"], true);
    assert!(rep["betti"]["triples"].as_array().unwrap().contains(&serde_json::json!([1, 1, 3])));
    // only surfaces have an extremal plane
    let curve = construct_to(dir.path(), "c.ideal", &["scroll", "3"]);
    let o = sectreg(&["invariants", &curve, "--with-plane"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("surfaces"));
}

#[test]
fn invariants_with_plane() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct_to(dir.path(), "x73.ideal", &["example-7.3"]);
    let rep = invariants_json(&f, &["--with-plane", "--h-window", "-2..4"]);
    assert_eq!(rep["reg"], 5);
    assert_eq!(rep["depth"], 2);
    assert_eq!(rep["plane"]["tau"], serde_json::json!([2, 3]));
    assert_eq!(rep["window"], serde_json::json!([-2, 4]));
    let again = invariants_json(&f, &["--with-plane", "--h-window", "-2..4"]);
    assert_eq!(rep, again);
    let over_other_prime = invariants_json(&f, &["--char", "1000003"]);
    assert_eq!(over_other_prime["characteristic"], 1000003);
    assert_eq!(over_other_prime["betti"], rep["betti"]);

    let f2 = construct_to(dir.path(), "x74f2.ideal", &["example-7.4-f2"]);
    let rep = invariants_json(&f2, &["--with-plane"]);
    assert_eq!(rep["plane"]["tau"], serde_json::json!([1, 1]));
}

#[test]
fn stage_timeout_emits_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct_to(dir.path(), "x75f2.ideal", &["example-7.5-f2"]);
    let o = sectreg(&["invariants", &f, "--timeout", "0", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    if !text.is_empty() {
        let rep: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(rep["complete"], false);
    }
}

#[test]
fn verify_examples() {
    let o = sectreg(&["verify-paper", "7.3"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("PASS example-7.3"));
    assert!(text.contains("[p=32003]") && text.contains("[p=1000003]"));
    assert!(text.contains("caveat:"));
}

#[test]
fn verify_formulas() {
    let o = sectreg(&["verify-paper", "lemma-4.10", "--a", "1", "--r", "5", "--d", "6", "--json"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["pass"], true);
    let lines = doc["targets"][0]["lines"].as_array().unwrap();
    assert!(lines.iter().any(|l| l["what"] == "h1(J_Y(2))" && l["computed"] == "3"));

    let o = sectreg(&["verify-paper", "constr-7.1", "--case", "B", "--char", "32003"]);
    assert!(o.status.success(), "{}", stdout(&o));

    // the quoted value 3 disagrees with the computed 4, and a mismatch is a failure
    let o = sectreg(&["verify-paper", "lemma-4.10", "--a", "1", "--r", "6", "--d", "9", "--char", "32003"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("computed 4, expected 3"));

    assert_eq!(sectreg(&["verify-paper", "9.9"]).status.code(), Some(2));
}
