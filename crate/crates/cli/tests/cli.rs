use std::process::{Command, Output};

fn p4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p4")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rep_encodes_and_decodes() {
    let o = p4(&["rep", "13"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "10001\n");
    assert_eq!(stdout(&p4(&["rep", "--decode", "10001"])), "13\n");
    assert_eq!(stdout(&p4(&["rep", "0"])), "0\n");
    assert_eq!(stdout(&p4(&["rep", "0", "--raw"])), "\n");
}

#[test]
fn invalid_representation_is_a_usage_error() {
    let o = p4(&["rep", "--decode", "111"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("invalid representation: forbidden factor 111"), "{err}");
    assert_eq!(p4(&["rep", "--decode", "1101"]).status.code(), Some(2));
    assert_eq!(p4(&["rep", "--decode", "102"]).status.code(), Some(2));
    assert_eq!(p4(&["rep", "-3"]).status.code(), Some(2));
}

#[test]
fn arithmetic_on_digits() {
    assert_eq!(stdout(&p4(&["succ", "10001"])), "10010\n");
    assert_eq!(stdout(&p4(&["add", "101", "11"])), "1001\n");
    assert_eq!(stdout(&p4(&["prefix", "12"])), "012102101021\n");
}

#[test]
fn palindromes_as_json() {
    let o = p4(&["palindromes", "--max", "9", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["claim"].is_string()));
    assert_eq!(rows[8]["palindrome"], "1012101");
}

#[test]
fn csv_output() {
    let o = p4(&["complexity", "--max", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,value,expected\n1,3,3\n2,5,5\n3,7,7\n");
}

#[test]
fn dot_is_only_for_automata() {
    assert_eq!(p4(&["complexity", "--format", "dot"]).status.code(), Some(2));
    let o = p4(&["validate", "p", "--format", "dot"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn acceptance_subset() {
    let o = p4(&["acceptance", "--only", "complexity"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("PASS") && out.contains("complexity"), "{out}");
    assert!(out.contains("1/1 criteria passed"));
    assert_eq!(p4(&["acceptance", "--only", "nonsense"]).status.code(), Some(2));
}

#[test]
fn corrupted_assets_are_rejected() {
    let dir = std::env::temp_dir().join(format!("p4-cli-corrupt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("p_dfao.txt"), "not an automaton\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_p4"))
        .args(["validate", "p"])
        .env("P4_ASSET_DIR", &dir)
        .output()
        .unwrap();
    let code = o.status.code();
    assert!(matches!(code, Some(1) | Some(2)), "{code:?}");
    let missing = Command::new(env!("CARGO_BIN_EXE_p4"))
        .args(["at", "5"])
        .env("P4_ASSET_DIR", dir.join("missing"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["abelian", "--max", "40", "--format", "json"][..],
        &["validate", "successor", "--seed", "7", "--format", "csv"][..],
        &["special", "--lengths", "60"][..],
    ] {
        assert_eq!(stdout(&p4(args)), stdout(&p4(args)), "{args:?}");
    }
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("p4-cli-out-{}.txt", std::process::id()));
    let o = p4(&["rep", "100", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, format!("{}\n", stdout(&p4(&["rep", "100"])).trim()));
    std::fs::remove_file(path).unwrap();
}
