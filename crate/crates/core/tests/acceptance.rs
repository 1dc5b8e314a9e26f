//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured values, written to stderr directly so it shows without `--nocapture`.

use std::io::Write;

use p4::acceptance::{find, run_criterion, AcceptanceOptions};
use p4::assets::AssetStore;

fn check(id: &str) {
    let criterion = find(id).expect("known criterion");
    let options = AcceptanceOptions {
        store: AssetStore::from_env(),
        relearn: false,
    };
    let outcome = run_criterion(criterion, &options).expect("assets available");
    let budget = if outcome.within_budget() { "" } else { " [over time target]" };
    let _ = writeln!(std::io::stderr(), "acceptance: {outcome}{budget}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn c01_numeration() {
    check("numeration");
}

#[test]
fn c02_complexity() {
    check("complexity");
}

#[test]
fn c03_linrep() {
    check("linrep");
}

#[test]
fn c04_exponent() {
    check("exponent");
}

#[test]
fn c05_balance() {
    check("balance");
}

#[test]
fn c06_abelian() {
    check("abelian");
}

#[test]
fn c07_palindromes() {
    check("palindromes");
}

#[test]
fn c08_bispecial() {
    check("bispecial");
}

#[test]
fn c09_recurrence() {
    check("recurrence");
}

#[test]
fn c10_constants() {
    check("constants");
}

#[test]
fn c11_overlaps() {
    check("overlaps");
}

#[test]
fn c12_characterization() {
    check("characterization");
}

#[test]
fn c13_learned() {
    check("learned");
}
