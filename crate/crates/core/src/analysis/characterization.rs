//! **p** as the word whose factors are those of cube-free ternary words
//! avoiding a finite set `F`: an exhaustive search over that language and
//! the string identities behind the desubstitution argument.

use std::collections::BTreeSet;

use serde::Serialize;

use super::factors::factor_set;
use super::repetitions::find_cube;
use super::AnalysisError;
use crate::automata::{forbidden_factor_dfa, Alphabet, Dfa};
use crate::word::{apply_morphism, fixed_point_prefix, letters_to_string, parse_letters};

/// The forbidden factors, in the order of the items `(a)`–`(j)` that exclude
/// them from a preimage.
pub const FORBIDDEN: [&str; 10] = [
    "00",
    "11",
    "22",
    "20",
    "212",
    "0101",
    "02102",
    "121012",
    "01021010",
    "21021012102",
];

fn avoid_dfa() -> Dfa {
    forbidden_factor_dfa(&Alphabet::digits(3), &FORBIDDEN).expect("patterns are ternary")
}

fn ends_with_cube(word: &[u8]) -> bool {
    let n = word.len();
    (1..=n / 3).any(|p| (n - 3 * p..n - p).all(|t| word[t] == word[t + p]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationReport {
    pub max_len: usize,
    pub interior_len: usize,
    /// Words of length `max_len` in the language.
    pub words: usize,
    /// Nodes visited by the search.
    pub nodes: u64,
    pub interior_factors: BTreeSet<String>,
    pub p_factors: BTreeSet<String>,
    /// Interior factors that are not factors of **p**.
    pub foreign: BTreeSet<String>,
    /// Factors of **p** that never appear as an interior factor.
    pub unreached: BTreeSet<String>,
    pub p_prefix_len: usize,
    pub p_prefix_avoids_f: bool,
    pub p_prefix_cube_free: bool,
}

impl ExplorationReport {
    /// Interior factors are exactly the factors of **p** and **p** is in the language.
    pub fn passed(&self) -> bool {
        self.foreign.is_empty() && self.unreached.is_empty() && self.p_prefix_avoids_f && self.p_prefix_cube_free
    }
}

/// Enumerates every cube-free word of length `max_len` avoiding [`FORBIDDEN`]
/// and collects their central factors of length `interior_len`.
pub fn explore_language(max_len: usize, interior_len: usize) -> Result<ExplorationReport, AnalysisError> {
    if interior_len == 0 || interior_len > max_len {
        return Err(AnalysisError::Domain(format!(
            "interior length {interior_len} must lie in 1..={max_len}"
        )));
    }
    let dfa = avoid_dfa();
    let trans = dfa.transitions();
    let offset = (max_len - interior_len) / 2;
    let mut interior = BTreeSet::new();
    let mut words = 0;
    let mut nodes = 0u64;
    let mut word = Vec::with_capacity(max_len);
    let mut states = vec![trans.initial()];
    // Explicit stack of (depth, next letter to try).
    let mut next = vec![0u8];
    while let Some(letter) = next.last_mut() {
        if *letter == 3 {
            next.pop();
            states.pop();
            word.pop();
            continue;
        }
        let a = *letter;
        *letter += 1;
        let state = trans.step(*states.last().unwrap(), a as usize);
        if !dfa.is_accepting(state) {
            continue;
        }
        word.push(a);
        if ends_with_cube(&word) {
            word.pop();
            continue;
        }
        nodes += 1;
        if word.len() == max_len {
            words += 1;
            interior.insert(letters_to_string(&word[offset..offset + interior_len]));
            word.pop();
            continue;
        }
        states.push(state);
        next.push(0);
    }

    let p_factors: BTreeSet<String> = factor_set(interior_len)?.iter().map(|f| letters_to_string(f)).collect();
    let prefix = fixed_point_prefix(10_000);
    let indices: Vec<usize> = prefix.iter().map(|&a| a as usize).collect();
    Ok(ExplorationReport {
        max_len,
        interior_len,
        words,
        nodes,
        foreign: interior.difference(&p_factors).cloned().collect(),
        unreached: p_factors.difference(&interior).cloned().collect(),
        interior_factors: interior,
        p_factors,
        p_prefix_len: prefix.len(),
        p_prefix_avoids_f: dfa.accepts_indices(&indices),
        p_prefix_cube_free: find_cube(&prefix).is_none(),
    })
}

/// One verified string computation of the desubstitution argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub item: char,
    pub claim: String,
    pub holds: bool,
}

fn h(word: &str) -> String {
    letters_to_string(&apply_morphism(&parse_letters(word).expect("ternary")).expect("closed"))
}

fn item_word(item: char) -> &'static str {
    FORBIDDEN[(item as u8 - b'a') as usize]
}

/// Why one extension of a word is forced.
#[derive(Clone, Copy)]
enum Reason {
    Item(char),
    Cube(&'static str),
}

impl Reason {
    fn excludes(self, word: &str) -> bool {
        match self {
            Reason::Item(i) => word.contains(item_word(i)),
            Reason::Cube(base) => word.contains(&base.repeat(3)),
        }
    }

    fn describe(self) -> String {
        match self {
            Reason::Item(i) => format!("({i})"),
            Reason::Cube(base) => format!("({base})^3"),
        }
    }
}

/// `next` adds one letter to `prev`, and every other letter in that place
/// is excluded by one of `reasons`.
fn forced_step(item: char, prev: &str, next: &str, reasons: &[Reason]) -> IdentityCheck {
    let reasons_text: Vec<String> = reasons.iter().map(|r| r.describe()).collect();
    let claim = format!("{prev} extends only to {next} by {}", reasons_text.join(", "));
    fn others(added: &str) -> impl Iterator<Item = &'static str> + '_ {
        ["0", "1", "2"].into_iter().filter(move |b| *b != added)
    }
    let alternatives: Option<Vec<String>> = if next.len() != prev.len() + 1 {
        None
    } else if next.ends_with(prev) {
        Some(others(&next[..1]).map(|b| format!("{b}{prev}")).collect())
    } else if next.starts_with(prev) {
        Some(others(&next[prev.len()..]).map(|b| format!("{prev}{b}")).collect())
    } else {
        None
    };
    let holds = alternatives.is_some_and(|alts| alts.iter().all(|w| reasons.iter().any(|r| r.excludes(w))));
    IdentityCheck { item, claim, holds }
}

fn image_contains(item: char, source: &str, image: &str, target: &str) -> IdentityCheck {
    IdentityCheck {
        item,
        claim: format!("h({source}) = {image} contains {target}"),
        holds: h(source) == image && image.contains(target),
    }
}

fn image_equals(item: char, source: &str, image: &str) -> IdentityCheck {
    IdentityCheck {
        item,
        claim: format!("h({source}) = {image}"),
        holds: h(source) == image,
    }
}

fn chain(item: char, words: &[&str], reasons: &[&[Reason]]) -> Vec<IdentityCheck> {
    let mut out = vec![IdentityCheck {
        item,
        claim: format!("chain starts at {}", item_word(item)),
        holds: words[0] == item_word(item),
    }];
    for (pair, r) in words.windows(2).zip(reasons) {
        out.push(forced_step(item, pair[0], pair[1], r));
    }
    out
}

/// Every string computation of the argument, checked.
pub fn proof_identity_table() -> Vec<IdentityCheck> {
    use Reason::{Cube, Item};
    let mut rows = vec![
        image_contains('a', "00", "0101", item_word('f')),
        image_contains('b', "11", "2121", item_word('e')),
        image_contains('c', "22", "00", item_word('a')),
        image_contains('d', "20", "001", item_word('a')),
    ];
    rows.extend(chain('e', &["212", "2121"], &[&[Item('c'), Item('d')]]));
    rows.push(image_contains('e', "2121", "021021", item_word('g')));
    rows.push(image_contains('f', "0101", "01210121", item_word('h')));
    rows.push(image_contains('g', "02102", "01021010", item_word('i')));
    rows.extend(chain('h', &["121012", "1210121"], &[&[Item('c'), Item('d')]]));
    rows.push(image_contains('h', "1210121", "210210121021", item_word('j')));
    rows.extend(chain(
        'i',
        &[
            "01021010",
            "010210102",
            "0102101021",
            "01021010210",
            "010210102101",
            "1010210102101",
            "21010210102101",
            "210102101021012",
            "1210102101021012",
        ],
        &[
            &[Item('a'), Item('f')],
            &[Item('c'), Item('d')],
            &[Item('b'), Item('e')],
            &[Item('a'), Item('g')],
            &[Item('a'), Item('d')],
            &[Item('f'), Item('b')],
            &[Item('b'), Cube("21010")],
            &[Item('c'), Cube("02101")],
        ],
    ));
    rows.push(image_equals('i', "1210102101021012", "2102101210102101210102101210"));
    rows.push(IdentityCheck {
        item: 'i',
        claim: "2102101210102101210102101210 = 2(102101210)^3".into(),
        holds: "2102101210102101210102101210" == format!("2{}", "102101210".repeat(3)),
    });
    rows.extend(chain(
        'j',
        &[
            "21021012102",
            "121021012102",
            "0121021012102",
            "10121021012102",
            "210121021012102",
            "0210121021012102",
            "10210121021012102",
            "102101210210121021",
            "1021012102101210210",
            "10210121021012102101",
            "102101210210121021010",
        ],
        &[
            &[Item('g'), Item('c')],
            &[Item('b'), Item('e')],
            &[Item('a'), Item('d')],
            &[Item('f'), Item('b')],
            &[Item('h'), Item('c')],
            &[Item('a'), Item('d')],
            &[Item('c'), Item('d')],
            &[Item('b'), Item('e')],
            &[Item('a'), Item('g')],
            &[Item('b'), Cube("1021012")],
        ],
    ));
    rows.push(image_equals(
        'j',
        "102101210210121021010",
        "2101021012102101021012102101021012101",
    ));
    rows.push(IdentityCheck {
        item: 'j',
        claim: "2101021012102101021012102101021012101 = (210102101210)^3 1".into(),
        holds: "2101021012102101021012102101021012101" == format!("{}1", "210102101210".repeat(3)),
    });
    rows
}

/// The identity table, or a violation naming the first failing row.
pub fn proof_identities() -> Result<Vec<IdentityCheck>, AnalysisError> {
    let rows = proof_identity_table();
    match rows.iter().find(|r| !r.holds) {
        Some(bad) => Err(AnalysisError::Violation(format!("({}) {}", bad.item, bad.claim))),
        None => Ok(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold() {
        let rows = proof_identities().unwrap();
        let items: BTreeSet<char> = rows.iter().map(|r| r.item).collect();
        assert_eq!(items, ('a'..='j').collect());
        assert_eq!(h("00"), "0101");
        assert_eq!(h("1210102101021012"), format!("2{}", "102101210".repeat(3)));
        assert_eq!(h("102101210210121021010"), format!("{}1", "210102101210".repeat(3)));
    }

    #[test]
    fn wrong_reason_is_rejected() {
        let step = forced_step('e', "212", "2121", &[Reason::Item('c')]);
        assert!(!step.holds);
        let step = forced_step('e', "212", "2120", &[Reason::Item('c'), Reason::Item('d')]);
        assert!(!step.holds);
        let step = forced_step('e', "212", "21212", &[Reason::Item('c')]);
        assert!(!step.holds);
    }

    #[test]
    fn pruning_and_prefix() {
        let dfa = avoid_dfa();
        assert!(!dfa.accepts_str("0120").unwrap());
        assert!(dfa.accepts_str("012102101021").unwrap());
        assert!(ends_with_cube(&[1, 0, 1, 0, 1, 0]));
        assert!(!ends_with_cube(&[1, 0, 1, 0, 1]));
    }

    #[test]
    fn small_exploration() {
        let r = explore_language(24, 8).unwrap();
        assert!(r.p_prefix_avoids_f && r.p_prefix_cube_free);
        assert!(r.foreign.is_empty(), "{:?}", r.foreign);
        assert!(r.words > 0);
        assert!(explore_language(10, 11).is_err());
    }
}
