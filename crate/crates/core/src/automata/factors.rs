use std::collections::VecDeque;

use super::{Alphabet, AutomatonError, Dfa, Transitions};

/// Acceptor for the words over `alphabet` that contain none of `patterns` as a factor.
///
/// Builds the pattern trie with failure links, marks every node whose suffix
/// chain reaches a pattern end as dead, and collapses dead nodes into one sink.
/// Patterns are written as strings of single-digit symbols.
pub fn forbidden_factor_dfa<S: AsRef<str>>(
    alphabet: &Alphabet,
    patterns: &[S],
) -> Result<Dfa, AutomatonError> {
    let k = alphabet.len();
    let words: Vec<Vec<usize>> = patterns
        .iter()
        .map(|p| alphabet.parse_word(p.as_ref()))
        .collect::<Result<_, _>>()?;
    if words.iter().any(|w| w.is_empty()) {
        return Err(AutomatonError::EmptyPattern);
    }

    // trie: goto[node][symbol], None where absent
    let mut goto: Vec<Vec<Option<usize>>> = vec![vec![None; k]];
    let mut terminal = vec![false];
    for w in &words {
        let mut node = 0;
        for &a in w {
            node = match goto[node][a] {
                Some(next) => next,
                None => {
                    goto.push(vec![None; k]);
                    terminal.push(false);
                    let id = goto.len() - 1;
                    goto[node][a] = Some(id);
                    id
                }
            };
        }
        terminal[node] = true;
    }

    let n = goto.len();
    let mut fail = vec![0usize; n];
    let mut delta = vec![0usize; n * k];
    let mut queue = VecDeque::new();
    for a in 0..k {
        match goto[0][a] {
            Some(child) => {
                fail[child] = 0;
                delta[a] = child;
                queue.push_back(child);
            }
            None => delta[a] = 0,
        }
    }
    while let Some(node) = queue.pop_front() {
        terminal[node] = terminal[node] || terminal[fail[node]];
        for a in 0..k {
            match goto[node][a] {
                Some(child) => {
                    fail[child] = delta[fail[node] * k + a];
                    delta[node * k + a] = child;
                    queue.push_back(child);
                }
                None => delta[node * k + a] = delta[fail[node] * k + a],
            }
        }
    }

    // renumber: live nodes keep their order, all dead nodes become one sink
    let mut id = vec![0usize; n];
    let mut live = 0;
    for q in 0..n {
        if !terminal[q] {
            id[q] = live;
            live += 1;
        }
    }
    let sink = live;
    for q in 0..n {
        if terminal[q] {
            id[q] = sink;
        }
    }
    let has_sink = terminal.iter().any(|&t| t);
    let total = if has_sink { live + 1 } else { live };
    let mut out = vec![0usize; total * k];
    for q in 0..n {
        if terminal[q] {
            continue;
        }
        for a in 0..k {
            out[id[q] * k + a] = id[delta[q * k + a]];
        }
    }
    if has_sink {
        for a in 0..k {
            out[sink * k + a] = sink;
        }
    }
    let accepting = (0..total).map(|q| q != sink || !has_sink).collect();
    Ok(Dfa::new(Transitions::new(alphabet.clone(), 0, out), accepting))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(k: u8, len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..k).map(move |d| format!("{w}{d}")))
                .collect();
        }
        out
    }

    #[test]
    fn validity_language() {
        let dfa = forbidden_factor_dfa(&Alphabet::binary(), &["111", "1101"]).unwrap();
        assert!(dfa.accepts_str("10100").unwrap());
        assert!(!dfa.accepts_str("01110").unwrap());
    }

    #[test]
    fn characterization_set_rejects_212() {
        let f = [
            "00", "11", "22", "20", "212", "0101", "02102", "121012", "01021010", "21021012102",
        ];
        let dfa = forbidden_factor_dfa(&Alphabet::digits(3), &f).unwrap();
        assert!(!dfa.accepts_str("0121210").unwrap());
        assert!(!dfa.accepts_str("212").unwrap());
        assert!(dfa.accepts_str("0121021010").unwrap());
    }

    #[test]
    fn no_patterns_is_universal() {
        let none: [&str; 0] = [];
        let dfa = forbidden_factor_dfa(&Alphabet::binary(), &none).unwrap();
        assert_eq!(dfa.minimize().state_count(), 1);
        assert!(dfa.accepts_str("0110111").unwrap());
    }

    #[test]
    fn empty_pattern_is_rejected() {
        assert_eq!(
            forbidden_factor_dfa(&Alphabet::binary(), &["1", ""]),
            Err(AutomatonError::EmptyPattern)
        );
    }

    #[test]
    fn matches_naive_substring_search() {
        let cases: [(u8, &[&str]); 4] = [
            (2, &["111", "1101"]),
            (2, &["0", "11"]),
            (3, &["00", "11", "22", "20", "212", "0101"]),
            (3, &["12", "2121", "0"]),
        ];
        for (k, pats) in cases {
            let dfa = forbidden_factor_dfa(&Alphabet::digits(k), pats).unwrap();
            let max = if k == 2 { 10 } else { 7 };
            for len in 0..=max {
                for w in words(k, len) {
                    let naive = !pats.iter().any(|p| w.contains(p));
                    assert_eq!(dfa.accepts_str(&w).unwrap(), naive, "{w} vs {pats:?}");
                }
            }
        }
    }
}
