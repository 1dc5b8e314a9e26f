//! Line-oriented automaton files.
//!
//! ```text
//! # free-form header comments
//! alphabet: 0 1                 (tuple symbols are written a,b,c)
//! states: 5
//! initial: 0
//! accepting: 0 1 2              (acceptors only)
//! output: 0 2                   (automata with output: one line per state)
//! 0 0 -> 1                      (one line per transition)
//! ```
//!
//! Writing a parsed document reproduces it byte for byte when it was itself
//! produced by [`Document::render`].

use std::fmt::Write as _;

use super::{Alphabet, AutomatonError, Dfa, Dfao, Symbol, Transitions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Dfa(Dfa),
    Dfao(Dfao),
}

impl Machine {
    pub fn transitions(&self) -> &Transitions {
        match self {
            Machine::Dfa(d) => d.transitions(),
            Machine::Dfao(d) => d.transitions(),
        }
    }
}

/// An automaton plus its header comments (without the leading `# `).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub comments: Vec<String>,
    pub machine: Machine,
}

impl Document {
    pub fn new(machine: Machine) -> Self {
        Document {
            comments: Vec::new(),
            machine,
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comments.push(comment.into());
        self
    }

    /// Value of a `key: value` header comment.
    pub fn header(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once(':')?;
            (k.trim() == key).then_some(v.trim())
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let t = self.machine.transitions();
        let alphabet: Vec<String> = t.alphabet().symbols().iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "alphabet: {}", alphabet.join(" "));
        let _ = writeln!(out, "states: {}", t.state_count());
        let _ = writeln!(out, "initial: {}", t.initial());
        match &self.machine {
            Machine::Dfa(d) => {
                let acc: Vec<String> = (0..d.state_count())
                    .filter(|&q| d.is_accepting(q))
                    .map(|q| q.to_string())
                    .collect();
                if acc.is_empty() {
                    out.push_str("accepting:\n");
                } else {
                    let _ = writeln!(out, "accepting: {}", acc.join(" "));
                }
            }
            Machine::Dfao(d) => {
                for q in 0..d.state_count() {
                    let _ = writeln!(out, "output: {q} {}", d.output_of_state(q));
                }
            }
        }
        for q in 0..t.state_count() {
            for (a, sym) in alphabet.iter().enumerate() {
                let _ = writeln!(out, "{q} {sym} -> {}", t.step(q, a));
            }
        }
        out
    }
}

fn err(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Format {
        line,
        message: message.into(),
    }
}

fn parse_usize(line: usize, text: &str) -> Result<usize, AutomatonError> {
    text.trim()
        .parse()
        .map_err(|_| err(line, format!("expected a non-negative integer, found {text:?}")))
}

pub fn parse_document(text: &str) -> Result<Document, AutomatonError> {
    let mut comments = Vec::new();
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut accepting: Option<Vec<usize>> = None;
    let mut outputs: Vec<(usize, u8)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            let symbols: Vec<Symbol> = rest
                .split_whitespace()
                .map(|s| s.parse())
                .collect::<Result<_, _>>()
                .map_err(|e: AutomatonError| err(lineno, e.to_string()))?;
            if symbols.is_empty() {
                return Err(err(lineno, "empty alphabet"));
            }
            alphabet = Some(Alphabet::new(symbols));
        } else if let Some(rest) = line.strip_prefix("states:") {
            states = Some(parse_usize(lineno, rest)?);
        } else if let Some(rest) = line.strip_prefix("initial:") {
            initial = Some(parse_usize(lineno, rest)?);
        } else if let Some(rest) = line.strip_prefix("accepting:") {
            accepting = Some(
                rest.split_whitespace()
                    .map(|s| parse_usize(lineno, s))
                    .collect::<Result<_, _>>()?,
            );
        } else if let Some(rest) = line.strip_prefix("output:") {
            let mut parts = rest.split_whitespace();
            let (Some(q), Some(o), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(lineno, "expected 'output: <state> <letter>'"));
            };
            let o: u8 = o.parse().map_err(|_| err(lineno, "output letter must be a small integer"))?;
            outputs.push((parse_usize(lineno, q)?, o));
        } else {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err(lineno, "expected '<state> <symbol> -> <state>'"))?;
            let mut parts = lhs.split_whitespace();
            let (Some(q), Some(sym), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(lineno, "expected '<state> <symbol> -> <state>'"));
            };
            let alpha = alphabet
                .as_ref()
                .ok_or_else(|| err(lineno, "transition before alphabet line"))?;
            let sym: Symbol = sym.parse().map_err(|e: AutomatonError| err(lineno, e.to_string()))?;
            let a = alpha
                .index_of(&sym)
                .ok_or_else(|| err(lineno, format!("symbol {sym} not in alphabet")))?;
            edges.push((lineno, parse_usize(lineno, q)?, a, parse_usize(lineno, rhs)?));
        }
    }

    let alphabet = alphabet.ok_or_else(|| err(0, "missing alphabet line"))?;
    let n = states.ok_or_else(|| err(0, "missing states line"))?;
    let initial = initial.ok_or_else(|| err(0, "missing initial line"))?;
    if n == 0 || initial >= n {
        return Err(err(0, "initial state out of range"));
    }
    let k = alphabet.len();
    let mut delta: Vec<Option<usize>> = vec![None; n * k];
    for (lineno, q, a, t) in edges {
        if q >= n || t >= n {
            return Err(err(lineno, "state out of range"));
        }
        if delta[q * k + a].replace(t).is_some() {
            return Err(err(lineno, "duplicate transition"));
        }
    }
    let delta: Vec<usize> = delta
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| err(0, format!("missing transition from state {} on symbol {}", i / k, alphabet.symbol(i % k)))))
        .collect::<Result<_, _>>()?;
    let transitions = Transitions::new(alphabet, initial, delta);

    let machine = match (accepting, outputs.is_empty()) {
        (Some(acc), true) => {
            let mut flags = vec![false; n];
            for q in acc {
                if q >= n {
                    return Err(err(0, "accepting state out of range"));
                }
                flags[q] = true;
            }
            Machine::Dfa(Dfa::new(transitions, flags))
        }
        (None, false) => {
            let mut out: Vec<Option<u8>> = vec![None; n];
            for (q, o) in outputs {
                if q >= n {
                    return Err(err(0, "output state out of range"));
                }
                if out[q].replace(o).is_some() {
                    return Err(err(0, format!("duplicate output for state {q}")));
                }
            }
            let out = out
                .into_iter()
                .enumerate()
                .map(|(q, o)| o.ok_or_else(|| err(0, format!("missing output for state {q}"))))
                .collect::<Result<_, _>>()?;
            Machine::Dfao(Dfao::new(transitions, out))
        }
        (Some(_), false) => return Err(err(0, "both accepting and output lines present")),
        (None, true) => return Err(err(0, "neither accepting nor output lines present")),
    };
    Ok(Document { comments, machine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{forbidden_factor_dfa, zip_binary_tracks};

    #[test]
    fn round_trip_is_bit_exact() {
        let dfa = forbidden_factor_dfa(&Alphabet::binary(), &["111", "1101"]).unwrap().minimize();
        let doc = Document::new(Machine::Dfa(dfa)).with_comment("name: valid");
        let text = doc.render();
        let parsed = parse_document(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.render(), text);
        assert_eq!(parsed.header("name"), Some("valid"));
    }

    #[test]
    fn tuple_symbols_and_outputs() {
        let alpha = Alphabet::binary_tracks(2);
        let t = Transitions::new(alpha, 0, vec![0, 1, 1, 0, 1, 1, 1, 1]);
        let doc = Document::new(Machine::Dfao(Dfao::new(t, vec![2, 0])));
        let text = doc.render();
        assert!(text.contains("alphabet: 0,0 0,1 1,0 1,1\n"));
        assert!(text.contains("output: 1 0\n"));
        assert!(text.contains("0 0,1 -> 1\n"));
        let parsed = parse_document(&text).unwrap();
        assert_eq!(parsed.render(), text);
        let Machine::Dfao(d) = parsed.machine else { panic!() };
        assert_eq!(d.run_indices(&zip_binary_tracks(&[&[1], &[0]], 1)), 0);
        assert_eq!(d.run_indices(&zip_binary_tracks(&[&[0], &[0]], 1)), 2);
    }

    #[test]
    fn rejects_incomplete_and_malformed_files() {
        let missing = "alphabet: 0 1\nstates: 1\ninitial: 0\naccepting: 0\n0 0 -> 0\n";
        assert!(matches!(parse_document(missing), Err(AutomatonError::Format { .. })));
        let bad = "alphabet: 0 1\nstates: 1\ninitial: 0\naccepting: 0\n0 2 -> 0\n";
        assert!(matches!(parse_document(bad), Err(AutomatonError::Format { line: 5, .. })));
        let both = "alphabet: 0\nstates: 1\ninitial: 0\naccepting:\noutput: 0 1\n0 0 -> 0\n";
        assert!(parse_document(both).is_err());
    }
}
