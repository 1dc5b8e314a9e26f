//! Restricted regular expressions over single-digit symbols.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! union   := concat ('|' concat)*
//! concat  := postfix*                 // empty concat denotes ε
//! postfix := atom ('*' | '+')*
//! atom    := digit | 'ε' | '(' union ')' | '{' union (',' union)* '}'
//! ```
//!
//! `{a,b}` is shorthand for the finite union `(a|b)`.

use std::collections::{BTreeSet, HashMap};

use super::{Alphabet, AutomatonError, Dfa, Symbol, Transitions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Epsilon,
    Literal(u8),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o)
    }

    fn error(&self, message: impl Into<String>) -> AutomatonError {
        AutomatonError::Regex {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AutomatonError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn union(&mut self) -> Result<Regex, AutomatonError> {
        let mut alts = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            alts.push(self.concat()?);
        }
        Ok(if alts.len() == 1 {
            alts.pop().unwrap()
        } else {
            Regex::Union(alts)
        })
    }

    fn concat(&mut self) -> Result<Regex, AutomatonError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if matches!(c, '|' | ')' | '}' | ',') {
                break;
            }
            parts.push(self.postfix()?);
        }
        Ok(match parts.len() {
            0 => Regex::Epsilon,
            1 => parts.pop().unwrap(),
            _ => Regex::Concat(parts),
        })
    }

    fn postfix(&mut self) -> Result<Regex, AutomatonError> {
        let mut atom = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    atom = Regex::Star(Box::new(atom));
                }
                Some('+') => {
                    self.pos += 1;
                    atom = Regex::Plus(Box::new(atom));
                }
                _ => return Ok(atom),
            }
        }
    }

    fn atom(&mut self) -> Result<Regex, AutomatonError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.union()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('{') => {
                self.pos += 1;
                let mut alts = vec![self.union()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    alts.push(self.union()?);
                }
                self.expect('}')?;
                Ok(Regex::Union(alts))
            }
            Some('ε') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some(c) if c.is_ascii_digit() => {
                self.pos += 1;
                Ok(Regex::Literal(c as u8 - b'0'))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

impl Regex {
    pub fn parse(src: &str) -> Result<Regex, AutomatonError> {
        let mut parser = Parser::new(src);
        let re = parser.union()?;
        if parser.peek().is_some() {
            return Err(parser.error("trailing input"));
        }
        Ok(re)
    }
}

/// Thompson NFA: states with epsilon edges and at most one labelled edge each.
#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    edge: Vec<Option<(usize, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edge.push(None);
        self.eps.len() - 1
    }

    /// Returns (start, end) of the fragment.
    fn build(&mut self, re: &Regex, alphabet: &Alphabet) -> Result<(usize, usize), AutomatonError> {
        Ok(match re {
            Regex::Epsilon => {
                let s = self.state();
                (s, s)
            }
            Regex::Literal(d) => {
                let a = alphabet
                    .index_of(&Symbol::letter(*d))
                    .ok_or_else(|| AutomatonError::UnknownSymbol(d.to_string()))?;
                let s = self.state();
                let e = self.state();
                self.edge[s] = Some((a, e));
                (s, e)
            }
            Regex::Concat(parts) => {
                let (start, mut end) = self.build(&parts[0], alphabet)?;
                for p in &parts[1..] {
                    let (s, e) = self.build(p, alphabet)?;
                    self.eps[end].push(s);
                    end = e;
                }
                (start, end)
            }
            Regex::Union(alts) => {
                let s = self.state();
                let e = self.state();
                for alt in alts {
                    let (a, b) = self.build(alt, alphabet)?;
                    self.eps[s].push(a);
                    self.eps[b].push(e);
                }
                (s, e)
            }
            Regex::Star(inner) | Regex::Plus(inner) => {
                let s = self.state();
                let e = self.state();
                let (a, b) = self.build(inner, alphabet)?;
                self.eps[s].push(a);
                self.eps[b].push(a);
                self.eps[b].push(e);
                if matches!(re, Regex::Star(_)) {
                    self.eps[s].push(e);
                }
                (s, e)
            }
        })
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
}

/// Minimal complete acceptor for the language of `expr`.
pub fn regex_to_dfa(expr: &str, alphabet: &Alphabet) -> Result<Dfa, AutomatonError> {
    let re = Regex::parse(expr)?;
    let mut nfa = Nfa::default();
    let (start, end) = nfa.build(&re, alphabet)?;
    let k = alphabet.len();

    let mut init = BTreeSet::from([start]);
    nfa.closure(&mut init);
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(init.clone(), 0)]);
    let mut sets = vec![init];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        for a in 0..k {
            let mut next: BTreeSet<usize> = sets[i]
                .iter()
                .filter_map(|&q| match nfa.edge[q] {
                    Some((sym, t)) if sym == a => Some(t),
                    _ => None,
                })
                .collect();
            nfa.closure(&mut next);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    sets.push(next.clone());
                    index.insert(next, sets.len() - 1);
                    sets.len() - 1
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accepting = sets.iter().map(|s| s.contains(&end)).collect();
    Ok(Dfa::new(Transitions::new(alphabet.clone(), 0, delta), accepting).minimize())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Backtracking matcher on the syntax tree: the set of end positions reachable
    /// after matching `re` from position `i`.
    fn ends(re: &Regex, w: &[u8], i: usize) -> BTreeSet<usize> {
        match re {
            Regex::Epsilon => BTreeSet::from([i]),
            Regex::Literal(d) => {
                if w.get(i) == Some(d) {
                    BTreeSet::from([i + 1])
                } else {
                    BTreeSet::new()
                }
            }
            Regex::Concat(parts) => parts.iter().fold(BTreeSet::from([i]), |acc, p| {
                acc.iter().flat_map(|&j| ends(p, w, j)).collect()
            }),
            Regex::Union(alts) => alts.iter().flat_map(|a| ends(a, w, i)).collect(),
            Regex::Star(inner) | Regex::Plus(inner) => {
                let mut seen = BTreeSet::new();
                if matches!(re, Regex::Star(_)) {
                    seen.insert(i);
                }
                let mut frontier = BTreeSet::from([i]);
                loop {
                    let fresh: BTreeSet<usize> = frontier
                        .iter()
                        .flat_map(|&j| ends(inner, w, j))
                        .filter(|j| !seen.contains(j))
                        .collect();
                    if fresh.is_empty() {
                        break seen;
                    }
                    seen.extend(fresh.iter().copied());
                    frontier = fresh;
                }
            }
        }
    }

    fn naive_match(expr: &str, w: &[u8]) -> bool {
        ends(&Regex::parse(expr).unwrap(), w, 0).contains(&w.len())
    }

    #[test]
    fn examples() {
        let b = Alphabet::binary();
        let d = regex_to_dfa("(10)+(ε|0)", &b).unwrap();
        assert!(d.accepts_str("10100").unwrap());
        assert!(!d.accepts_str("1000").unwrap());
        let d = regex_to_dfa("101 0*", &b).unwrap();
        for w in ["101", "1010", "10100"] {
            assert!(d.accepts_str(w).unwrap());
        }
        assert!(!d.accepts_str("10").unwrap());
        let d = regex_to_dfa("1", &b).unwrap();
        assert!(d.accepts_str("1").unwrap());
        assert!(!d.accepts_str("").unwrap());
        assert!(!d.accepts_str("11").unwrap());
    }

    #[test]
    fn parse_errors() {
        let b = Alphabet::binary();
        assert!(matches!(regex_to_dfa("(10", &b), Err(AutomatonError::Regex { .. })));
        assert!(matches!(regex_to_dfa("1)", &b), Err(AutomatonError::Regex { .. })));
        assert!(matches!(regex_to_dfa("1a", &b), Err(AutomatonError::Regex { .. })));
        assert!(matches!(regex_to_dfa("*", &b), Err(AutomatonError::Regex { .. })));
        assert!(matches!(regex_to_dfa("12", &b), Err(AutomatonError::UnknownSymbol(_))));
    }

    #[test]
    fn agrees_with_naive_matcher() {
        let exprs = [
            "{1, 11, 110} | (10)+{ε,0} | (1000)+{0, 01, 011, 0110}",
            "1010* | 10000*",
            "(0|1)*11(0|1)*",
            "(1(01)*)+0*",
            "ε",
            "((10)*1)*",
        ];
        let b = Alphabet::binary();
        for expr in exprs {
            let dfa = regex_to_dfa(expr, &b).unwrap();
            for len in 0..=12usize {
                for bits in 0u32..(1 << len) {
                    let w: Vec<u8> = (0..len).rev().map(|k| ((bits >> k) & 1) as u8).collect();
                    let idx: Vec<usize> = w.iter().map(|&d| d as usize).collect();
                    assert_eq!(dfa.accepts_indices(&idx), naive_match(expr, &w), "{expr} on {w:?}");
                }
            }
        }
    }
}
