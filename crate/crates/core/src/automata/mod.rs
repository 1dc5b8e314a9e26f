//! Complete deterministic automata over small symbol alphabets.
//!
//! Symbols are digit tuples; single-track automata use 1-tuples. Multi-track
//! relations read their tracks in parallel, most significant digit first, with
//! shorter tracks padded on the left by zeros.
//!
//! Every automaton is kept complete. Minimization renumbers states in BFS
//! order from the initial state (symbols visited in alphabet order), so two
//! minimal automata for the same language are equal as values.

mod factors;
mod regex;
mod text;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub use factors::forbidden_factor_dfa;
pub use regex::{regex_to_dfa, Regex};
pub use text::{parse_document, Document, Machine};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("symbol {0} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("empty pattern: the automaton would reject every word")]
    EmptyPattern,
    #[error("regex parse error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },
    #[error("automaton format error on line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A digit tuple. Single-track symbols have one component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Vec<u8>);

impl Symbol {
    pub fn new(components: Vec<u8>) -> Self {
        Symbol(components)
    }

    pub fn letter(d: u8) -> Self {
        Symbol(vec![d])
    }

    pub fn components(&self) -> &[u8] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Symbol {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|part| part.trim().parse::<u8>())
            .collect::<Result<Vec<_>, _>>()
            .map(Symbol)
            .map_err(|_| AutomatonError::UnknownSymbol(s.to_string()))
    }
}

/// An ordered set of symbols. Transition tables are indexed by position in this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(mut symbols: Vec<Symbol>) -> Self {
        symbols.sort();
        symbols.dedup();
        Alphabet { symbols }
    }

    /// Single-track symbols `0, 1, …, n-1`.
    pub fn digits(n: u8) -> Self {
        Alphabet::new((0..n).map(Symbol::letter).collect())
    }

    pub fn binary() -> Self {
        Alphabet::digits(2)
    }

    /// All binary tuples with `tracks` components, in lexicographic order, so the
    /// index of `(b_1, …, b_k)` is the binary number `b_1 … b_k`.
    pub fn binary_tracks(tracks: usize) -> Self {
        let symbols = (0..1usize << tracks)
            .map(|bits| Symbol((0..tracks).rev().map(|k| ((bits >> k) & 1) as u8).collect()))
            .collect();
        Alphabet::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &Symbol {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &Symbol) -> Option<usize> {
        self.symbols.binary_search(symbol).ok()
    }

    pub fn indices(&self, word: &[Symbol]) -> Result<Vec<usize>, AutomatonError> {
        word.iter()
            .map(|s| self.index_of(s).ok_or_else(|| AutomatonError::UnknownSymbol(s.to_string())))
            .collect()
    }

    /// Parses a string of single-character digits such as `"10101"`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, AutomatonError> {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .and_then(|d| self.index_of(&Symbol::letter(d as u8)))
                    .ok_or_else(|| AutomatonError::UnknownSymbol(c.to_string()))
            })
            .collect()
    }

    pub fn render_word(&self, word: &[usize]) -> String {
        if self.symbols.iter().all(|s| s.arity() == 1) {
            word.iter().map(|&i| self.symbols[i].to_string()).collect()
        } else {
            word.iter()
                .map(|&i| format!("[{}]", self.symbols[i]))
                .collect::<Vec<_>>()
                .join("")
        }
    }
}

/// Reads tracks in parallel, msd first, padding shorter tracks with leading zeros.
pub fn zip_tracks(tracks: &[&[u8]]) -> Vec<Symbol> {
    let width = tracks.iter().map(|t| t.len()).max().unwrap_or(0);
    (0..width)
        .map(|pos| {
            Symbol(
                tracks
                    .iter()
                    .map(|t| {
                        let pad = width - t.len();
                        if pos < pad {
                            0
                        } else {
                            t[pos - pad]
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Symbol indices in [`Alphabet::binary_tracks`] for padded binary tracks.
pub fn zip_binary_tracks(tracks: &[&[u8]], width: usize) -> Vec<usize> {
    (0..width)
        .map(|pos| {
            tracks.iter().fold(0usize, |acc, t| {
                let pad = width - t.len();
                let bit = if pos < pad { 0 } else { t[pos - pad] as usize };
                (acc << 1) | bit
            })
        })
        .collect()
}

/// The transition structure shared by acceptors and automata with output.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transitions {
    alphabet: Alphabet,
    initial: usize,
    // delta[state * |alphabet| + symbol]
    delta: Vec<usize>,
}

impl Transitions {
    pub fn new(alphabet: Alphabet, initial: usize, delta: Vec<usize>) -> Self {
        let k = alphabet.len();
        assert!(k > 0, "empty alphabet");
        assert_eq!(delta.len() % k, 0, "transition table is not total");
        let n = delta.len() / k;
        assert!(initial < n, "initial state out of range");
        assert!(delta.iter().all(|&q| q < n), "transition target out of range");
        Transitions {
            alphabet,
            initial,
            delta,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.delta.len() / self.alphabet.len()
    }

    #[inline]
    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.delta[state * self.alphabet.len() + symbol]
    }

    /// The state reached from the initial state. Symbol indices must be in range.
    pub fn walk(&self, word: &[usize]) -> usize {
        word.iter().fold(self.initial, |q, &a| self.step(q, a))
    }

    fn checked_walk(&self, word: &[usize]) -> Result<usize, AutomatonError> {
        let k = self.alphabet.len();
        if let Some(&bad) = word.iter().find(|&&a| a >= k) {
            return Err(AutomatonError::UnknownSymbol(format!("#{bad}")));
        }
        Ok(self.walk(word))
    }

    fn set_transition(&mut self, state: usize, symbol: usize, target: usize) {
        let k = self.alphabet.len();
        assert!(target < self.state_count());
        self.delta[state * k + symbol] = target;
    }

    /// Coarsest partition compatible with `colors` that is stable under transitions,
    /// followed by BFS renumbering of the reachable classes.
    fn minimize_colored(&self, colors: &[u32]) -> (Transitions, Vec<u32>) {
        let n = self.state_count();
        let k = self.alphabet.len();
        let mut class: Vec<usize> = {
            let mut ids = HashMap::new();
            colors
                .iter()
                .map(|c| {
                    let next = ids.len();
                    *ids.entry(*c).or_insert(next)
                })
                .collect()
        };
        let mut class_count = class.iter().copied().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::with_capacity(class_count * 2);
            let mut refined = Vec::with_capacity(n);
            for q in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend((0..k).map(|a| class[self.step(q, a)]));
                let next = ids.len();
                refined.push(*ids.entry(sig).or_insert(next));
            }
            let refined_count = ids.len();
            class = refined;
            if refined_count == class_count {
                break;
            }
            class_count = refined_count;
        }
        // BFS over classes from the initial class
        let mut order: Vec<Option<usize>> = vec![None; class_count];
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        order[class[self.initial]] = Some(0);
        rep.push(self.initial);
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                let t = self.step(q, a);
                if order[class[t]].is_none() {
                    order[class[t]] = Some(rep.len());
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut delta = Vec::with_capacity(rep.len() * k);
        let mut out_colors = Vec::with_capacity(rep.len());
        for &q in &rep {
            for a in 0..k {
                delta.push(order[class[self.step(q, a)]].expect("reachable"));
            }
            out_colors.push(colors[q]);
        }
        (
            Transitions {
                alphabet: self.alphabet.clone(),
                initial: 0,
                delta,
            },
            out_colors,
        )
    }

    /// States reachable from the initial state.
    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for a in 0..self.alphabet.len() {
                let t = self.step(q, a);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// A complete deterministic acceptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    transitions: Transitions,
    accepting: Vec<bool>,
}

/// A complete deterministic automaton with one output letter per state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfao {
    transitions: Transitions,
    output: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    AndNot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A shortest word accepted by exactly one of the two automata.
    Counterexample(Vec<usize>),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

impl Dfa {
    pub fn new(transitions: Transitions, accepting: Vec<bool>) -> Self {
        assert_eq!(accepting.len(), transitions.state_count());
        Dfa {
            transitions,
            accepting,
        }
    }

    /// Accepts every word over `alphabet`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(Transitions::new(alphabet, 0, vec![0; k]), vec![true])
    }

    /// Accepts nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(Transitions::new(alphabet, 0, vec![0; k]), vec![false])
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.transitions.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.transitions.state_count()
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        let idx = self.alphabet().indices(word)?;
        Ok(self.accepts_indices(&idx))
    }

    pub fn try_accepts_indices(&self, word: &[usize]) -> Result<bool, AutomatonError> {
        Ok(self.accepting[self.transitions.checked_walk(word)?])
    }

    /// Symbol indices must be below the alphabet size.
    #[inline]
    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        self.accepting[self.transitions.walk(word)]
    }

    /// Convenience for single-character digit symbols.
    pub fn accepts_str(&self, text: &str) -> Result<bool, AutomatonError> {
        let word = self.alphabet().parse_word(text)?;
        Ok(self.accepts_indices(&word))
    }

    pub fn complement(&self) -> Dfa {
        Dfa::new(
            self.transitions.clone(),
            self.accepting.iter().map(|a| !a).collect(),
        )
    }

    pub fn minimize(&self) -> Dfa {
        let colors: Vec<u32> = self.accepting.iter().map(|&a| a as u32).collect();
        let (transitions, colors) = self.transitions.minimize_colored(&colors);
        Dfa::new(transitions, colors.into_iter().map(|c| c == 1).collect())
    }

    /// States that are reachable and from which some accepting state is reachable.
    pub fn trimmed_state_count(&self) -> usize {
        let reach = self.transitions.reachable();
        let n = self.state_count();
        let k = self.alphabet().len();
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                reverse[self.transitions.step(q, a)].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &reverse[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        (0..n).filter(|&q| reach[q] && live[q]).count()
    }

    pub fn combine(&self, other: &Dfa, op: BoolOp) -> Result<Dfa, AutomatonError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let k = self.alphabet().len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.transitions.initial, other.transitions.initial)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let t = (self.transitions.step(p, a), other.transitions.step(q, a));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                delta.push(id);
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| {
                let (x, y) = (self.accepting[p], other.accepting[q]);
                match op {
                    BoolOp::And => x && y,
                    BoolOp::Or => x || y,
                    BoolOp::AndNot => x && !y,
                }
            })
            .collect();
        Ok(Dfa::new(
            Transitions::new(self.alphabet().clone(), 0, delta),
            accepting,
        ))
    }

    /// Decides language equality by BFS over the product, so a reported
    /// counterexample is of minimum length.
    pub fn equivalent(&self, other: &Dfa) -> Result<Equivalence, AutomatonError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let k = self.alphabet().len();
        let start = (self.transitions.initial, other.transitions.initial);
        let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(pair) = queue.pop_front() {
            if self.accepting[pair.0] != other.accepting[pair.1] {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some(Some((prev, a))) = parent.get(&cur) {
                    word.push(*a);
                    cur = *prev;
                }
                word.reverse();
                return Ok(Equivalence::Counterexample(word));
            }
            for a in 0..k {
                let t = (self.transitions.step(pair.0, a), other.transitions.step(pair.1, a));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(t) {
                    e.insert(Some((pair, a)));
                    queue.push_back(t);
                }
            }
        }
        Ok(Equivalence::Equivalent)
    }

    /// Treats acceptance as output letter 1 and rejection as 0.
    pub fn to_dfao(&self) -> Dfao {
        Dfao::new(
            self.transitions.clone(),
            self.accepting.iter().map(|&a| a as u8).collect(),
        )
    }

    /// Redirects one transition; used to build faulty automata in tests.
    pub fn with_transition(&self, state: usize, symbol: usize, target: usize) -> Dfa {
        let mut out = self.clone();
        out.transitions.set_transition(state, symbol, target);
        out
    }
}

impl Dfao {
    pub fn new(transitions: Transitions, output: Vec<u8>) -> Self {
        assert_eq!(output.len(), transitions.state_count());
        Dfao {
            transitions,
            output,
        }
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.transitions.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.transitions.state_count()
    }

    pub fn output_of_state(&self, state: usize) -> u8 {
        self.output[state]
    }

    pub fn outputs(&self) -> &[u8] {
        &self.output
    }

    pub fn run(&self, word: &[Symbol]) -> Result<u8, AutomatonError> {
        let idx = self.alphabet().indices(word)?;
        Ok(self.run_indices(&idx))
    }

    pub fn try_run_indices(&self, word: &[usize]) -> Result<u8, AutomatonError> {
        Ok(self.output[self.transitions.checked_walk(word)?])
    }

    #[inline]
    pub fn run_indices(&self, word: &[usize]) -> u8 {
        self.output[self.transitions.walk(word)]
    }

    pub fn run_str(&self, text: &str) -> Result<u8, AutomatonError> {
        let word = self.alphabet().parse_word(text)?;
        Ok(self.run_indices(&word))
    }

    pub fn minimize(&self) -> Dfao {
        let colors: Vec<u32> = self.output.iter().map(|&o| o as u32).collect();
        let (transitions, colors) = self.transitions.minimize_colored(&colors);
        Dfao::new(transitions, colors.into_iter().map(|c| c as u8).collect())
    }

    /// The acceptor whose accepting states are those with output `letter`.
    pub fn to_dfa(&self, letter: u8) -> Dfa {
        Dfa::new(
            self.transitions.clone(),
            self.output.iter().map(|&o| o == letter).collect(),
        )
    }

    pub fn with_transition(&self, state: usize, symbol: usize, target: usize) -> Dfao {
        let mut out = self.clone();
        out.transitions.set_transition(state, symbol, target);
        out
    }
}

/// Graphviz rendering. Accepting states are drawn as double circles; for
/// automata with output, each state is labelled `q/letter`.
pub fn to_dot(machine: &Machine) -> String {
    let (transitions, label): (&Transitions, Box<dyn Fn(usize) -> (String, bool)>) = match machine {
        Machine::Dfa(d) => (d.transitions(), Box::new(|q| (q.to_string(), d.is_accepting(q)))),
        Machine::Dfao(d) => (
            d.transitions(),
            Box::new(|q| (format!("{q}/{}", d.output_of_state(q)), false)),
        ),
    };
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..transitions.state_count() {
        let (text, accepting) = label(q);
        let shape = if accepting { "doublecircle" } else { "circle" };
        out.push_str(&format!("  q{q} [label=\"{text}\", shape={shape}];\n"));
    }
    out.push_str(&format!("  start -> q{};\n", transitions.initial()));
    let k = transitions.alphabet().len();
    for q in 0..transitions.state_count() {
        // group parallel edges
        let mut edges: Vec<(usize, Vec<String>)> = Vec::new();
        for a in 0..k {
            let t = transitions.step(q, a);
            let sym = transitions.alphabet().symbol(a).to_string();
            match edges.iter_mut().find(|(target, _)| *target == t) {
                Some((_, labels)) => labels.push(sym),
                None => edges.push((t, vec![sym])),
            }
        }
        for (t, labels) in edges {
            out.push_str(&format!("  q{q} -> q{t} [label=\"{}\"];\n", labels.join(" ")));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..k {
                    let mut v: Vec<usize> = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn validity() -> Dfa {
        forbidden_factor_dfa(&Alphabet::binary(), &["111", "1101"]).unwrap()
    }

    #[test]
    fn run_validity_examples() {
        let dfa = validity();
        assert!(dfa.accepts_str("10101").unwrap());
        assert!(!dfa.accepts_str("1101").unwrap());
        assert!(dfa.accepts_str("").unwrap());
        assert!(matches!(dfa.accepts_str("102"), Err(AutomatonError::UnknownSymbol(_))));
        assert!(dfa.try_accepts_indices(&[0, 5]).is_err());
    }

    #[test]
    fn dfao_on_empty_word_outputs_initial() {
        let t = Transitions::new(Alphabet::binary(), 1, vec![0, 1, 1, 0]);
        let dfao = Dfao::new(t, vec![7, 3]);
        assert_eq!(dfao.run(&[]).unwrap(), 3);
        assert_eq!(dfao.run_str("1").unwrap(), 7);
    }

    #[test]
    fn minimize_validity() {
        let dfa = validity();
        let min = dfa.minimize();
        assert!(min.state_count() <= 6);
        // states: after ε/0, after 1, after 11, after 110, dead
        assert_eq!(min.state_count(), 5);
        assert_eq!(min.trimmed_state_count(), 4);
        assert_eq!(min.minimize(), min);
        let words = all_words(2, 12);
        for w in &words {
            assert_eq!(min.accepts_indices(w), dfa.accepts_indices(w));
        }
    }

    #[test]
    fn product_with_universal_minimizes_back() {
        let dfa = validity().minimize();
        let prod = dfa
            .combine(&Dfa::universal(Alphabet::binary()), BoolOp::And)
            .unwrap();
        assert_eq!(prod.minimize(), dfa);
    }

    #[test]
    fn combine_and_equivalence() {
        let a = forbidden_factor_dfa(&Alphabet::binary(), &["00"]).unwrap();
        let b = forbidden_factor_dfa(&Alphabet::binary(), &["11"]).unwrap();
        let both = a.combine(&b, BoolOp::And).unwrap();
        assert!(both.accepts_str("0101").unwrap());
        assert!(!both.accepts_str("100").unwrap());

        let v = validity();
        assert!(v.equivalent(&v).unwrap().holds());
        let only111 = forbidden_factor_dfa(&Alphabet::binary(), &["111"]).unwrap();
        match only111.equivalent(&v).unwrap() {
            Equivalence::Counterexample(w) => {
                assert_eq!(Alphabet::binary().render_word(&w), "1101");
                assert_ne!(only111.accepts_indices(&w), v.accepts_indices(&w));
            }
            Equivalence::Equivalent => panic!("languages differ"),
        }
        let ternary = Dfa::universal(Alphabet::digits(3));
        assert_eq!(v.combine(&ternary, BoolOp::Or), Err(AutomatonError::AlphabetMismatch));
        assert_eq!(v.equivalent(&ternary), Err(AutomatonError::AlphabetMismatch));
    }

    #[test]
    fn combine_ops_pointwise() {
        let a = forbidden_factor_dfa(&Alphabet::binary(), &["010"]).unwrap();
        let b = regex_to_dfa("(0|1)*1", &Alphabet::binary()).unwrap();
        let ops = [BoolOp::And, BoolOp::Or, BoolOp::AndNot];
        for op in ops {
            let c = a.combine(&b, op).unwrap();
            for w in all_words(2, 9) {
                let (x, y) = (a.accepts_indices(&w), b.accepts_indices(&w));
                let expected = match op {
                    BoolOp::And => x && y,
                    BoolOp::Or => x || y,
                    BoolOp::AndNot => x && !y,
                };
                assert_eq!(c.accepts_indices(&w), expected);
            }
        }
    }

    #[test]
    fn equivalence_is_symmetric_with_discriminating_witness() {
        let pats: [&[&str]; 4] = [&["11"], &["111"], &["101", "11"], &["0"]];
        for p in pats {
            for q in pats {
                let a = forbidden_factor_dfa(&Alphabet::binary(), p).unwrap();
                let b = forbidden_factor_dfa(&Alphabet::binary(), q).unwrap();
                let ab = a.equivalent(&b).unwrap();
                let ba = b.equivalent(&a).unwrap();
                assert_eq!(ab.holds(), ba.holds());
                if let Equivalence::Counterexample(w) = ab {
                    assert_ne!(a.accepts_indices(&w), b.accepts_indices(&w));
                }
            }
        }
    }

    #[test]
    fn track_zipping() {
        let z = zip_tracks(&[&[1, 0, 1], &[1]]);
        assert_eq!(z, vec![Symbol::new(vec![1, 0]), Symbol::new(vec![0, 0]), Symbol::new(vec![1, 1])]);
        let alpha = Alphabet::binary_tracks(2);
        let idx = zip_binary_tracks(&[&[1, 0, 1], &[1]], 3);
        assert_eq!(alpha.indices(&z).unwrap(), idx);
    }

    #[test]
    fn dot_export_mentions_every_state() {
        let m = Machine::Dfa(validity().minimize());
        let dot = to_dot(&m);
        for q in 0..5 {
            assert!(dot.contains(&format!("q{q} [")));
        }
        assert!(dot.contains("doublecircle"));
    }
}
