//! Guess-and-verify synthesis of automata from black-box oracles.
//!
//! Prefixes are identified when the oracle agrees on every extension by a
//! suffix of length at most `k`. The quotient is a guess; [`validate`] tests
//! it against the oracle on exhaustive and random inputs.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::automata::{zip_binary_tracks, Alphabet, Dfa, Dfao, Transitions};
use crate::numeration::{decode_u64, is_valid, x_u64, P4Rep};
use crate::word::Morphism;

/// Output for inputs that are not padded-valid representations.
pub const INVALID_OUTPUT: u8 = 3;

/// A deterministic function from words over an alphabet to small output letters.
pub trait SequenceOracle {
    fn name(&self) -> &str;
    fn alphabet(&self) -> &Alphabet;
    fn query(&self, word: &[usize]) -> u8;
    /// The meaningful inputs whose decoded value is below `bound`, used for
    /// validation by value.
    fn value_cases(&self, bound: u64) -> Box<dyn Iterator<Item = Vec<usize>> + '_>;
    /// A random meaningful input, typically longer than the learning bound.
    fn random_case(&self, rng: &mut ChaCha8Rng) -> Vec<usize>;
    /// Suffix depth that separates all residual classes of this oracle.
    fn suffix_depth(&self) -> usize {
        LearnConfig::default().suffix_depth
    }
}

/// `X_1, X_2, …` up to the largest term that fits in a `u64`.
fn x_table() -> Vec<u64> {
    (1..).map_while(|i| x_u64(i)).collect()
}

/// Values of the `N` tracks of a word over `binary_tracks(N)`, reading each
/// track as a digit string whether or not it is a valid representation.
fn track_values<const N: usize>(word: &[usize], table: &[u64]) -> Option<[u64; N]> {
    let len = word.len();
    let mut values = [0u64; N];
    for (j, &s) in word.iter().enumerate() {
        for (t, v) in values.iter_mut().enumerate() {
            if (s >> (N - 1 - t)) & 1 == 1 {
                *v = v.checked_add(*table.get(len - j - 1)?)?;
            }
        }
    }
    Some(values)
}

fn random_value(rng: &mut ChaCha8Rng) -> u64 {
    let bits = rng.gen_range(8..40);
    rng.gen_range(0..1u64 << bits)
}

/// `p[decode(w)]` on padded-valid binary words, [`INVALID_OUTPUT`] elsewhere.
pub struct PWordOracle {
    alphabet: Alphabet,
    morphism: Morphism,
}

impl PWordOracle {
    pub fn new() -> Self {
        PWordOracle {
            alphabet: Alphabet::binary(),
            morphism: Morphism::p(),
        }
    }
}

impl Default for PWordOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl SequenceOracle for PWordOracle {
    fn name(&self) -> &str {
        "p-word"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn query(&self, word: &[usize]) -> u8 {
        let digits: Vec<u8> = word.iter().map(|&s| s as u8).collect();
        if !is_valid(&digits) {
            return INVALID_OUTPUT;
        }
        match decode_u64(&digits) {
            Ok(n) => self.morphism.letter_at(n),
            Err(_) => INVALID_OUTPUT,
        }
    }

    fn value_cases(&self, bound: u64) -> Box<dyn Iterator<Item = Vec<usize>> + '_> {
        Box::new((0..bound).map(|n| P4Rep::encode_u64(n).digits().iter().map(|&d| d as usize).collect()))
    }

    fn random_case(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let rep = P4Rep::encode_u64(random_value(rng));
        let pad = rng.gen_range(0..3);
        std::iter::repeat(0).take(pad).chain(rep.digits().iter().map(|&d| d as usize)).collect()
    }
}

/// Two-track relation `y = x + 1` on the values of the tracks.
///
/// Tracks are read as digit strings of any form; on valid representations
/// this is the successor relation. Validity is a separate automaton.
pub struct SuccessorOracle {
    alphabet: Alphabet,
    table: Vec<u64>,
}

impl SuccessorOracle {
    pub fn new() -> Self {
        SuccessorOracle {
            alphabet: Alphabet::binary_tracks(2),
            table: x_table(),
        }
    }

    pub fn pair(x: u64, y: u64) -> Vec<usize> {
        let (x, y) = (P4Rep::encode_u64(x), P4Rep::encode_u64(y));
        let width = x.len().max(y.len());
        zip_binary_tracks(&[x.digits(), y.digits()], width)
    }
}

impl Default for SuccessorOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl SequenceOracle for SuccessorOracle {
    fn name(&self) -> &str {
        "successor"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn query(&self, word: &[usize]) -> u8 {
        match track_values::<2>(word, &self.table) {
            Some([x, y]) => u8::from(x.checked_add(1) == Some(y)),
            None => 0,
        }
    }

    /// For each `x` below the bound: the true pair and two near misses.
    fn value_cases(&self, bound: u64) -> Box<dyn Iterator<Item = Vec<usize>> + '_> {
        Box::new((0..bound).flat_map(|x| {
            let mut cases = vec![Self::pair(x, x + 1), Self::pair(x, x), Self::pair(x, x + 2)];
            if x > 0 {
                cases.push(Self::pair(x, x - 1));
            }
            cases
        }))
    }

    fn random_case(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let x = random_value(rng);
        let y = if rng.gen_bool(0.5) { x + 1 } else { x + rng.gen_range(0..4) };
        Self::pair(x, y)
    }
}

/// Three-track relation `x + y = z` on the values of the tracks, read as
/// digit strings of any form. On valid representations this is addition.
pub struct AdderOracle {
    alphabet: Alphabet,
    table: Vec<u64>,
}

impl AdderOracle {
    /// Every pair of states of the exact adder is separated by a suffix of
    /// length at most 7, so shallower depths merge states.
    pub const SUFFIX_DEPTH: usize = 7;

    pub fn new() -> Self {
        AdderOracle {
            alphabet: Alphabet::binary_tracks(3),
            table: x_table(),
        }
    }

    pub fn triple(x: u64, y: u64, z: u64) -> Vec<usize> {
        let reps = [P4Rep::encode_u64(x), P4Rep::encode_u64(y), P4Rep::encode_u64(z)];
        let width = reps.iter().map(P4Rep::len).max().unwrap_or(0);
        zip_binary_tracks(&[reps[0].digits(), reps[1].digits(), reps[2].digits()], width)
    }
}

impl Default for AdderOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl SequenceOracle for AdderOracle {
    fn name(&self) -> &str {
        "adder"
    }

    fn suffix_depth(&self) -> usize {
        Self::SUFFIX_DEPTH
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn query(&self, word: &[usize]) -> u8 {
        match track_values::<3>(word, &self.table) {
            Some([x, y, z]) => u8::from(x.checked_add(y) == Some(z)),
            None => 0,
        }
    }

    /// Every `x, y` up to the bound (inclusive) with the true sum and the two
    /// neighbouring values.
    fn value_cases(&self, bound: u64) -> Box<dyn Iterator<Item = Vec<usize>> + '_> {
        Box::new((0..=bound).flat_map(move |x| {
            (0..=bound).flat_map(move |y| {
                let mut cases = vec![Self::triple(x, y, x + y), Self::triple(x, y, x + y + 1)];
                if x + y > 0 {
                    cases.push(Self::triple(x, y, x + y - 1));
                }
                cases
            })
        }))
    }

    fn random_case(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let (x, y) = (random_value(rng), random_value(rng));
        let z = if rng.gen_bool(0.5) { x + y } else { x + y + rng.gen_range(0..3) };
        Self::triple(x, y, z.saturating_sub(rng.gen_range(0..2)))
    }
}

/// The same output everywhere, over a given alphabet.
pub struct ConstantOracle {
    alphabet: Alphabet,
    value: u8,
}

impl ConstantOracle {
    pub fn new(alphabet: Alphabet, value: u8) -> Self {
        ConstantOracle { alphabet, value }
    }
}

impl SequenceOracle for ConstantOracle {
    fn name(&self) -> &str {
        "constant"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn query(&self, _word: &[usize]) -> u8 {
        self.value
    }

    fn value_cases(&self, _bound: u64) -> Box<dyn Iterator<Item = Vec<usize>> + '_> {
        Box::new(std::iter::empty())
    }

    fn random_case(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let len = rng.gen_range(0..30);
        (0..len).map(|_| rng.gen_range(0..self.alphabet.len())).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LearnError {
    #[error("suffix depth and prefix bound must be positive")]
    Parameters,
    #[error("more than {budget} residual classes; class of prefix {prefix} is new")]
    Budget { budget: usize, prefix: String },
    #[error("prefix {prefix} exceeds the prefix bound {bound} but opens a new residual class")]
    PrefixBound { bound: usize, prefix: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LearnConfig {
    pub suffix_depth: usize,
    pub prefix_bound: usize,
    pub state_budget: usize,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            suffix_depth: 5,
            prefix_bound: 20,
            state_budget: 500,
        }
    }
}

fn suffixes(symbols: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|s| (0..symbols).map(move |a| [s.as_slice(), &[a]].concat()))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// Four outputs per byte when every output fits in two bits.
fn pack(sig: Vec<u8>) -> Vec<u8> {
    if sig.iter().any(|&o| o > 3) {
        return sig;
    }
    let mut packed: Vec<u8> = sig
        .chunks(4)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &o)| acc | (o << (2 * i))))
        .collect();
    packed.push(0xff);
    packed
}

/// Breadth-first residual exploration. Each class keeps its shortest
/// representative; a class found only beyond the prefix bound is an error.
/// The returned automaton is minimized with canonical numbering.
pub fn learn_dfao(oracle: &dyn SequenceOracle, config: LearnConfig) -> Result<Dfao, LearnError> {
    if config.suffix_depth == 0 || config.prefix_bound == 0 {
        return Err(LearnError::Parameters);
    }
    let alphabet = oracle.alphabet().clone();
    let k = alphabet.len();
    let tests = suffixes(k, config.suffix_depth);
    let mut buf = Vec::new();
    let mut signature = |prefix: &[usize]| -> Vec<u8> {
        tests
            .iter()
            .map(|s| {
                buf.clear();
                buf.extend_from_slice(prefix);
                buf.extend_from_slice(s);
                oracle.query(&buf)
            })
            .collect()
    };

    let mut classes: HashMap<Vec<u8>, usize> = HashMap::new();
    let first = signature(&[]);
    let mut outputs = vec![first[0]];
    classes.insert(pack(first), 0);
    let mut reps: Vec<Vec<usize>> = vec![Vec::new()];
    let mut delta: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < reps.len() {
        for a in 0..k {
            let mut next = reps[i].clone();
            next.push(a);
            let sig = signature(&next);
            let output = sig[0];
            let sig = pack(sig);
            let target = match classes.get(&sig) {
                Some(&q) => q,
                None => {
                    let shown = alphabet.render_word(&next);
                    if next.len() > config.prefix_bound {
                        return Err(LearnError::PrefixBound {
                            bound: config.prefix_bound,
                            prefix: shown,
                        });
                    }
                    if reps.len() == config.state_budget {
                        return Err(LearnError::Budget {
                            budget: config.state_budget,
                            prefix: shown,
                        });
                    }
                    outputs.push(output);
                    classes.insert(sig, reps.len());
                    reps.push(next);
                    reps.len() - 1
                }
            };
            delta.push(target);
        }
        i += 1;
    }
    Ok(Dfao::new(Transitions::new(alphabet, 0, delta), outputs).minimize())
}

/// Acceptor for `Σ signs[t] · value(track t) = target`, built directly from
/// carries and independent of learning. Tracks are read as digit strings of
/// any form.
///
/// After reading a prefix with `m` digits left, the weighted sum of the prefix
/// digits equals `a·X_{m+1} + b·X_m + c·X_{m-1}` by the order-3 recurrence
/// (extended down to `X_{-1}`). Reading a column with signed digit sum `d`
/// maps `(a, b, c)` to `(2a + b + d, c - a, a)`, and the input is accepted
/// when `a + b + c = target` at the end. States with a coordinate beyond
/// `cap` in absolute value go to a sink; from `cap = 6` on the result no
/// longer depends on `cap` for the relations used here.
pub fn carry_relation(signs: &[i64], target: i64, cap: i64) -> Dfa {
    let tracks = signs.len();
    let alphabet = Alphabet::binary_tracks(tracks);
    let column = |s: usize| -> i64 {
        (0..tracks)
            .map(|t| ((s >> (tracks - 1 - t)) & 1) as i64 * signs[t])
            .sum()
    };
    let mut index: HashMap<Option<[i64; 3]>, usize> = HashMap::from([(Some([0, 0, 0]), 0)]);
    let mut states: Vec<Option<[i64; 3]>> = vec![Some([0, 0, 0])];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for s in 0..alphabet.len() {
            let next = states[i].and_then(|[a, b, c]| {
                let n = [2 * a + b + column(s), c - a, a];
                n.iter().all(|v| v.abs() <= cap).then_some(n)
            });
            let id = *index.entry(next).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            delta.push(id);
        }
        i += 1;
    }
    let accepting = states
        .iter()
        .map(|s| matches!(s, Some([a, b, c]) if a + b + c == target))
        .collect();
    Dfa::new(Transitions::new(alphabet, 0, delta), accepting).minimize()
}

/// `x + y = z` on three tracks.
pub fn carry_adder() -> Dfa {
    carry_relation(&[1, 1, -1], 0, 12)
}

/// `y = x + 1` on two tracks.
pub fn carry_successor() -> Dfa {
    carry_relation(&[1, -1], -1, 12)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: String,
    pub expected: u8,
    pub found: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub oracle: String,
    pub exhaustive_length: usize,
    pub value_bound: u64,
    pub random_trials: usize,
    pub checked: u64,
    pub mismatch_count: u64,
    /// The first few disagreements.
    pub mismatches: Vec<Mismatch>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationConfig {
    /// Every word up to this length, meaningful or not.
    pub exhaustive_length: usize,
    /// Every meaningful input with decoded value below this bound.
    pub value_bound: u64,
    pub random_trials: usize,
    pub seed: u64,
}

const KEPT_MISMATCHES: usize = 20;

pub fn validate(candidate: &Dfao, oracle: &dyn SequenceOracle, config: ValidationConfig) -> ValidationReport {
    let alphabet = oracle.alphabet();
    let mut report = ValidationReport {
        oracle: oracle.name().to_string(),
        exhaustive_length: config.exhaustive_length,
        value_bound: config.value_bound,
        random_trials: config.random_trials,
        ..Default::default()
    };
    if candidate.alphabet() != alphabet {
        report.mismatch_count = 1;
        report.mismatches.push(Mismatch {
            input: "alphabet".into(),
            expected: 0,
            found: 0,
        });
        return report;
    }
    let check = |word: &[usize], report: &mut ValidationReport| {
        report.checked += 1;
        let expected = oracle.query(word);
        let found = candidate.run_indices(word);
        if expected != found {
            report.mismatch_count += 1;
            if report.mismatches.len() < KEPT_MISMATCHES {
                report.mismatches.push(Mismatch {
                    input: alphabet.render_word(word),
                    expected,
                    found,
                });
            }
        }
    };

    let k = alphabet.len();
    let mut word: Vec<usize> = Vec::new();
    for len in 0..=config.exhaustive_length {
        word.clear();
        word.resize(len, 0);
        loop {
            check(&word, &mut report);
            // odometer increment
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                word[pos] += 1;
                if word[pos] < k {
                    break;
                }
                word[pos] = 0;
            }
            if word.iter().all(|&a| a == 0) {
                break;
            }
        }
    }
    for case in oracle.value_cases(config.value_bound) {
        check(&case, &mut report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_trials {
        let case = oracle.random_case(&mut rng);
        check(&case, &mut report);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::fixed_point_prefix;

    fn small_validation() -> ValidationConfig {
        ValidationConfig {
            exhaustive_length: 10,
            value_bound: 5_000,
            random_trials: 200,
            seed: 7,
        }
    }

    #[test]
    fn constant_oracle_gives_one_state() {
        let oracle = ConstantOracle::new(Alphabet::digits(3), 1);
        let d = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        assert_eq!(d.state_count(), 1);
        assert_eq!(d.output_of_state(0), 1);
    }

    #[test]
    fn oracles_on_examples() {
        let p = PWordOracle::new();
        assert_eq!(p.query(&[]), 0);
        assert_eq!(p.query(&[1, 0, 1]), 2); // p[5]
        assert_eq!(p.query(&[0, 1, 0, 1]), 2);
        assert_eq!(p.query(&[1, 1, 1]), INVALID_OUTPUT);
        let s = SuccessorOracle::new();
        assert_eq!(s.query(&SuccessorOracle::pair(6, 7)), 1);
        assert_eq!(s.query(&SuccessorOracle::pair(6, 8)), 0);
        let a = AdderOracle::new();
        assert_eq!(a.query(&AdderOracle::triple(5, 7, 12)), 1);
        assert_eq!(a.query(&AdderOracle::triple(3, 3, 7)), 0);
    }

    #[test]
    fn p_word_learns_and_validates() {
        let oracle = PWordOracle::new();
        let d = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        assert!(d.state_count() <= 32);
        let prefix = fixed_point_prefix(20_000);
        for (n, &a) in prefix.iter().enumerate() {
            let w: Vec<usize> = P4Rep::encode_u64(n as u64).digits().iter().map(|&b| b as usize).collect();
            assert_eq!(d.run_indices(&w), a);
        }
        assert!(validate(&d, &oracle, small_validation()).passed());
    }

    #[test]
    fn learning_is_deterministic() {
        let oracle = PWordOracle::new();
        let a = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        let b = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn successor_learns_and_validates() {
        let oracle = SuccessorOracle::new();
        let d = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        let report = validate(&d, &oracle, small_validation());
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn carry_adder_is_stable_and_adds() {
        let d = carry_adder();
        for cap in [6, 24] {
            assert!(d.equivalent(&carry_relation(&[1, 1, -1], 0, cap)).unwrap().holds());
            assert!(carry_successor().equivalent(&carry_relation(&[1, -1], -1, cap)).unwrap().holds());
        }
        assert_eq!(d.state_count(), 65);
        assert_eq!(d.trimmed_state_count(), 64);
        let oracle = AdderOracle::new();
        for x in 0..60u64 {
            for y in 0..60 {
                for z in [x + y, x + y + 1, (x + y).saturating_sub(1)] {
                    let w = AdderOracle::triple(x, y, z);
                    assert_eq!(d.accepts_indices(&w), oracle.query(&w) == 1);
                }
            }
        }
        // tracks need not be valid: "111" and "1000" both have value 7
        let w = zip_binary_tracks(&[&[1, 1, 1], &[0], &[1, 0, 0, 0]], 4);
        assert!(d.accepts_indices(&w));
    }

    #[test]
    #[ignore = "learns the adder from scratch; slow"]
    fn learned_adder_equals_carry_construction() {
        let oracle = AdderOracle::new();
        let config = LearnConfig { suffix_depth: oracle.suffix_depth(), ..LearnConfig::default() };
        let d = learn_dfao(&oracle, config).unwrap();
        let dfa = d.to_dfa(1);
        assert_eq!(dfa.minimize().trimmed_state_count(), 64);
        assert!(dfa.equivalent(&carry_adder()).unwrap().holds());
    }

    #[test]
    fn learned_successor_equals_carry_construction() {
        let oracle = SuccessorOracle::new();
        let d = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        assert!(d.to_dfa(1).minimize().equivalent(&carry_successor()).unwrap().holds());
    }

    #[test]
    fn corrupted_transition_is_reported() {
        let oracle = PWordOracle::new();
        let d = learn_dfao(&oracle, LearnConfig::default()).unwrap();
        let q = d.transitions().walk(&[1, 0]);
        let wrong = (d.transitions().step(q, 0) + 1) % d.state_count();
        let bad = d.with_transition(q, 0, wrong);
        let report = validate(&bad, &oracle, small_validation());
        assert!(!report.passed());
        assert!(!report.mismatches.is_empty());
    }

    #[test]
    fn budget_and_prefix_errors() {
        let oracle = PWordOracle::new();
        let tight = LearnConfig {
            state_budget: 3,
            ..LearnConfig::default()
        };
        assert!(matches!(learn_dfao(&oracle, tight), Err(LearnError::Budget { budget: 3, .. })));
        let short = LearnConfig {
            prefix_bound: 1,
            ..LearnConfig::default()
        };
        assert!(matches!(learn_dfao(&oracle, short), Err(LearnError::PrefixBound { bound: 1, .. })));
        let zero = LearnConfig {
            suffix_depth: 0,
            ..LearnConfig::default()
        };
        assert_eq!(learn_dfao(&oracle, zero), Err(LearnError::Parameters));
    }
}
