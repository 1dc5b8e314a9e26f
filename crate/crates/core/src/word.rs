//! The ternary word **p**, fixed point of `h: 0 → 01, 1 → 21, 2 → 0`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::automata::Dfao;
use crate::numeration::{x_u64, P4Rep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {0} has no image under the morphism")]
    UnknownLetter(u8),
    #[error("morphism is not prolongable on seed {0}")]
    NotProlongable(u8),
    #[error("automaton disagrees with the morphic word at position {position}: {found} vs {expected}")]
    Mismatch { position: u64, found: u8, expected: u8 },
    #[error("automaton is not usable: {0}")]
    Configuration(String),
}

/// A letter-to-word substitution with a seed letter whose image starts with itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    rules: Vec<Vec<u8>>,
    seed: u8,
}

impl Morphism {
    pub fn new(rules: Vec<Vec<u8>>, seed: u8) -> Result<Self, WordError> {
        let image = rules.get(seed as usize).ok_or(WordError::UnknownLetter(seed))?;
        if image.len() < 2 || image[0] != seed {
            return Err(WordError::NotProlongable(seed));
        }
        if let Some(&bad) = rules.iter().flatten().find(|&&b| b as usize >= rules.len()) {
            return Err(WordError::UnknownLetter(bad));
        }
        Ok(Morphism { rules, seed })
    }

    /// `0 → 01, 1 → 21, 2 → 0` with seed `0`.
    pub fn p() -> Self {
        Morphism::new(vec![vec![0, 1], vec![2, 1], vec![0]], 0).expect("prolongable")
    }

    pub fn seed(&self) -> u8 {
        self.seed
    }

    pub fn image(&self, letter: u8) -> Result<&[u8], WordError> {
        self.rules
            .get(letter as usize)
            .map(Vec::as_slice)
            .ok_or(WordError::UnknownLetter(letter))
    }

    pub fn apply(&self, word: &[u8]) -> Result<Vec<u8>, WordError> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &a in word {
            out.extend_from_slice(self.image(a)?);
        }
        Ok(out)
    }

    /// Letter at position `n` (0-based) of the fixed point, by descending
    /// through the iterated images without materializing them.
    pub fn letter_at(&self, n: u64) -> u8 {
        let k = self.rules.len();
        let mut lengths: Vec<Vec<u128>> = vec![vec![1; k]];
        while lengths.last().unwrap()[self.seed as usize] <= n as u128 {
            let prev = lengths.last().unwrap();
            let next = self
                .rules
                .iter()
                .map(|img| img.iter().map(|&b| prev[b as usize]).fold(0u128, u128::saturating_add))
                .collect();
            lengths.push(next);
        }
        let mut letter = self.seed;
        let mut offset = n as u128;
        for level in (0..lengths.len() - 1).rev() {
            for &b in &self.rules[letter as usize] {
                let len = lengths[level][b as usize];
                if offset < len {
                    letter = b;
                    break;
                }
                offset -= len;
            }
        }
        letter
    }

    /// `h^n(letter)`.
    pub fn power(&self, letter: u8, n: u32) -> Result<Vec<u8>, WordError> {
        let mut w = vec![letter];
        for _ in 0..n {
            w = self.apply(&w)?;
        }
        Ok(w)
    }
}

/// A growing prefix of the fixed point. The buffer always equals `h^level(seed)`.
#[derive(Clone, Debug)]
pub struct WordBuffer {
    morphism: Morphism,
    letters: Vec<u8>,
    level: u32,
}

impl WordBuffer {
    pub fn new(morphism: Morphism) -> Self {
        let letters = vec![morphism.seed()];
        WordBuffer {
            morphism,
            letters,
            level: 0,
        }
    }

    /// Grows by whole morphism applications until at least `len` letters exist.
    pub fn ensure(&mut self, len: usize) {
        while self.letters.len() < len {
            self.letters = self.morphism.apply(&self.letters).expect("rules are closed");
            self.level += 1;
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.letters
    }

    pub fn prefix(&mut self, len: usize) -> &[u8] {
        self.ensure(len);
        &self.letters[..len]
    }
}

/// First `len` letters of **p**.
pub fn fixed_point_prefix(len: usize) -> Vec<u8> {
    let mut buf = WordBuffer::new(Morphism::p());
    buf.ensure(len);
    buf.letters.truncate(len);
    buf.letters
}

pub fn apply_morphism(word: &[u8]) -> Result<Vec<u8>, WordError> {
    Morphism::p().apply(word)
}

pub fn letters_to_string(word: &[u8]) -> String {
    word.iter().map(|&d| char::from(b'0' + d)).collect()
}

pub fn parse_letters(text: &str) -> Result<Vec<u8>, WordError> {
    text.bytes()
        .map(|b| match b {
            b'0'..=b'2' => Ok(b - b'0'),
            other => Err(WordError::UnknownLetter(other)),
        })
        .collect()
}

/// Letter counts `(|w|_0, |w|_1, |w|_2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Parikh(pub [u64; 3]);

impl Parikh {
    pub fn of(word: &[u8]) -> Self {
        let mut c = [0u64; 3];
        for &a in word {
            c[a as usize] += 1;
        }
        Parikh(c)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Parikh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

pub fn parikh(word: &[u8]) -> Parikh {
    Parikh::of(word)
}

/// `(X_{n-1}, X_{n-1} + X_{n-3}, X_{n-2} + X_{n-4})`, the letter counts of `h^n(0)`.
pub fn parikh_power_formula(n: u32) -> Parikh {
    assert!(n >= 3, "the formula needs X_{{n-4}} with n - 4 >= -1");
    let x = |i: i64| x_u64(i).expect("index in range");
    let n = n as i64;
    Parikh([x(n - 1), x(n - 1) + x(n - 3), x(n - 2) + x(n - 4)])
}

/// Compares the letter counts of `h^n(0)` with the closed form.
pub fn parikh_power_check(n: u32) -> bool {
    let word = Morphism::p().power(0, n).expect("closed rules");
    Parikh::of(&word) == parikh_power_formula(n)
}

/// Random access to **p** through an automaton reading P4 representations.
#[derive(Clone, Debug)]
pub struct AutomaticWord {
    dfao: Dfao,
    validated_below: u64,
}

impl AutomaticWord {
    /// Accepts the automaton only after it matches the morphic word on every
    /// position below `check_below`.
    pub fn new(dfao: Dfao, check_below: u64) -> Result<Self, WordError> {
        if dfao.alphabet().len() != 2 || dfao.alphabet().symbols().iter().any(|s| s.arity() != 1) {
            return Err(WordError::Configuration("expected a binary single-track automaton".into()));
        }
        if check_below == 0 {
            return Err(WordError::Configuration("no validation bound given".into()));
        }
        let word = AutomaticWord {
            dfao,
            validated_below: check_below,
        };
        let prefix = fixed_point_prefix(check_below as usize);
        if let Some(position) = (0..check_below).find(|&n| word.at(n) != prefix[n as usize]) {
            return Err(WordError::Mismatch {
                position,
                found: word.at(position),
                expected: prefix[position as usize],
            });
        }
        Ok(word)
    }

    pub fn validated_below(&self) -> u64 {
        self.validated_below
    }

    pub fn dfao(&self) -> &Dfao {
        &self.dfao
    }

    /// `p[n]`, 0-based.
    pub fn at(&self, n: u64) -> u8 {
        let rep = P4Rep::encode_u64(n);
        let word: Vec<usize> = rep.digits().iter().map(|&d| d as usize).collect();
        self.dfao.run_indices(&word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_examples() {
        assert_eq!(letters_to_string(&fixed_point_prefix(24)), "012102101021012101021012");
        assert_eq!(fixed_point_prefix(1), vec![0]);
        assert!(fixed_point_prefix(0).is_empty());
    }

    #[test]
    fn power_lengths_follow_recurrence() {
        let h = Morphism::p();
        for n in 1..=20u32 {
            assert_eq!(h.power(0, n).unwrap().len() as u64, x_u64(n as i64 + 1).unwrap());
        }
    }

    #[test]
    fn buffer_levels() {
        let mut buf = WordBuffer::new(Morphism::p());
        buf.ensure(100);
        assert_eq!(buf.as_slice(), Morphism::p().power(0, buf.level()).unwrap().as_slice());
        let snapshot = buf.as_slice().to_vec();
        buf.ensure(1000);
        assert_eq!(&buf.as_slice()[..snapshot.len()], snapshot.as_slice());
        assert_eq!(buf.prefix(5), &[0, 1, 2, 1, 0]);
    }

    #[test]
    fn morphism_examples() {
        assert_eq!(apply_morphism(&[0, 0]).unwrap(), vec![0, 1, 0, 1]);
        assert_eq!(letters_to_string(&apply_morphism(&parse_letters("2121").unwrap()).unwrap()), "021021");
        assert!(apply_morphism(&[]).unwrap().is_empty());
        assert_eq!(apply_morphism(&[3]), Err(WordError::UnknownLetter(3)));
    }

    #[test]
    fn morphism_validation() {
        assert_eq!(Morphism::new(vec![vec![1, 0], vec![0]], 0), Err(WordError::NotProlongable(0)));
        assert_eq!(Morphism::new(vec![vec![0, 2]], 0), Err(WordError::UnknownLetter(2)));
    }

    #[test]
    fn parikh_examples() {
        let h4 = Morphism::p().power(0, 4).unwrap();
        assert_eq!(letters_to_string(&h4), "012102101021");
        assert_eq!(parikh(&h4), Parikh([4, 5, 3]));
        assert_eq!(parikh_power_formula(4), Parikh([4, 5, 3]));
        assert_eq!(parikh(&[]), Parikh([0, 0, 0]));
        for n in 3..=25 {
            assert!(parikh_power_check(n), "n = {n}");
        }
    }

    #[test]
    fn random_access_matches_buffer() {
        let h = Morphism::p();
        let p = fixed_point_prefix(50_000);
        for (n, &a) in p.iter().enumerate() {
            assert_eq!(h.letter_at(n as u64), a, "n = {n}");
        }
    }

    #[test]
    fn image_of_prefix_is_prefix() {
        let p = fixed_point_prefix(200_000);
        let img = apply_morphism(&p[..100_000]).unwrap();
        assert_eq!(&img[..], &p[..img.len()]);
    }

    #[test]
    fn contains_02_but_not_20() {
        let p = fixed_point_prefix(100_000);
        assert!(p.windows(2).any(|w| w == [0, 2]));
        assert!(!p.windows(2).any(|w| w == [2, 0]));
    }
}
