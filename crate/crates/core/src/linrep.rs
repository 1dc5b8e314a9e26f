//! Linear representations `(v, ζ, w)` over exact rationals.
//!
//! A representation of rank `r` maps a digit string `e_t … e_1` (msd first)
//! to `v · ζ(e_t) · … · ζ(e_1) · w`. The empty string maps to `v · w`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinRepError {
    #[error("linear representation format error on line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("digit {0} has no matrix")]
    UnknownDigit(u8),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

type Matrix = Vec<Vec<Rational>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinRep {
    v: Vec<Rational>,
    zeta: Vec<Matrix>,
    w: Vec<Rational>,
}

/// Outcome of comparing two representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    Equal,
    /// A shortest digit string on which the two differ.
    Differ(Vec<u8>),
}

impl Equality {
    pub fn holds(&self) -> bool {
        matches!(self, Equality::Equal)
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Row vector times matrix, skipping zero entries.
fn row_times(x: &[Rational], m: &Matrix) -> Vec<Rational> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Rational::zero(); cols];
    for (xi, row) in x.iter().zip(m) {
        if xi.is_zero() {
            continue;
        }
        for (o, mij) in out.iter_mut().zip(row) {
            if !mij.is_zero() {
                *o += xi * mij;
            }
        }
    }
    out
}

fn transpose(m: &Matrix, rows: usize, cols: usize) -> Matrix {
    (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect()
}

/// Incrementally built basis in reduced row echelon form, remembering how each
/// echelon row combines the original vectors so coordinates can be recovered.
struct Basis {
    dim: usize,
    vectors: Vec<Vec<Rational>>,
    // echelon rows, their pivot columns, and their coefficients over `vectors`
    echelon: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
}

impl Basis {
    fn new(dim: usize) -> Self {
        Basis {
            dim,
            vectors: Vec::new(),
            echelon: Vec::new(),
        }
    }

    /// Reduces `x` against the echelon rows; returns the residue and the
    /// combination of basis vectors that was subtracted.
    fn reduce(&self, x: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut residue = x.to_vec();
        let mut coeffs = vec![Rational::zero(); self.vectors.len()];
        for (pivot, row, comb) in &self.echelon {
            if residue[*pivot].is_zero() {
                continue;
            }
            let f = residue[*pivot].clone() / &row[*pivot];
            for (r, e) in residue.iter_mut().zip(row) {
                if !e.is_zero() {
                    *r -= &f * e;
                }
            }
            for (c, e) in coeffs.iter_mut().zip(comb) {
                if !e.is_zero() {
                    *c += &f * e;
                }
            }
        }
        (residue, coeffs)
    }

    /// Adds `x` if independent. Returns whether it was added.
    fn insert(&mut self, x: Vec<Rational>) -> bool {
        let (residue, coeffs) = self.reduce(&x);
        let Some(pivot) = residue.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        // residue = x - Σ coeffs_i b_i, so in terms of basis vectors including x:
        let mut comb: Vec<Rational> = coeffs.into_iter().map(|c| -c).collect();
        comb.push(Rational::one());
        for (_, _, c) in self.echelon.iter_mut() {
            c.push(Rational::zero());
        }
        self.vectors.push(x);
        self.echelon.push((pivot, residue, comb));
        true
    }

    /// Coordinates of `x` over the basis vectors, if `x` lies in their span.
    fn coordinates(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let (residue, coeffs) = self.reduce(x);
        residue.iter().all(|e| e.is_zero()).then_some(coeffs)
    }

    fn len(&self) -> usize {
        self.vectors.len()
    }
}

impl LinRep {
    pub fn new(v: Vec<Rational>, zeta: Vec<Matrix>, w: Vec<Rational>) -> Result<Self, LinRepError> {
        let r = v.len();
        if w.len() != r {
            return Err(LinRepError::Dimension(format!("v has {r} entries, w has {}", w.len())));
        }
        for (d, m) in zeta.iter().enumerate() {
            if m.len() != r || m.iter().any(|row| row.len() != r) {
                return Err(LinRepError::Dimension(format!("ζ({d}) is not {r}×{r}")));
            }
        }
        Ok(LinRep { v, zeta, w })
    }

    /// Builds from integer entries.
    pub fn from_integers(v: &[i64], zeta: &[Vec<Vec<i64>>], w: &[i64]) -> Result<Self, LinRepError> {
        LinRep::new(
            v.iter().map(|&x| rat(x)).collect(),
            zeta.iter()
                .map(|m| m.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect())
                .collect(),
            w.iter().map(|&x| rat(x)).collect(),
        )
    }

    /// The rank-0 representation of the zero function.
    pub fn zero(digits: usize) -> Self {
        LinRep {
            v: Vec::new(),
            zeta: vec![Vec::new(); digits],
            w: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    pub fn digit_count(&self) -> usize {
        self.zeta.len()
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn w(&self) -> &[Rational] {
        &self.w
    }

    pub fn zeta(&self, digit: u8) -> Option<&Matrix> {
        self.zeta.get(digit as usize)
    }

    fn matrix(&self, d: u8) -> Result<&Matrix, LinRepError> {
        self.zeta.get(d as usize).ok_or(LinRepError::UnknownDigit(d))
    }

    /// `v · ζ(word)`, reading msd first.
    pub fn forward(&self, word: &[u8]) -> Result<Vec<Rational>, LinRepError> {
        let mut x = self.v.clone();
        for &d in word {
            x = row_times(&x, self.matrix(d)?);
        }
        Ok(x)
    }

    pub fn eval(&self, word: &[u8]) -> Result<Rational, LinRepError> {
        Ok(dot(&self.forward(word)?, &self.w))
    }

    /// Replaces one entry of `w`; used to build perturbed representations.
    pub fn with_w_entry(&self, index: usize, value: Rational) -> LinRep {
        let mut out = self.clone();
        out.w[index] = value;
        out
    }

    /// Adds `extra` dimensions that are unreachable from `v`: the new rows of
    /// every `ζ(d)` feed arbitrary mass back into the original block and the
    /// extra entries of `w` are nonzero, but `v` is zero on them.
    pub fn padded(&self, extra: usize) -> LinRep {
        let r = self.rank();
        let n = r + extra;
        let mut v = self.v.clone();
        v.extend((0..extra).map(|_| Rational::zero()));
        let zeta = self
            .zeta
            .iter()
            .enumerate()
            .map(|(d, m)| {
                let mut out: Matrix = vec![vec![Rational::zero(); n]; n];
                for i in 0..r {
                    for j in 0..r {
                        out[i][j] = m[i][j].clone();
                    }
                }
                for i in r..n {
                    // padding rows mix into the original block and among themselves
                    out[i][(i + d) % r] = rat(1 + d as i64);
                    out[i][r + (i - r + 1 + d) % extra] = rat(2);
                }
                out
            })
            .collect();
        let mut w = self.w.clone();
        w.extend((0..extra).map(|i| rat(3 + i as i64)));
        LinRep { v, zeta, w }
    }

    /// Forward reduction: restrict to the span of `{v · ζ(u)}`.
    /// Also returns, for each basis vector, the word that produced it.
    fn reachable_reduction(&self) -> (LinRep, Vec<Vec<u8>>) {
        let r = self.rank();
        let mut basis = Basis::new(r);
        let mut words: Vec<Vec<u8>> = Vec::new();
        if basis.insert(self.v.clone()) {
            words.push(Vec::new());
        }
        let mut i = 0;
        while i < basis.len() {
            for d in 0..self.digit_count() {
                let next = row_times(&basis.vectors[i], &self.zeta[d]);
                if basis.insert(next) {
                    let mut u = words[i].clone();
                    u.push(d as u8);
                    words.push(u);
                }
            }
            i += 1;
        }
        let k = basis.len();
        if k == 0 {
            return (LinRep::zero(self.digit_count()), words);
        }
        debug_assert!(basis.dim == r);
        let mut v = vec![Rational::zero(); k];
        v[0] = Rational::one();
        let zeta = self
            .zeta
            .iter()
            .map(|m| {
                basis
                    .vectors
                    .iter()
                    .map(|b| {
                        basis
                            .coordinates(&row_times(b, m))
                            .expect("basis spans its own images")
                    })
                    .collect()
            })
            .collect();
        let w = basis.vectors.iter().map(|b| dot(b, &self.w)).collect();
        (LinRep { v, zeta, w }, words)
    }

    /// The transposed representation `(wᵀ, ζ(d)ᵀ, vᵀ)` computes the function on reversed words.
    fn transposed(&self) -> LinRep {
        let r = self.rank();
        LinRep {
            v: self.w.clone(),
            zeta: self.zeta.iter().map(|m| transpose(m, r, r)).collect(),
            w: self.v.clone(),
        }
    }

    /// Minimal-rank representation of the same function: forward reduction,
    /// then forward reduction of the transpose (the observability space).
    pub fn minimize(&self) -> LinRep {
        let (reach, _) = self.reachable_reduction();
        let (obs, _) = reach.transposed().reachable_reduction();
        obs.transposed()
    }

    /// Exact equality of the two functions over all digit strings.
    pub fn equal(&self, other: &LinRep) -> Result<Equality, LinRepError> {
        let diff = self.difference(other)?;
        let (reduced, words) = diff.reachable_reduction();
        // every forward vector lies in the span of the BFS basis vectors of no
        // greater length, so the first basis word with a nonzero value is a
        // shortest witness
        for (i, word) in words.iter().enumerate() {
            if !reduced.w[i].is_zero() {
                return Ok(Equality::Differ(word.clone()));
            }
        }
        Ok(Equality::Equal)
    }

    /// Representation of `self - other` on the direct sum of the two spaces.
    pub fn difference(&self, other: &LinRep) -> Result<LinRep, LinRepError> {
        if self.digit_count() != other.digit_count() {
            return Err(LinRepError::Dimension("different digit alphabets".into()));
        }
        let (r1, r2) = (self.rank(), other.rank());
        let n = r1 + r2;
        let mut v = self.v.clone();
        v.extend(other.v.iter().map(|x| -x));
        let zeta = self
            .zeta
            .iter()
            .zip(&other.zeta)
            .map(|(a, b)| {
                let mut m: Matrix = vec![vec![Rational::zero(); n]; n];
                for i in 0..r1 {
                    for j in 0..r1 {
                        m[i][j] = a[i][j].clone();
                    }
                }
                for i in 0..r2 {
                    for j in 0..r2 {
                        m[r1 + i][r1 + j] = b[i][j].clone();
                    }
                }
                m
            })
            .collect();
        let mut w = self.w.clone();
        w.extend(other.w.iter().cloned());
        Ok(LinRep { v, zeta, w })
    }

    /// Agreement on every digit string of length at most `max_len`.
    /// Returns the first disagreeing string in length-lexicographic order.
    pub fn agree_up_to(&self, other: &LinRep, max_len: usize) -> Result<Option<Vec<u8>>, LinRepError> {
        if self.digit_count() != other.digit_count() {
            return Err(LinRepError::Dimension("different digit alphabets".into()));
        }
        let k = self.digit_count() as u8;
        let mut layer: Vec<(Vec<u8>, Vec<Rational>, Vec<Rational>)> =
            vec![(Vec::new(), self.v.clone(), other.v.clone())];
        for len in 0..=max_len {
            for (word, x, y) in &layer {
                if dot(x, &self.w) != dot(y, &other.w) {
                    return Ok(Some(word.clone()));
                }
            }
            if len == max_len {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|(word, x, y)| {
                    (0..k).map(move |d| {
                        let mut u = word.clone();
                        u.push(d);
                        (u, row_times(x, &self.zeta[d as usize]), row_times(y, &other.zeta[d as usize]))
                    })
                })
                .collect();
        }
        Ok(None)
    }

    pub fn render(&self) -> String {
        let fmt_row = |row: &[Rational]| row.iter().map(fmt_rational).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "# evaluation: v * zeta(e_t) * ... * zeta(e_1) * w, digits read msd first");
        let _ = writeln!(out, "rank: {}", self.rank());
        let _ = writeln!(out, "v: {}", fmt_row(&self.v));
        for (d, m) in self.zeta.iter().enumerate() {
            let _ = writeln!(out, "zeta {d}:");
            for row in m {
                let _ = writeln!(out, "{}", fmt_row(row));
            }
        }
        let _ = writeln!(out, "w: {}", fmt_row(&self.w));
        out
    }

    /// Parses the text format written by [`LinRep::render`]. `w` entries may
    /// follow on the same line or one per line.
    pub fn parse(text: &str) -> Result<LinRep, LinRepError> {
        let err = |line: usize, message: &str| LinRepError::Format {
            line,
            message: message.to_string(),
        };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut it = lines.into_iter().peekable();
        let (ln, first) = it.next().ok_or_else(|| err(0, "empty input"))?;
        let rank: usize = first
            .strip_prefix("rank:")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| err(ln, "expected 'rank: <r>'"))?;
        let parse_row = |ln: usize, s: &str| -> Result<Vec<Rational>, LinRepError> {
            s.split_whitespace()
                .map(|tok| parse_rational(tok).ok_or_else(|| err(ln, &format!("bad entry {tok:?}"))))
                .collect()
        };
        let (ln, vline) = it.next().ok_or_else(|| err(0, "missing v"))?;
        let v = parse_row(ln, vline.strip_prefix("v:").ok_or_else(|| err(ln, "expected 'v:'"))?)?;
        if v.len() != rank {
            return Err(err(ln, "v has the wrong length"));
        }
        let mut zeta = Vec::new();
        while let Some(&(ln, l)) = it.peek() {
            let Some(rest) = l.strip_prefix("zeta") else { break };
            let digit: usize = rest
                .trim()
                .strip_suffix(':')
                .and_then(|d| d.trim().parse().ok())
                .ok_or_else(|| err(ln, "expected 'zeta <d>:'"))?;
            if digit != zeta.len() {
                return Err(err(ln, "matrices must be listed in digit order"));
            }
            it.next();
            let mut m = Vec::with_capacity(rank);
            for _ in 0..rank {
                let (ln, row) = it.next().ok_or_else(|| err(0, "truncated matrix"))?;
                let row = parse_row(ln, row)?;
                if row.len() != rank {
                    return Err(err(ln, "matrix row has the wrong length"));
                }
                m.push(row);
            }
            zeta.push(m);
        }
        let (ln, wline) = it.next().ok_or_else(|| err(0, "missing w"))?;
        let mut w = parse_row(ln, wline.strip_prefix("w:").ok_or_else(|| err(ln, "expected 'w:'"))?)?;
        for (ln, l) in it {
            w.extend(parse_row(ln, l)?);
        }
        if w.len() != rank {
            return Err(err(ln, "w has the wrong length"));
        }
        LinRep::new(v, zeta, w)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(tok: &str) -> Option<Rational> {
    match tok.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.parse().ok()?, d))
        }
        None => Some(Rational::from_integer(tok.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(k: u8, max_len: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        let mut layer: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| (0..k).map(move |d| [w.as_slice(), &[d]].concat()))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    /// f(word) = number of 1s, a rank-2 representation.
    fn ones_counter() -> LinRep {
        LinRep::from_integers(
            &[1, 0],
            &[vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![0, 1]]],
            &[0, 1],
        )
        .unwrap()
    }

    #[test]
    fn eval_and_text_round_trip() {
        let lr = ones_counter();
        assert_eq!(lr.eval(&[1, 0, 1, 1]).unwrap(), rat(3));
        assert_eq!(lr.eval(&[]).unwrap(), rat(0));
        assert_eq!(lr.eval(&[2]), Err(LinRepError::UnknownDigit(2)));
        let parsed = LinRep::parse(&lr.render()).unwrap();
        assert_eq!(parsed, lr);
        let half = LinRep::parse("rank: 1\nv: 1/2\nzeta 0:\n3\nzeta 1:\n-2/4\nw:\n4\n").unwrap();
        assert_eq!(half.eval(&[0, 1]).unwrap(), Rational::new(BigInt::from(-3), BigInt::from(1)));
    }

    #[test]
    fn parse_rejects_bad_shapes() {
        assert!(LinRep::parse("rank: 2\nv: 1\nw: 1 1\n").is_err());
        assert!(LinRep::parse("rank: 1\nv: 1\nzeta 0:\n1 2\nw: 1\n").is_err());
        assert!(LinRep::parse("rank: 1\nv: 1/0\nw: 1\n").is_err());
    }

    #[test]
    fn zero_rep_minimizes_to_rank_zero() {
        let zeros = vec![vec![0i64; 5]; 5];
        let lr = LinRep::from_integers(&[0; 5], &[zeros.clone(), zeros], &[0; 5]).unwrap();
        let min = lr.minimize();
        assert_eq!(min.rank(), 0);
        assert_eq!(min.eval(&[1, 0, 1]).unwrap(), rat(0));
    }

    #[test]
    fn padding_is_removed_and_equal() {
        let lr = ones_counter();
        let padded = lr.padded(3);
        assert_eq!(padded.rank(), 5);
        for w in all_words(2, 8) {
            assert_eq!(padded.eval(&w).unwrap(), lr.eval(&w).unwrap());
        }
        assert_eq!(padded.minimize().rank(), 2);
        assert!(lr.equal(&padded).unwrap().holds());
    }

    #[test]
    fn perturbed_w_differs_on_empty_word() {
        let lr = ones_counter();
        let bad = lr.with_w_entry(0, rat(2));
        assert_eq!(lr.equal(&bad).unwrap(), Equality::Differ(vec![]));
        let bad = lr.with_w_entry(1, rat(5));
        assert_eq!(lr.equal(&bad).unwrap(), Equality::Differ(vec![1]));
    }

    #[test]
    fn minimize_preserves_function_and_is_idempotent() {
        // redundant rank-4 rep of f = 2 * (#ones) + 1
        let lr = LinRep::from_integers(
            &[1, 0, 1, 0],
            &[
                vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
                vec![vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]],
            ],
            &[1, 1, 0, 1],
        )
        .unwrap();
        let min = lr.minimize();
        assert_eq!(min.rank(), 2);
        assert_eq!(min.minimize().rank(), 2);
        for w in all_words(2, 10) {
            assert_eq!(min.eval(&w).unwrap(), lr.eval(&w).unwrap());
        }
    }

    #[test]
    fn decision_routes_agree_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let random_rep = |rng: &mut rand_chacha::ChaCha8Rng, rank: usize| {
            let mut entry = || rng.gen_range(-2i64..=2);
            let v: Vec<i64> = (0..rank).map(|_| entry()).collect();
            let zeta: Vec<Vec<Vec<i64>>> =
                (0..2).map(|_| (0..rank).map(|_| (0..rank).map(|_| entry()).collect()).collect()).collect();
            let w: Vec<i64> = (0..rank).map(|_| entry()).collect();
            LinRep::from_integers(&v, &zeta, &w).unwrap()
        };
        let mut equal_pairs = 0;
        for trial in 0..50 {
            let rank = rng.gen_range(1..=3);
            let a = random_rep(&mut rng, rank);
            let b = match trial % 3 {
                0 => a.padded(rng.gen_range(1..=2)),
                1 => a.with_w_entry(rng.gen_range(0..rank), rat(rng.gen_range(-2..=2))),
                _ => {
                    let other_rank = rng.gen_range(1..=3);
                    random_rep(&mut rng, other_rank)
                }
            };
            let exact = a.equal(&b).unwrap();
            let bounded = a.agree_up_to(&b, a.rank() + b.rank()).unwrap();
            assert_eq!(exact.holds(), bounded.is_none(), "trial {trial}");
            if let Equality::Differ(word) = &exact {
                assert_ne!(a.eval(word).unwrap(), b.eval(word).unwrap());
            }
            equal_pairs += exact.holds() as usize;
        }
        assert!(equal_pairs >= 17);
    }
}
