//! The P4 numeration system.
//!
//! Natural numbers are written as sums `N = Σ e_i X_i` over the recurrence
//! `X_1 = 1, X_2 = 2, X_3 = 4, X_4 = 7, X_n = X_{n-1} + X_{n-2} + X_{n-4}`,
//! with digits `e_i ∈ {0,1}` written most significant digit first. The greedy
//! expansion is the unique one whose digit string avoids the factors `111`
//! and `1101`.
//!
//! The table also carries the backward extension `X_0 = X_{-1} = 1` obtained
//! from the order-3 form `X_n = 2X_{n-1} - X_{n-2} + X_{n-3}`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Lowest index for which `X_i` is defined.
pub const MIN_INDEX: i64 = -1;

/// Factors excluded from every valid representation, most significant digit first.
pub const FORBIDDEN_FACTORS: [&str; 2] = ["111", "1101"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumerationError {
    #[error("recurrence index {0} is below -1")]
    IndexOutOfDomain(i64),
    #[error("invalid representation: non-binary symbol {symbol:?} at position {position}")]
    NonBinary { position: usize, symbol: char },
    #[error("invalid representation: forbidden factor {factor}")]
    ForbiddenFactor { factor: &'static str, position: usize },
    #[error("invalid representation: leading zero")]
    LeadingZero,
    #[error("value does not fit in 64 bits")]
    Overflow,
}

/// Memoized values `X_{-1}, X_0, X_1, …`.
///
/// The table only ever grows by appending values computed from the recurrence,
/// so concurrent readers see the same values regardless of fill order.
#[derive(Debug)]
pub struct RecurrenceTable {
    // values[k] holds X_{k-1}
    values: RwLock<Vec<BigUint>>,
}

impl Default for RecurrenceTable {
    fn default() -> Self {
        Self::new()
    }
}

impl RecurrenceTable {
    pub fn new() -> Self {
        let seed = [1u32, 1, 1, 2, 4, 7].into_iter().map(BigUint::from).collect();
        RecurrenceTable {
            values: RwLock::new(seed),
        }
    }

    /// The process-wide table.
    pub fn global() -> &'static RecurrenceTable {
        static TABLE: OnceLock<RecurrenceTable> = OnceLock::new();
        TABLE.get_or_init(RecurrenceTable::new)
    }

    pub fn get(&self, i: i64) -> Result<BigUint, NumerationError> {
        if i < MIN_INDEX {
            return Err(NumerationError::IndexOutOfDomain(i));
        }
        let slot = (i + 1) as usize;
        {
            let values = self.values.read().expect("recurrence table poisoned");
            if let Some(v) = values.get(slot) {
                return Ok(v.clone());
            }
        }
        let mut values = self.values.write().expect("recurrence table poisoned");
        while values.len() <= slot {
            let k = values.len();
            let next = &values[k - 1] + &values[k - 2] + &values[k - 4];
            values.push(next);
        }
        Ok(values[slot].clone())
    }
}

/// `X_i` as an arbitrary-precision integer.
pub fn x_value(i: i64) -> Result<BigUint, NumerationError> {
    RecurrenceTable::global().get(i)
}

/// `X_i` for indices small enough to fit in a `u64` (up to `i = 78`).
pub fn x_u64(i: i64) -> Option<u64> {
    let table = small_table();
    if i < MIN_INDEX {
        return None;
    }
    table.get((i + 1) as usize).copied()
}

fn small_table() -> &'static [u64] {
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    SMALL.get_or_init(|| {
        let mut v: Vec<u64> = vec![1, 1, 1, 2, 4, 7];
        loop {
            let k = v.len();
            let next = v[k - 1]
                .checked_add(v[k - 2])
                .and_then(|s| s.checked_add(v[k - 4]));
            match next {
                Some(x) => v.push(x),
                None => break,
            }
        }
        v
    })
}

/// Checks `digits` for non-binary entries and the two forbidden factors.
fn check_digits(digits: &[u8]) -> Result<(), NumerationError> {
    if let Some(position) = digits.iter().position(|&d| d > 1) {
        return Err(NumerationError::NonBinary {
            position,
            symbol: char::from_digit(digits[position] as u32, 36).unwrap_or('?'),
        });
    }
    for factor in FORBIDDEN_FACTORS {
        let pattern: Vec<u8> = factor.bytes().map(|b| b - b'0').collect();
        if let Some(position) = digits.windows(pattern.len()).position(|w| w == pattern.as_slice()) {
            return Err(NumerationError::ForbiddenFactor { factor, position });
        }
    }
    Ok(())
}

/// A digit string is valid when it avoids `111` and `1101`. Leading zeros are allowed.
pub fn is_valid(digits: &[u8]) -> bool {
    check_digits(digits).is_ok()
}

/// Valid and either empty or starting with `1`.
pub fn is_canonical(digits: &[u8]) -> bool {
    is_valid(digits) && digits.first().is_none_or(|&d| d == 1)
}

/// The index-based digit rules: `(e_i, e_{i+1}, e_{i+2}) ≠ (1,1,1)` and
/// `(e_i, e_{i+1}, e_{i+2}, e_{i+3}) ≠ (1,0,1,1)`, where `e_1` is the last digit.
pub fn satisfies_digit_rules(digits: &[u8]) -> bool {
    let t = digits.len();
    // e(i) for 1 <= i <= t, zero beyond
    let e = |i: usize| -> u8 {
        if i >= 1 && i <= t {
            digits[t - i]
        } else {
            0
        }
    };
    (1..=t).all(|i| {
        let rule_a = (e(i), e(i + 1), e(i + 2), e(i + 3)) != (1, 0, 1, 1);
        let rule_b = (e(i), e(i + 1), e(i + 2)) != (1, 1, 1);
        rule_a && rule_b
    })
}

/// Parses a string of `0`/`1` characters into digits without any validity check.
pub fn parse_digits(text: &str) -> Result<Vec<u8>, NumerationError> {
    text.chars()
        .enumerate()
        .map(|(position, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            symbol => Err(NumerationError::NonBinary { position, symbol }),
        })
        .collect()
}

pub fn digits_to_string(digits: &[u8]) -> String {
    digits.iter().map(|&d| char::from(b'0' + d)).collect()
}

/// `Σ e_i X_i` for a binary digit string (msd first, leading zeros allowed).
pub fn decode(digits: &[u8]) -> Result<BigUint, NumerationError> {
    let t = digits.len();
    let mut total = BigUint::zero();
    for (j, &d) in digits.iter().enumerate() {
        match d {
            0 => {}
            1 => total += x_value((t - j) as i64)?,
            _ => {
                return Err(NumerationError::NonBinary {
                    position: j,
                    symbol: char::from_digit(d as u32, 36).unwrap_or('?'),
                })
            }
        }
    }
    Ok(total)
}

/// `decode` in machine integers.
pub fn decode_u64(digits: &[u8]) -> Result<u64, NumerationError> {
    let t = digits.len();
    let mut total: u64 = 0;
    for (j, &d) in digits.iter().enumerate() {
        match d {
            0 => {}
            1 => {
                let x = x_u64((t - j) as i64).ok_or(NumerationError::Overflow)?;
                total = total.checked_add(x).ok_or(NumerationError::Overflow)?;
            }
            _ => {
                return Err(NumerationError::NonBinary {
                    position: j,
                    symbol: char::from_digit(d as u32, 36).unwrap_or('?'),
                })
            }
        }
    }
    Ok(total)
}

/// A canonical representation: no leading zero, no factor `111` or `1101`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct P4Rep {
    digits: Vec<u8>,
}

impl P4Rep {
    /// Representation of zero (the empty string).
    pub fn zero() -> Self {
        P4Rep { digits: Vec::new() }
    }

    /// Greedy expansion of `n`.
    pub fn encode(n: &BigUint) -> Self {
        if n.is_zero() {
            return P4Rep::zero();
        }
        let table = RecurrenceTable::global();
        let mut t = 1i64;
        while table.get(t + 1).expect("positive index") <= *n {
            t += 1;
        }
        let mut rest = n.clone();
        let mut digits = Vec::with_capacity(t as usize);
        for i in (1..=t).rev() {
            let x = table.get(i).expect("positive index");
            if x <= rest {
                rest -= x;
                digits.push(1);
            } else {
                digits.push(0);
            }
        }
        debug_assert!(rest.is_zero());
        P4Rep { digits }
    }

    pub fn encode_u64(n: u64) -> Self {
        if n == 0 {
            return P4Rep::zero();
        }
        let mut t = 1i64;
        while x_u64(t + 1).is_some_and(|x| x <= n) {
            t += 1;
        }
        let mut rest = n;
        let mut digits = Vec::with_capacity(t as usize);
        for i in (1..=t).rev() {
            let x = x_u64(i).expect("index within u64 table");
            if x <= rest {
                rest -= x;
                digits.push(1);
            } else {
                digits.push(0);
            }
        }
        P4Rep { digits }
    }

    /// Accepts a canonical digit string only.
    pub fn from_digits(digits: Vec<u8>) -> Result<Self, NumerationError> {
        check_digits(&digits)?;
        if digits.first() == Some(&0) {
            return Err(NumerationError::LeadingZero);
        }
        Ok(P4Rep { digits })
    }

    /// Accepts a valid, possibly zero-padded digit string and strips the padding.
    pub fn from_padded(digits: &[u8]) -> Result<Self, NumerationError> {
        check_digits(digits)?;
        let start = digits.iter().position(|&d| d == 1).unwrap_or(digits.len());
        Ok(P4Rep {
            digits: digits[start..].to_vec(),
        })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        decode(&self.digits).expect("canonical digits are binary")
    }

    pub fn value_u64(&self) -> Option<u64> {
        decode_u64(&self.digits).ok()
    }

    pub fn successor(&self) -> Self {
        P4Rep::encode(&(self.value() + BigUint::one()))
    }

    pub fn add(&self, other: &P4Rep) -> Self {
        P4Rep::encode(&(self.value() + other.value()))
    }

    /// Zero-padded on the left to `width` digits.
    pub fn padded(&self, width: usize) -> Vec<u8> {
        let mut out = vec![0; width.saturating_sub(self.digits.len())];
        out.extend_from_slice(&self.digits);
        out
    }
}

impl std::str::FromStr for P4Rep {
    type Err = NumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        P4Rep::from_digits(parse_digits(s)?)
    }
}

impl fmt::Display for P4Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_to_string(&self.digits))
    }
}

impl PartialOrd for P4Rep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical representations order by length, then lexicographically,
/// which coincides with the order of their values.
impl Ord for P4Rep {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits
            .len()
            .cmp(&other.digits.len())
            .then_with(|| self.digits.cmp(&other.digits))
    }
}

pub fn encode(n: &BigUint) -> P4Rep {
    P4Rep::encode(n)
}

pub fn successor(rep: &P4Rep) -> P4Rep {
    rep.successor()
}

pub fn add(x: &P4Rep, y: &P4Rep) -> P4Rep {
    x.add(y)
}

/// Order of the decoded values.
pub fn compare(x: &P4Rep, y: &P4Rep) -> Ordering {
    x.cmp(y)
}

/// Number of digits in the canonical representation of `n`.
pub fn rep_len_u64(n: u64) -> usize {
    if n == 0 {
        return 0;
    }
    let mut t = 1i64;
    while x_u64(t + 1).is_some_and(|x| x <= n) {
        t += 1;
    }
    t as usize
}

/// Largest value whose canonical representation has at most `len` digits, plus one.
pub fn count_up_to_len(len: usize) -> Option<u64> {
    x_u64(len as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn table_values() {
        let expected = [1u64, 2, 4, 7, 12, 21, 37, 65, 114, 200, 351, 616, 1081, 1897];
        for (i, &x) in expected.iter().enumerate() {
            assert_eq!(x_value(i as i64 + 1).unwrap(), big(x));
            assert_eq!(x_u64(i as i64 + 1), Some(x));
        }
        assert_eq!(x_value(0).unwrap(), big(1));
        assert_eq!(x_value(-1).unwrap(), big(1));
        assert_eq!(x_value(-2), Err(NumerationError::IndexOutOfDomain(-2)));
    }

    #[test]
    fn order_three_form_and_backward_extension() {
        for n in 4..70i64 {
            let lhs = x_value(n).unwrap();
            let rhs = BigUint::from(2u8) * x_value(n - 1).unwrap() + x_value(n - 3).unwrap()
                - x_value(n - 2).unwrap();
            assert_eq!(lhs, rhs, "n = {n}");
        }
        // X_0 = X_3 - 2 X_2 + X_1
        assert_eq!(x_u64(0), Some(4 - 2 * 2 + 1));
        assert_eq!(x_u64(-1), Some(2 - 2 * 1 + 1));
    }

    #[test]
    fn small_and_big_tables_agree() {
        let mut i = -1;
        while let Some(x) = x_u64(i) {
            assert_eq!(BigUint::from(x), x_value(i).unwrap());
            i += 1;
        }
        assert!(i > 70);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(P4Rep::encode(&big(13)).to_string(), "10001");
        assert_eq!(P4Rep::encode(&big(21)).to_string(), "100000");
        assert!(P4Rep::encode(&big(0)).is_empty());
        assert_eq!(P4Rep::encode_u64(21).to_string(), "100000");
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&parse_digits("10101").unwrap()).unwrap(), big(17));
        assert_eq!(decode(&parse_digits("1011").unwrap()).unwrap(), big(10));
        assert_eq!(decode(&parse_digits("1").unwrap()).unwrap(), big(1));
        assert_eq!(decode(&parse_digits("0001011").unwrap()).unwrap(), big(10));
        assert!(matches!(parse_digits("102"), Err(NumerationError::NonBinary { position: 2, .. })));
        assert!(matches!(decode(&[1, 2]), Err(NumerationError::NonBinary { .. })));
    }

    #[test]
    fn validity_examples() {
        assert!(!is_valid(&parse_digits("111").unwrap()));
        assert!(!is_valid(&parse_digits("1101").unwrap()));
        let padded = parse_digits("01000").unwrap();
        assert!(is_valid(&padded));
        assert!(!is_canonical(&padded));
        assert!(is_canonical(&[]));
    }

    #[test]
    fn parse_reports_forbidden_factor() {
        let err = "111".parse::<P4Rep>().unwrap_err();
        assert_eq!(err.to_string(), "invalid representation: forbidden factor 111");
        let err = "11010".parse::<P4Rep>().unwrap_err();
        assert_eq!(err.to_string(), "invalid representation: forbidden factor 1101");
        assert_eq!("0101".parse::<P4Rep>().unwrap_err(), NumerationError::LeadingZero);
        assert_eq!(P4Rep::from_padded(&[0, 1, 0, 1]).unwrap().to_string(), "101");
    }

    #[test]
    fn successor_examples() {
        let s = |t: &str| t.parse::<P4Rep>().unwrap().successor().to_string();
        assert_eq!(s("110"), "1000");
        assert_eq!(s(""), "1");
        assert_eq!(s("1011"), "1100");
    }

    #[test]
    fn add_examples() {
        let r = |t: &str| t.parse::<P4Rep>().unwrap();
        assert_eq!(r("101").add(&r("1000")).to_string(), "10000");
        assert_eq!(r("10011").add(&P4Rep::zero()), r("10011"));
        assert_eq!(r("11").add(&r("11")).to_string(), "110");
    }

    #[test]
    fn compare_examples() {
        let r = |t: &str| t.parse::<P4Rep>().unwrap();
        assert_eq!(compare(&r("101"), &r("1000")), Ordering::Less);
        assert_eq!(compare(&r("1011"), &r("1011")), Ordering::Equal);
        assert_eq!(compare(&r("100000"), &r("10101")), Ordering::Greater);
    }

    #[test]
    fn greedy_dominance() {
        for n in 1..5000u64 {
            let rep = P4Rep::encode_u64(n);
            let t = rep.len() as i64;
            assert!(x_u64(t).unwrap() <= n && n < x_u64(t + 1).unwrap());
            assert_eq!(rep_len_u64(n), rep.len());
        }
    }

    #[test]
    fn digit_rules_match_forbidden_factors() {
        for len in 0..=12usize {
            for bits in 0u32..(1 << len) {
                let digits: Vec<u8> = (0..len).rev().map(|k| ((bits >> k) & 1) as u8).collect();
                assert_eq!(
                    satisfies_digit_rules(&digits),
                    is_valid(&digits),
                    "readings disagree on {}",
                    digits_to_string(&digits)
                );
            }
        }
    }

    #[test]
    fn canonical_reps_biject_onto_initial_segment() {
        for len in 0..=15usize {
            let mut seen = vec![false; x_u64(len as i64 + 1).unwrap() as usize];
            let mut count = 0;
            for bits in 0u32..(1 << len) {
                let digits: Vec<u8> = (0..len).rev().map(|k| ((bits >> k) & 1) as u8).collect();
                if !is_valid(&digits) {
                    continue;
                }
                // padded strings of length len stand for canonical reps of length <= len
                let v = decode_u64(&digits).unwrap() as usize;
                assert!(v < seen.len(), "{} out of range", digits_to_string(&digits));
                assert!(!seen[v], "value {v} hit twice");
                seen[v] = true;
                count += 1;
            }
            assert_eq!(count, seen.len());
        }
    }

    #[test]
    fn successor_coherence_to_length_15() {
        let limit = count_up_to_len(15).unwrap();
        let mut rep = P4Rep::zero();
        for n in 0..limit {
            assert_eq!(rep.value_u64(), Some(n));
            let next = rep.successor();
            assert_eq!(next, P4Rep::encode_u64(n + 1));
            rep = next;
        }
    }
}
