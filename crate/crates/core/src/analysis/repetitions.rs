//! Repetitions in prefixes of **p**: exponents, cubes and overlaps, and the
//! closed forms for the exponents approaching the critical exponent.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{stabilize, AnalysisError};
use crate::numeration::x_value;
use crate::word::fixed_point_prefix;

/// A factor `word[start..start + length]` with period `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepetitionWitness {
    pub start: usize,
    pub period: usize,
    pub length: usize,
    /// The letter before the factor breaks the period, or the factor is a prefix.
    pub left_maximal: bool,
    /// The letter after the factor breaks the period (false at the end of the buffer).
    pub right_maximal: bool,
}

impl RepetitionWitness {
    /// Checks the period against `word` and records maximality.
    pub fn new(word: &[u8], start: usize, period: usize, length: usize) -> Result<Self, AnalysisError> {
        if period == 0 || length < period || start + length > word.len() {
            return Err(AnalysisError::Domain(format!(
                "repetition ({start}, {period}, {length}) does not fit a word of length {}",
                word.len()
            )));
        }
        let end = start + length;
        if (start..end - period).any(|t| word[t] != word[t + period]) {
            return Err(AnalysisError::Violation(format!(
                "factor at {start} of length {length} lacks period {period}"
            )));
        }
        Ok(RepetitionWitness {
            start,
            period,
            length,
            left_maximal: start == 0 || word[start - 1] != word[start - 1 + period],
            right_maximal: end < word.len() && word[end] != word[end - period],
        })
    }

    pub fn exponent(&self) -> Ratio<u64> {
        Ratio::new(self.length as u64, self.period as u64)
    }

    /// Re-checks the period positionally.
    pub fn verify(&self, word: &[u8]) -> bool {
        RepetitionWitness::new(word, self.start, self.period, self.length).as_ref() == Ok(self)
    }
}

/// Maximal runs of `word[t] == word[t + p]`, reported as `(start, length)` of
/// the repetition they span.
fn runs(word: &[u8], p: usize, mut visit: impl FnMut(usize, usize)) {
    let mut t = 0;
    while t + p < word.len() {
        if word[t] != word[t + p] {
            t += 1;
            continue;
        }
        let s = t;
        while t + p < word.len() && word[t] == word[t + p] {
            t += 1;
        }
        visit(s, t - s + p);
    }
}

/// Longest factor of `word` with period `p`.
pub fn longest_with_period(word: &[u8], p: usize) -> Option<RepetitionWitness> {
    let mut best: Option<(usize, usize)> = None;
    runs(word, p, |s, len| {
        if best.map_or(true, |(_, l)| len > l) {
            best = Some((s, len));
        }
    });
    best.map(|(s, len)| RepetitionWitness::new(word, s, p, len).expect("run has its period"))
}

/// Largest `ℓ/p` over factors with period `p ≤ max_period`. A word without
/// any repetition has exponent 1, witnessed by its first letter.
pub fn max_exponent(word: &[u8], max_period: usize) -> Option<RepetitionWitness> {
    if word.is_empty() {
        return None;
    }
    let mut best = RepetitionWitness::new(word, 0, 1, 1).expect("nonempty");
    for p in 1..=max_period.min(word.len() / 2) {
        if let Some(w) = longest_with_period(word, p) {
            if w.exponent() > best.exponent() {
                best = w;
            }
        }
    }
    Some(best)
}

/// A factor of exponent at least 3, if any. Every period is examined by
/// sampling positions that are multiples of the period.
pub fn find_cube(word: &[u8]) -> Option<RepetitionWitness> {
    let n = word.len();
    for p in 1..=n / 3 {
        let mut q = 0;
        while q + p < n {
            if word[q] == word[q + p] {
                let mut back = 0;
                while back < q && back < 2 * p && word[q - back - 1] == word[q - back - 1 + p] {
                    back += 1;
                }
                let mut fwd = 0;
                while q + fwd + p < n && back + fwd < 2 * p && word[q + fwd] == word[q + fwd + p] {
                    fwd += 1;
                }
                if back + fwd >= 2 * p {
                    return Some(RepetitionWitness::new(word, q - back, p, 3 * p).expect("cube has its period"));
                }
            }
            q += p;
        }
    }
    None
}

/// Periods `n ≤ bound` of factors of length `2n + 1` of **p**.
pub fn overlap_orders(bound: usize) -> Result<BTreeSet<usize>, AnalysisError> {
    if bound == 0 {
        return Err(AnalysisError::ZeroLength);
    }
    let (set, _) = stabilize(2 * bound + 1, |m| overlap_periods(&fixed_point_prefix(m), bound))?;
    Ok(set)
}

fn overlap_periods(word: &[u8], bound: usize) -> BTreeSet<usize> {
    (1..=bound)
        .filter(|&p| {
            let mut found = false;
            runs(word, p, |_, len| found |= len > 2 * p);
            found
        })
        .collect()
}

/// Numerator and denominator of the `n`-th exponent of a family, unreduced.
/// Family 1 is the single value `6/5`; families 2–7 increase towards `γ`.
pub fn exponent_family_parts(family: u32, n: u32) -> Result<(BigUint, BigUint), AnalysisError> {
    let x = |i: u32| x_value(i as i64).expect("nonnegative index");
    let sum = |range: std::ops::RangeInclusive<u32>, f: &dyn Fn(u32) -> u32| -> BigUint {
        range.map(|i| x(f(i))).sum()
    };
    let big = BigUint::from;
    Ok(match family {
        1 => (big(6u32), big(5u32)),
        2 => (sum(1..=n + 2, &|i| 2 * i), x(2 * n + 4)),
        3 => (sum(1..=n + 2, &|i| 2 * i + 1), x(2 * n + 5)),
        4 => (sum(1..=n + 1, &|i| 4 * i + 1), x(4 * n + 4) + x(4 * n + 2)),
        5 => (big(1u32) + sum(1..=n + 1, &|i| 4 * i + 2), x(4 * n + 5) + x(4 * n + 3)),
        6 => (big(3u32) + sum(1..=n + 1, &|i| 4 * i + 3), x(4 * n + 6) + x(4 * n + 4)),
        7 => (big(6u32) + sum(1..=n + 1, &|i| 4 * i + 4), x(4 * n + 7) + x(4 * n + 5)),
        _ => return Err(AnalysisError::Domain(format!("no exponent family {family}"))),
    })
}

pub fn exponent_family(family: u32, n: u32) -> Result<BigRational, AnalysisError> {
    let (num, den) = exponent_family_parts(family, n)?;
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `5 · Σ_{i=1}^{n} X_{2i} = 3X_{2n} − X_{2n+1} + 2X_{2n+2} − 6`.
pub fn sum_identity_check(n: u32) -> bool {
    let x = |i: u32| BigInt::from(x_value(i as i64).expect("nonnegative index"));
    let lhs: BigInt = (1..=n).map(|i| x(2 * i)).sum::<BigInt>() * 5;
    let rhs = x(2 * n) * 3 - x(2 * n + 1) + x(2 * n + 2) * 2 - 6;
    lhs == rhs
}

/// Whether `r < γ + 1`, decided exactly: `γ + 1` is the only real root of
/// `5X³ − 26X² + 43X − 23`, which is negative below it.
pub fn below_critical(r: &BigRational) -> bool {
    let c = |n: i64| BigRational::from_integer(BigInt::from(n));
    let q = ((c(5) * r - c(26)) * r + c(43)) * r - c(23);
    q < c(0)
}

/// Whether `r < γ`.
pub fn below_gamma(r: &BigRational) -> bool {
    below_critical(&(r + BigRational::from_integer(BigInt::from(1))))
}

/// Nearest `f64` to a rational.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::constants::GAMMA;
    use proptest::prelude::*;

    #[test]
    fn exponent_of_short_words() {
        let w = max_exponent(&[0, 1], 1).unwrap();
        assert_eq!(w.exponent(), Ratio::from_integer(1));
        let w = max_exponent(&[0, 1, 0, 1, 0], 2).unwrap();
        assert_eq!(w.exponent(), Ratio::new(5, 2));
        assert!(w.left_maximal);
        assert!(!w.right_maximal);
    }

    #[test]
    fn witness_rejects_wrong_period() {
        assert!(RepetitionWitness::new(&[0, 1, 2, 0], 0, 3, 4).is_ok());
        assert!(matches!(
            RepetitionWitness::new(&[0, 1, 2, 1], 0, 3, 4),
            Err(AnalysisError::Violation(_))
        ));
    }

    #[test]
    fn cubes_are_found() {
        let w = find_cube(&[2, 0, 1, 0, 1, 0, 1, 2]).unwrap();
        assert_eq!((w.start, w.period, w.length), (1, 2, 6));
        assert!(find_cube(&fixed_point_prefix(20_000)).is_none());
        assert!(find_cube(&[0, 0, 1, 0]).is_none());
    }

    proptest! {
        #[test]
        fn cube_search_matches_naive(word in proptest::collection::vec(0u8..2, 0..40)) {
            let naive = (1..=word.len() / 3).any(|p| {
                (0..=word.len() - 3 * p).any(|s| (s..s + 2 * p).all(|t| word[t] == word[t + p]))
            });
            let found = find_cube(&word);
            prop_assert_eq!(found.is_some(), naive);
            if let Some(w) = found {
                prop_assert!(w.verify(&word));
            }
        }
    }

    #[test]
    fn exponent_families() {
        assert_eq!(exponent_family(1, 0).unwrap(), BigRational::new(6.into(), 5.into()));
        assert_eq!(exponent_family(2, 0).unwrap(), BigRational::new(9.into(), 7.into()));
        for k in 2..=7 {
            let mut prev = exponent_family(k, 0).unwrap();
            for n in 1..=20 {
                let cur = exponent_family(k, n).unwrap();
                assert!(cur > prev, "family {k} not increasing at {n}");
                assert!(below_gamma(&cur));
                prev = cur;
            }
            assert!((GAMMA - to_f64(&prev)).abs() < 1e-6, "family {k}");
        }
        assert!(exponent_family(8, 0).is_err());
    }

    #[test]
    fn families_are_realized() {
        let word = fixed_point_prefix(100_000);
        for k in 1..=7 {
            for n in 0..=2 {
                let (num, den) = exponent_family_parts(k, n).unwrap();
                let p: usize = den.try_into().unwrap();
                if p > 3000 {
                    continue;
                }
                let w = longest_with_period(&word, p).unwrap();
                assert_eq!(BigUint::from(w.length - p), num, "family {k}, n = {n}");
            }
        }
    }

    #[test]
    fn exact_gamma_comparison() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert!(below_gamma(&r(148086, 100000)));
        assert!(!below_gamma(&r(148087, 100000)));
        assert!(below_critical(&r(5, 2)) == false);
        assert!(below_critical(&r(248086, 100000)));
    }

    #[test]
    fn sum_identity() {
        assert!((1..=30).all(sum_identity_check));
    }

    #[test]
    fn overlaps_small() {
        let o = overlap_orders(30).unwrap();
        assert!(o.contains(&5) && o.contains(&7));
        assert!((1..=4).all(|n| !o.contains(&n)));
    }
}
