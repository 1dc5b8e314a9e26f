//! Factor statistics over prefixes of **p**.
//!
//! Two independent engines: [`FactorScan`] refines class ids of windows one
//! length at a time (linear work per length, used for long ranges), and
//! [`FactorTable`] stores explicit occurrence lists (used for listing factors
//! and as a cross-check).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{initial_prefix, stabilize, AnalysisError, MAX_DOUBLINGS};
use crate::automata::{regex_to_dfa, Alphabet};
use crate::numeration::P4Rep;
use crate::word::{fixed_point_prefix, letters_to_string};

const NONE: u32 = u32::MAX;

/// Class ids of all length-`n` windows of a word. Two windows share an id
/// iff they are equal; ids are numbered by first occurrence.
#[derive(Clone, Debug)]
pub struct FactorScan<'a> {
    word: &'a [u8],
    alphabet: usize,
    n: usize,
    class: Vec<u32>,
    classes: usize,
}

impl<'a> FactorScan<'a> {
    /// Starts at length 0, where every position holds the empty window.
    pub fn new(word: &'a [u8]) -> Self {
        let alphabet = word.iter().map(|&a| a as usize + 1).max().unwrap_or(1);
        FactorScan {
            word,
            alphabet,
            n: 0,
            class: vec![0; word.len() + 1],
            classes: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Class of the window starting at each position `0..=|word| − n`.
    pub fn classes(&self) -> &[u32] {
        &self.class
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// Moves from length `n` to `n + 1`.
    pub fn advance(&mut self) {
        let n = self.n;
        let positions = self.class.len().saturating_sub(1);
        let mut remap = vec![NONE; self.classes * self.alphabet];
        let mut next = 0u32;
        for i in 0..positions {
            let key = self.class[i] as usize * self.alphabet + self.word[i + n] as usize;
            if remap[key] == NONE {
                remap[key] = next;
                next += 1;
            }
            self.class[i] = remap[key];
        }
        self.class.truncate(positions);
        self.classes = next as usize;
        self.n += 1;
    }

    /// Statistics of the length-`n` windows lying inside the first `prefix` letters.
    pub fn stats(&self, prefix: usize) -> WindowStats {
        let n = self.n;
        let word = self.word;
        let starts = (prefix.min(word.len()) + 1).saturating_sub(n);
        let mut first = vec![NONE; self.classes];
        let mut last = vec![0u32; self.classes];
        let mut right = vec![0u8; self.classes];
        let mut left = vec![0u8; self.classes];
        let mut gap = 0;
        for i in 0..starts {
            let c = self.class[i] as usize;
            if first[c] == NONE {
                first[c] = i as u32;
            } else {
                gap = gap.max(i - last[c] as usize);
            }
            last[c] = i as u32;
            if i + n < prefix {
                right[c] |= 1 << word[i + n];
            }
            if i >= 1 {
                left[c] |= 1 << word[i - 1];
            }
        }
        let mut stats = WindowStats {
            n,
            count: 0,
            recurrence: gap,
            appearance: 0,
            right_special: 0,
            left_special: 0,
            bispecial: 0,
        };
        for c in 0..self.classes {
            if first[c] == NONE {
                continue;
            }
            stats.count += 1;
            stats.appearance = stats.appearance.max(first[c] as usize);
            let r = right[c].count_ones() >= 2;
            let l = left[c].count_ones() >= 2;
            stats.right_special += r as usize;
            stats.left_special += l as usize;
            stats.bispecial += (r && l) as usize;
        }
        stats
    }
}

/// Counts derived from the length-`n` windows of a prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowStats {
    pub n: usize,
    /// Distinct factors.
    pub count: usize,
    /// Largest gap between consecutive occurrences of one factor.
    pub recurrence: usize,
    /// Latest first occurrence of a factor.
    pub appearance: usize,
    pub right_special: usize,
    pub left_special: usize,
    pub bispecial: usize,
}

/// Stabilized [`WindowStats`] for every length `1..=max_len`.
pub fn window_stats(max_len: usize) -> Result<Vec<WindowStats>, AnalysisError> {
    if max_len == 0 {
        return Err(AnalysisError::ZeroLength);
    }
    let mut size = 2 * initial_prefix(max_len);
    let limit = initial_prefix(max_len) << (MAX_DOUBLINGS + 1);
    'grow: loop {
        let word = fixed_point_prefix(size);
        let mut scan = FactorScan::new(&word);
        let mut out = Vec::with_capacity(max_len);
        for n in 1..=max_len {
            scan.advance();
            let mut m = initial_prefix(n);
            let mut current = scan.stats(m);
            let mut stable = false;
            for _ in 0..MAX_DOUBLINGS {
                if 2 * m > size {
                    if size >= limit {
                        return Err(AnalysisError::Instability { n, prefix: m });
                    }
                    size *= 2;
                    continue 'grow;
                }
                let next = scan.stats(2 * m);
                if next == current {
                    stable = true;
                    break;
                }
                current = next;
                m *= 2;
            }
            if !stable {
                return Err(AnalysisError::Instability { n, prefix: m });
            }
            out.push(current);
        }
        return Ok(out);
    }
}

/// Number of distinct length-`n` factors of **p**.
pub fn factor_complexity(n: usize) -> Result<usize, AnalysisError> {
    Ok(window_stats(n)?.pop().expect("n >= 1").count)
}

/// Distinct length-`n` factors of a prefix with their sorted occurrence starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorTable {
    n: usize,
    prefix: usize,
    occurrences: BTreeMap<Vec<u8>, Vec<usize>>,
}

impl FactorTable {
    pub fn build(word: &[u8], n: usize) -> Self {
        let mut occurrences: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        if n <= word.len() {
            for (i, w) in word.windows(n.max(1)).enumerate().take(word.len() + 1 - n) {
                occurrences.entry(w[..n].to_vec()).or_default().push(i);
            }
        }
        FactorTable {
            n,
            prefix: word.len(),
            occurrences,
        }
    }

    pub fn factor_len(&self) -> usize {
        self.n
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix
    }

    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }

    pub fn contains(&self, factor: &[u8]) -> bool {
        self.occurrences.contains_key(factor)
    }

    pub fn factors(&self) -> impl Iterator<Item = &[u8]> {
        self.occurrences.keys().map(Vec::as_slice)
    }

    pub fn occurrences(&self, factor: &[u8]) -> Option<&[usize]> {
        self.occurrences.get(factor).map(Vec::as_slice)
    }

    fn extension_letters(&self, word: &[u8], factor: &[u8]) -> (u8, u8) {
        let mut left = 0u8;
        let mut right = 0u8;
        for &i in self.occurrences(factor).unwrap_or(&[]) {
            if i >= 1 {
                left |= 1 << word[i - 1];
            }
            if i + self.n < word.len() {
                right |= 1 << word[i + self.n];
            }
        }
        (left, right)
    }
}

/// The set of factors of **p** of length `n`, stabilized.
pub fn factor_set(n: usize) -> Result<BTreeSet<Vec<u8>>, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::ZeroLength);
    }
    let (set, _) = stabilize(n, |m| {
        FactorTable::build(&fixed_point_prefix(m), n)
            .factors()
            .map(<[u8]>::to_vec)
            .collect::<BTreeSet<_>>()
    })?;
    Ok(set)
}

/// Palindromic factors of **p** of every length up to `max_len`, as strings.
pub fn palindromes(max_len: usize) -> Result<BTreeSet<String>, AnalysisError> {
    let mut out = BTreeSet::new();
    for n in 1..=max_len {
        for f in factor_set(n)? {
            if f.iter().eq(f.iter().rev()) {
                out.insert(letters_to_string(&f));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialFactors {
    pub n: usize,
    pub left: BTreeSet<String>,
    pub right: BTreeSet<String>,
    pub bispecial: BTreeSet<String>,
}

/// Left-, right- and bispecial factors of length `n`. Left extensions only
/// count occurrences at position ≥ 1.
pub fn special_factors(n: usize) -> Result<SpecialFactors, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::ZeroLength);
    }
    let (special, _) = stabilize(n, |m| {
        let word = fixed_point_prefix(m);
        let table = FactorTable::build(&word, n);
        let mut s = SpecialFactors {
            n,
            left: BTreeSet::new(),
            right: BTreeSet::new(),
            bispecial: BTreeSet::new(),
        };
        for f in table.factors() {
            let (l, r) = table.extension_letters(&word, f);
            let name = letters_to_string(f);
            let (l, r) = (l.count_ones() >= 2, r.count_ones() >= 2);
            if l {
                s.left.insert(name.clone());
            }
            if r {
                s.right.insert(name.clone());
            }
            if l && r {
                s.bispecial.insert(name);
            }
        }
        s
    })?;
    Ok(special)
}

/// Lengths `n ≤ bound` having a bispecial factor.
pub fn bispecial_lengths(bound: usize) -> Result<BTreeSet<usize>, AnalysisError> {
    Ok(window_stats(bound)?
        .into_iter()
        .filter(|s| s.bispecial > 0)
        .map(|s| s.n)
        .collect())
}

/// `{n in 1..=bound : encode(n) ∈ L(expr)}` for a regex over the digits 0 and 1.
pub fn regex_value_set(expr: &str, bound: u64) -> Result<BTreeSet<u64>, AnalysisError> {
    let alphabet = Alphabet::binary();
    let dfa = regex_to_dfa(expr, &alphabet).map_err(|e| AnalysisError::Domain(e.to_string()))?;
    Ok((1..=bound)
        .filter(|&n| {
            let word: Vec<usize> = P4Rep::encode_u64(n).digits().iter().map(|&d| d as usize).collect();
            dfa.accepts_indices(&word)
        })
        .collect())
}

/// Regex for the lengths of bispecial factors, in P4 representation.
pub const BISPECIAL_REGEX: &str = "{1,11,110}|(10)+{ε,0}|(1000)+{0,01,011,0110}";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_agrees_with_table() {
        let word = fixed_point_prefix(3000);
        let mut scan = FactorScan::new(&word);
        for n in 1..=60 {
            scan.advance();
            let table = FactorTable::build(&word, n);
            assert_eq!(scan.stats(word.len()).count, table.len(), "n = {n}");
            let recurrence = table
                .factors()
                .flat_map(|f| table.occurrences(f).unwrap().windows(2).map(|w| w[1] - w[0]))
                .max()
                .unwrap_or(0);
            assert_eq!(scan.stats(word.len()).recurrence, recurrence);
        }
    }

    #[test]
    fn table_occurrences_are_sorted_and_correct() {
        let word = fixed_point_prefix(2000);
        let table = FactorTable::build(&word, 7);
        for f in table.factors() {
            let occ = table.occurrences(f).unwrap();
            assert!(occ.windows(2).all(|w| w[0] < w[1]));
            assert!(occ.iter().all(|&i| &word[i..i + 7] == f));
        }
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(factor_complexity(1).unwrap(), 3);
        assert_eq!(factor_complexity(2).unwrap(), 5);
        assert_eq!(factor_complexity(100).unwrap(), 201);
        assert_eq!(factor_complexity(0), Err(AnalysisError::ZeroLength));
    }

    #[test]
    fn complexity_first_difference_is_two() {
        let stats = window_stats(120).unwrap();
        for w in stats.windows(2) {
            assert_eq!(w[1].count - w[0].count, 2);
        }
        assert!(stats.iter().all(|s| s.right_special == 2));
    }

    #[test]
    fn palindrome_list() {
        let expected: BTreeSet<String> = ["0", "1", "2", "121", "101", "010", "01210", "21012", "1012101"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(palindromes(9).unwrap(), expected);
        assert_eq!(palindromes(20).unwrap(), expected);
    }

    #[test]
    fn bispecial_examples() {
        let brute = bispecial_lengths(20).unwrap();
        let expected: BTreeSet<usize> = [1, 2, 3, 4, 6, 9, 12, 16].into_iter().collect();
        assert_eq!(brute, expected);
        let decoded: BTreeSet<usize> =
            regex_value_set(BISPECIAL_REGEX, 20).unwrap().into_iter().map(|n| n as usize).collect();
        assert_eq!(decoded, expected);
        assert!(!decoded.contains(&5));
    }

    #[test]
    fn special_factor_sets() {
        let s = special_factors(1).unwrap();
        assert_eq!(s.right.len(), 2);
        for n in 1..=12 {
            let s = special_factors(n).unwrap();
            assert_eq!(s.right.len(), 2);
            assert!(s.bispecial.iter().all(|b| s.left.contains(b) && s.right.contains(b)));
        }
    }
}
