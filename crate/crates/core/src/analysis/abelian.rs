//! Parikh vectors of factors: abelian complexity and balance.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{initial_prefix, AnalysisError, MAX_DOUBLINGS};
use crate::word::fixed_point_prefix;

/// The sixteen offsets `ψ(w) − u(n)` that can occur.
pub const TRIPLES: [[u8; 3]; 16] = [
    [0, 0, 1],
    [0, 0, 2],
    [0, 1, 0],
    [0, 1, 1],
    [0, 1, 2],
    [0, 2, 0],
    [0, 2, 1],
    [1, 0, 0],
    [1, 0, 1],
    [1, 0, 2],
    [1, 1, 0],
    [1, 1, 1],
    [1, 2, 0],
    [2, 0, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The eighteen possible offset sets, `S₁..S₁₈`.
pub const OFFSET_SETS: [&[[u8; 3]]; 18] = [
    &[[0, 0, 1], [0, 1, 0], [1, 0, 0]],
    &[[0, 1, 1], [1, 0, 1], [1, 1, 0]],
    &[[0, 1, 1], [1, 0, 1], [1, 1, 0], [2, 0, 0]],
    &[[0, 0, 2], [0, 1, 1], [1, 0, 1], [1, 1, 0]],
    &[[0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0]],
    &[[0, 0, 2], [0, 1, 1], [1, 0, 1], [1, 1, 0], [2, 0, 0]],
    &[[0, 1, 2], [1, 0, 2], [1, 1, 1], [2, 0, 1], [2, 1, 0]],
    &[[0, 2, 1], [1, 1, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
    &[[0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0], [2, 0, 0]],
    &[[0, 0, 2], [0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0]],
    &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 1, 1], [1, 2, 0]],
    &[[0, 1, 2], [0, 2, 1], [1, 1, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
    &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 1, 1], [2, 0, 1], [2, 1, 0]],
    &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 1, 1], [1, 2, 0], [2, 1, 0]],
    &[[0, 1, 2], [1, 0, 2], [1, 1, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
    &[[0, 2, 1], [1, 0, 2], [1, 1, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
    &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 1, 1], [1, 2, 0], [2, 0, 1]],
    &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 1, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
];

/// Letter counts of every prefix of a word.
#[derive(Clone, Debug)]
pub struct PrefixCounts {
    counts: Vec<[u32; 3]>,
}

impl PrefixCounts {
    pub fn new(word: &[u8]) -> Self {
        let mut counts = Vec::with_capacity(word.len() + 1);
        let mut c = [0u32; 3];
        counts.push(c);
        for &a in word {
            c[a as usize] += 1;
            counts.push(c);
        }
        PrefixCounts { counts }
    }

    pub fn word_len(&self) -> usize {
        self.counts.len() - 1
    }

    /// Parikh vector of `word[i..i + n]`.
    pub fn window(&self, i: usize, n: usize) -> [u32; 3] {
        let (a, b) = (self.counts[i + n], self.counts[i]);
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    /// Per-letter minimum over the length-`n` windows inside the first `prefix` letters.
    fn minimum(&self, n: usize, prefix: usize) -> [u32; 3] {
        let mut u = [u32::MAX; 3];
        for i in 0..=prefix - n {
            let w = self.window(i, n);
            for a in 0..3 {
                u[a] = u[a].min(w[a]);
            }
        }
        u
    }

    /// Distinct offsets from the minimum among length-`n` windows.
    fn offsets(&self, n: usize, prefix: usize) -> BTreeSet<[u32; 3]> {
        let u = self.minimum(n, prefix);
        let mut small = 0u32;
        let mut large = BTreeSet::new();
        for i in 0..=prefix - n {
            let w = self.window(i, n);
            let d = [w[0] - u[0], w[1] - u[1], w[2] - u[2]];
            if d.iter().all(|&x| x < 3) {
                small |= 1 << (d[0] * 9 + d[1] * 3 + d[2]);
            } else {
                large.insert(d);
            }
        }
        for code in 0..27u32 {
            if small & (1 << code) != 0 {
                large.insert([code / 9, code / 3 % 3, code % 3]);
            }
        }
        large
    }

    fn spread(&self, n: usize, prefix: usize) -> BalanceRow {
        let mut lo = [(u32::MAX, 0usize); 3];
        let mut hi = [(0u32, 0usize); 3];
        for i in 0..=prefix - n {
            let w = self.window(i, n);
            for a in 0..3 {
                if w[a] < lo[a].0 {
                    lo[a] = (w[a], i);
                }
                if w[a] > hi[a].0 {
                    hi[a] = (w[a], i);
                }
            }
        }
        BalanceRow {
            n,
            imbalance: [0, 1, 2].map(|a| hi[a].0 - lo[a].0),
            witness: [0, 1, 2].map(|a| (hi[a].1, lo[a].1)),
        }
    }
}

/// Runs `eval(n, M)` over `M = initial_prefix(n), 2M, …` until one doubling
/// leaves the value unchanged, growing the shared prefix when needed.
fn stabilized_range<T: PartialEq>(
    max_len: usize,
    mut eval: impl FnMut(&PrefixCounts, usize, usize) -> T,
) -> Result<Vec<T>, AnalysisError> {
    if max_len == 0 {
        return Err(AnalysisError::ZeroLength);
    }
    let mut size = 2 * initial_prefix(max_len);
    let mut counts = PrefixCounts::new(&fixed_point_prefix(size));
    let mut out = Vec::with_capacity(max_len);
    for n in 1..=max_len {
        let mut m = initial_prefix(n);
        let mut current = eval(&counts, n, m);
        let mut stable = false;
        for _ in 0..MAX_DOUBLINGS {
            while 2 * m > size {
                size *= 2;
                counts = PrefixCounts::new(&fixed_point_prefix(size));
            }
            let next = eval(&counts, n, 2 * m);
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
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianResult {
    pub n: usize,
    pub count: usize,
    pub offsets: Vec<[u32; 3]>,
    /// Index `k` of the matching set `S_k`, 1-based.
    pub set_index: Option<usize>,
}

impl AbelianResult {
    fn new(n: usize, offsets: BTreeSet<[u32; 3]>) -> Self {
        let offsets: Vec<[u32; 3]> = offsets.into_iter().collect();
        let set_index = OFFSET_SETS.iter().position(|s| {
            let mut s: Vec<[u32; 3]> = s.iter().map(|t| t.map(u32::from)).collect();
            s.sort();
            s == offsets
        });
        AbelianResult {
            n,
            count: offsets.len(),
            offsets,
            set_index: set_index.map(|k| k + 1),
        }
    }

    pub fn within_triples(&self) -> bool {
        self.offsets
            .iter()
            .all(|o| TRIPLES.iter().any(|t| t.map(u32::from) == *o))
    }
}

/// Abelian complexity with offset sets for every length `1..=max_len`.
/// Fails with a violation if some offset set is not one of `S₁..S₁₈`.
pub fn abelian_complexity(max_len: usize) -> Result<Vec<AbelianResult>, AnalysisError> {
    let rows = stabilized_range(max_len, |pc, n, m| pc.offsets(n, m))?;
    let results: Vec<AbelianResult> = rows
        .into_iter()
        .enumerate()
        .map(|(i, offsets)| AbelianResult::new(i + 1, offsets))
        .collect();
    if let Some(bad) = results.iter().find(|r| r.set_index.is_none() || !r.within_triples()) {
        return Err(AnalysisError::Violation(format!(
            "offset set {:?} at n = {} is not one of the eighteen",
            bad.offsets, bad.n
        )));
    }
    Ok(results)
}

/// Distinct Parikh vectors of length-`n` windows, by hashing the vectors directly.
pub fn abelian_count_direct(word: &[u8], n: usize) -> usize {
    let pc = PrefixCounts::new(word);
    (0..=word.len() - n).map(|i| pc.window(i, n)).collect::<HashSet<_>>().len()
}

/// Per-letter spread of counts among length-`n` factors, with the starts of
/// a window attaining the maximum and one attaining the minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceRow {
    pub n: usize,
    pub imbalance: [u32; 3],
    #[serde(skip)]
    pub witness: [(usize, usize); 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImbalanceWitness {
    pub n: usize,
    pub letter: u8,
    pub imbalance: u32,
    pub high_start: usize,
    pub low_start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImbalanceReport {
    pub max_len: usize,
    /// Maximum over all lengths, per letter.
    pub per_letter: [u32; 3],
    pub rows: Vec<BalanceRow>,
    /// The shortest length at which the overall maximum is attained.
    pub witness: ImbalanceWitness,
}

/// Largest count difference per letter among equal-length factors of length ≤ `max_len`.
pub fn max_imbalance(max_len: usize) -> Result<ImbalanceReport, AnalysisError> {
    let rows = stabilized_range(max_len, |pc, n, m| {
        let mut row = pc.spread(n, m);
        // Witness positions depend on the prefix; only the spread must stabilize.
        row.witness = [(0, 0); 3];
        row
    })?;
    let word = fixed_point_prefix(2 * initial_prefix(max_len));
    let pc = PrefixCounts::new(&word);
    let rows: Vec<BalanceRow> = rows
        .into_iter()
        .map(|r| pc.spread(r.n, initial_prefix(r.n).min(word.len())))
        .collect();
    let per_letter = [0, 1, 2].map(|a| rows.iter().map(|r| r.imbalance[a]).max().unwrap_or(0));
    let top = *per_letter.iter().max().unwrap();
    let (row, letter) = rows
        .iter()
        .find_map(|r| (0..3).find(|&a| r.imbalance[a] == top).map(|a| (r, a)))
        .expect("nonempty");
    let (high_start, low_start) = row.witness[letter];
    Ok(ImbalanceReport {
        max_len,
        per_letter,
        witness: ImbalanceWitness {
            n: row.n,
            letter: letter as u8,
            imbalance: top,
            high_start,
            low_start,
        },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Parikh;

    #[test]
    fn offset_sets_use_listed_triples() {
        for s in OFFSET_SETS {
            assert!(s.iter().all(|t| TRIPLES.contains(t)));
        }
        let distinct: BTreeSet<Vec<[u8; 3]>> = OFFSET_SETS.iter().map(|s| s.to_vec()).collect();
        assert_eq!(distinct.len(), 18);
    }

    #[test]
    fn abelian_examples() {
        let r = abelian_complexity(30).unwrap();
        assert_eq!(r[0].count, 3);
        assert_eq!(r[0].set_index, Some(1));
        assert_eq!(r[1].count, 3);
        assert!(r.iter().all(|x| (3..=7).contains(&x.count)));
    }

    #[test]
    fn two_counting_routes_agree() {
        let r = abelian_complexity(300).unwrap();
        let word = fixed_point_prefix(2 * initial_prefix(300));
        for x in &r {
            assert_eq!(abelian_count_direct(&word, x.n), x.count, "n = {}", x.n);
        }
    }

    #[test]
    fn imbalance_is_two_with_witness() {
        let report = max_imbalance(200).unwrap();
        assert_eq!(report.rows[0].imbalance, [1, 1, 1]);
        assert_eq!(report.per_letter.iter().max(), Some(&2));
        let w = &report.witness;
        assert_eq!(w.imbalance, 2);
        let word = fixed_point_prefix(w.high_start.max(w.low_start) + w.n);
        let hi = Parikh::of(&word[w.high_start..w.high_start + w.n]).0[w.letter as usize];
        let lo = Parikh::of(&word[w.low_start..w.low_start + w.n]).0[w.letter as usize];
        assert_eq!(hi - lo, 2);
    }
}
