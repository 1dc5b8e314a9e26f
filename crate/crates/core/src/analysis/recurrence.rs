//! Recurrence and appearance functions, and their piecewise closed forms.

use serde::Serialize;

use super::factors::window_stats;
use super::AnalysisError;
use crate::numeration::{decode_u64, x_u64};

/// `R(n)` for `n = 1..=max_len`: the largest gap between consecutive
/// occurrences of a length-`n` factor.
pub fn recurrence_r(max_len: usize) -> Result<Vec<usize>, AnalysisError> {
    Ok(window_stats(max_len)?.into_iter().map(|s| s.recurrence).collect())
}

/// `A(n)` for `n = 1..=max_len`: the latest first occurrence of a length-`n` factor.
pub fn appearance_a(max_len: usize) -> Result<Vec<usize>, AnalysisError> {
    Ok(window_stats(max_len)?.into_iter().map(|s| s.appearance).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BcKind {
    B,
    C,
}

/// Digits of `B_i` (`i ≥ 3`) or `C_i` (`i ≥ 2`).
pub fn bc_digits(kind: BcKind, index: u32) -> Result<String, AnalysisError> {
    match kind {
        BcKind::B if index >= 3 => {
            let k = (index - 3) / 2;
            let tail = if index % 2 == 1 { "10" } else { "100" };
            Ok(format!("1{}{tail}", "01".repeat(k as usize)))
        }
        BcKind::C if index >= 2 => {
            let k = (index - 2) / 4;
            let tail = ["", "0", "00", "001"][((index - 2) % 4) as usize];
            Ok(format!("10{}{tail}", "0010".repeat(k as usize)))
        }
        _ => Err(AnalysisError::Domain(format!("{kind:?}_{index} is not defined"))),
    }
}

pub fn bc_value(kind: BcKind, index: u32) -> Result<u64, AnalysisError> {
    let digits: Vec<u8> = bc_digits(kind, index)?.bytes().map(|b| b - b'0').collect();
    decode_u64(&digits).map_err(|e| AnalysisError::Domain(e.to_string()))
}

fn b(i: u32) -> u64 {
    bc_value(BcKind::B, i).expect("defined index")
}

fn c(i: u32) -> u64 {
    bc_value(BcKind::C, i).expect("defined index")
}

fn x(i: u32) -> u64 {
    x_u64(i as i64).expect("index in range")
}

/// The piecewise formula for `R(n)`, if some case covers `n`.
pub fn formula_r(n: u64) -> Option<u64> {
    (3..40).find_map(|i| {
        if b(i) <= n && n <= c(i + 1) {
            Some(x(i + 4))
        } else if c(i + 1) < n && n < b(i + 1) {
            Some(x(i + 4) + x(i + 2))
        } else {
            None
        }
    })
}

/// The piecewise formula for `A(n)`, if some case covers `n`.
pub fn formula_a(n: u64) -> Option<u64> {
    (1..20).find_map(|i| {
        if b(2 * i + 1) < n && n <= c(2 * i + 2) {
            Some(x(2 * i + 4) - 1)
        } else if c(2 * i + 2) < n && n < b(2 * i + 2) {
            Some(c(2 * i + 4))
        } else if b(2 * i + 2) <= n && n <= c(2 * i + 3) {
            Some(x(2 * i + 5) - 1)
        } else if c(2 * i + 3) < n && n <= b(2 * i + 3) {
            Some(c(2 * i + 5))
        } else {
            None
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaRow {
    pub n: usize,
    pub brute_r: usize,
    pub formula_r: Option<u64>,
    pub brute_a: usize,
    pub formula_a: Option<u64>,
}

impl FormulaRow {
    pub fn r_agrees(&self) -> bool {
        self.formula_r == Some(self.brute_r as u64)
    }

    pub fn a_agrees(&self) -> bool {
        self.formula_a == Some(self.brute_a as u64)
    }
}

/// Brute-force `R` and `A` next to the piecewise formulas for `from..=to`.
pub fn formula_diagnostic(from: usize, to: usize) -> Result<Vec<FormulaRow>, AnalysisError> {
    let stats = window_stats(to)?;
    Ok(stats[from.max(1) - 1..]
        .iter()
        .map(|s| FormulaRow {
            n: s.n,
            brute_r: s.recurrence,
            formula_r: formula_r(s.n as u64),
            brute_a: s.appearance,
            formula_a: formula_a(s.n as u64),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bc_examples() {
        assert_eq!(bc_value(BcKind::B, 3).unwrap(), 6);
        assert_eq!(bc_value(BcKind::C, 2).unwrap(), 2);
        assert_eq!(bc_value(BcKind::C, 3).unwrap(), 4);
        assert_eq!(bc_digits(BcKind::B, 6).unwrap(), "101100");
        assert_eq!(bc_digits(BcKind::C, 9).unwrap(), "100010001");
        assert!(bc_value(BcKind::B, 2).is_err());
        assert!(bc_value(BcKind::C, 1).is_err());
    }

    #[test]
    fn small_values() {
        assert_eq!(recurrence_r(5).unwrap(), vec![5, 12, 16, 21, 28]);
        assert_eq!(appearance_a(5).unwrap(), vec![2, 4, 7, 11, 13]);
    }

    #[test]
    fn linear_bounds_and_monotonicity() {
        let stats = window_stats(200).unwrap();
        for s in &stats {
            assert!(s.recurrence as f64 <= 6.40431359 * s.n as f64);
            assert!(s.appearance as f64 <= 3.6494360 * s.n as f64);
        }
        assert!(stats.windows(2).all(|w| w[0].recurrence <= w[1].recurrence));
        assert!(stats.windows(2).all(|w| w[0].appearance <= w[1].appearance));
    }

    #[test]
    fn formula_diagnostic_rows() {
        let rows = formula_diagnostic(6, 60).unwrap();
        assert_eq!(rows.len(), 55);
        assert_eq!(rows[0].n, 6);
    }
}
