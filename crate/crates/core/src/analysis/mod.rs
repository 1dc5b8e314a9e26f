//! Finite verification of combinatorial properties of **p** by brute force
//! over stabilized prefixes, alongside the closed forms they are compared to.

pub mod abelian;
pub mod characterization;
pub mod constants;
pub mod factors;
pub mod recurrence;
pub mod repetitions;

use thiserror::Error;

pub use abelian::{abelian_complexity, max_imbalance, AbelianResult, ImbalanceWitness};
pub use characterization::{explore_language, proof_identities, ExplorationReport, IdentityCheck, FORBIDDEN};
pub use constants::{constants, density_check, ConstantsReport, DensityReport};
pub use factors::{
    bispecial_lengths, factor_complexity, palindromes, regex_value_set, special_factors, window_stats, FactorTable,
    SpecialFactors, WindowStats,
};
pub use recurrence::{appearance_a, bc_value, formula_diagnostic, recurrence_r, BcKind, FormulaRow};
pub use repetitions::{
    exponent_family, find_cube, max_exponent, overlap_orders, sum_identity_check, RepetitionWitness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("factor length must be at least 1")]
    ZeroLength,
    #[error("results for length {n} still changed at prefix {prefix}")]
    Instability { n: usize, prefix: usize },
    #[error("{0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("property violated: {0}")]
    Violation(String),
}

/// Number of times an analysis prefix is doubled before giving up.
pub const MAX_DOUBLINGS: u32 = 4;

/// First prefix length tried for factors of length `n`: `max(10⁴, ⌈8ξn⌉)`,
/// where `ξn` bounds the recurrence function.
pub fn initial_prefix(n: usize) -> usize {
    let scaled = (8.0 * constants::XI * n as f64).ceil() as usize;
    scaled.max(10_000)
}

/// Runs `eval` on prefixes `M, 2M, 4M, …` starting from `initial_prefix(n)`
/// and returns the first value that repeats across one doubling.
pub(crate) fn stabilize<T: PartialEq>(
    n: usize,
    mut eval: impl FnMut(usize) -> T,
) -> Result<(T, usize), AnalysisError> {
    let mut m = initial_prefix(n);
    let mut current = eval(m);
    for _ in 0..MAX_DOUBLINGS {
        let next = eval(2 * m);
        if next == current {
            return Ok((current, m));
        }
        current = next;
        m *= 2;
    }
    Err(AnalysisError::Instability { n, prefix: m })
}
