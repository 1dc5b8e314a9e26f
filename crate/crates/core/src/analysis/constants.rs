//! Algebraic constants of the numeration system and letter densities of **p**.

use serde::Serialize;

use super::AnalysisError;
use crate::numeration::x_u64;
use crate::word::{Morphism, Parikh};

/// `ξ = 2β₁² − β₁ + 2`, the slope bounding the recurrence function.
pub const XI: f64 = 6.404_313_580_736_185;
/// `γ`, one less than the critical exponent.
pub const GAMMA: f64 = 1.480_862_716_147_237;

/// Real root of `X³ − 2X² + X − 1`, by Newton's method from 1.75 with a
/// bisection fallback on `[1, 2]`.
pub fn beta1() -> Result<f64, AnalysisError> {
    let f = |x: f64| ((x - 2.0) * x + 1.0) * x - 1.0;
    let df = |x: f64| (3.0 * x - 4.0) * x + 1.0;
    let mut x = 1.75;
    for _ in 0..100 {
        let step = f(x) / df(x);
        x -= step;
        if step.abs() < 1e-16 {
            return Ok(x);
        }
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if f(lo).abs() < 1e-12 {
        Ok(lo)
    } else {
        Err(AnalysisError::Numeric("root of X^3 - 2X^2 + X - 1 did not converge".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub beta1: f64,
    /// `|β₂| = |β₃|`, computed from the complex pair.
    pub beta2_modulus: f64,
    pub gamma: f64,
    pub gamma_plus_one: f64,
    pub xi: f64,
    pub zeta: f64,
    /// `β₁³ − 2β₁² + β₁ − 1`.
    pub beta1_residual: f64,
    /// `5(γ+1)³ − 26(γ+1)² + 43(γ+1) − 23`.
    pub gamma_residual: f64,
    /// `max(||β₂| − (β₁ − 1)|, ||β₂| − √(1/β₁)|)`.
    pub modulus_residual: f64,
}

impl ConstantsReport {
    pub fn within(&self, tolerance: f64) -> bool {
        [self.beta1_residual, self.gamma_residual, self.modulus_residual]
            .iter()
            .all(|r| r.abs() < tolerance)
    }
}

pub fn constants() -> Result<ConstantsReport, AnalysisError> {
    let b = beta1()?;
    let g1 = (8.0 - b + 2.0 * b * b) / 5.0;
    // The other roots solve X² + (β₁ − 2)X + 1/β₁ = 0.
    let re = (2.0 - b) / 2.0;
    let im = (4.0 / b - (b - 2.0) * (b - 2.0)).sqrt() / 2.0;
    let modulus = re.hypot(im);
    Ok(ConstantsReport {
        beta1: b,
        beta2_modulus: modulus,
        gamma: g1 - 1.0,
        gamma_plus_one: g1,
        xi: 2.0 * b * b - b + 2.0,
        zeta: 2.0 * b * b - 2.0 * b + 1.0,
        beta1_residual: ((b - 2.0) * b + 1.0) * b - 1.0,
        gamma_residual: ((5.0 * g1 - 26.0) * g1 + 43.0) * g1 - 23.0,
        modulus_residual: (modulus - (b - 1.0)).abs().max((modulus - (1.0 / b).sqrt()).abs()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub k: u32,
    pub length: u64,
    pub counts: Parikh,
    pub measured: [f64; 3],
    pub expected: [f64; 3],
    pub max_error: f64,
}

/// Letter frequencies in `h^k(0)` against `1/β², 1/β² + 1/β⁴, 1/β³ + 1/β⁵`.
pub fn density_check(k: u32) -> Result<DensityReport, AnalysisError> {
    if k < 5 {
        return Err(AnalysisError::Domain("density check needs k >= 5".into()));
    }
    let word = Morphism::p().power(0, k).map_err(|e| AnalysisError::Domain(e.to_string()))?;
    let counts = Parikh::of(&word);
    let length = x_u64(k as i64 + 1).expect("index in range");
    if counts.total() != length {
        return Err(AnalysisError::Violation(format!(
            "|h^{k}(0)| = {} differs from X_{}",
            counts.total(),
            k + 1
        )));
    }
    let b = beta1()?;
    let expected = [b.powi(-2), b.powi(-2) + b.powi(-4), b.powi(-3) + b.powi(-5)];
    let measured = counts.0.map(|c| c as f64 / length as f64);
    let max_error = (0..3).map(|a| (measured[a] - expected[a]).abs()).fold(0.0, f64::max);
    Ok(DensityReport {
        k,
        length,
        counts,
        measured,
        expected,
        max_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values() {
        let c = constants().unwrap();
        assert!((c.beta1 - 1.754_877_666_246_692_760).abs() < 1e-12);
        assert!((c.gamma_plus_one - 2.480_862_716_147_237).abs() < 1e-12);
        assert!((c.xi - 6.40431358).abs() < 1e-6);
        assert!((c.zeta - 3.6494359).abs() < 1e-6);
        assert!((c.xi - XI).abs() < 1e-12);
        assert!((c.gamma - GAMMA).abs() < 1e-12);
        assert!(c.within(1e-9));
    }

    #[test]
    fn densities() {
        let d = density_check(20).unwrap();
        assert!(d.max_error < 1e-6);
        assert!((d.measured[0] - 0.324_717_957_244_746).abs() < 1e-6);
        assert!((d.measured[2] - 0.245_122_333_753_3).abs() < 1e-6);
        assert_eq!(d.counts.total(), d.length);
        assert!((d.expected.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(density_check(4).is_err());
    }
}
