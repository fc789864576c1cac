//! A priori error bounds for composed and higher-`beta` approximations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("{kind:?} bound takes {expected} errors and exponents, got {got}")]
    BadArity { kind: BoundKind, expected: &'static str, got: usize },
    #[error("complementary pair needs alpha_1 + alpha_2 = 1, got {0}")]
    NotComplementary(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Two or three steps measured in the `A`-norm ratio; grows with `cond`.
    ConditionDependent,
    /// `r_(1 - alpha) r_alpha` as an approximation of `t`.
    ComplementaryPair,
}

/// `E_2 cond^a_1 + E_1 cond^a_2 + E_1 E_2 cond`.
pub fn two_step_bound(e1: f64, e2: f64, a1: f64, a2: f64, cond: f64) -> f64 {
    e2 * cond.powf(a1) + e1 * cond.powf(a2) + e1 * e2 * cond
}

/// Three equal steps of `alpha = 1/4`: `E^3 cond^2 + 3 E^2 cond^(5/4) + 3 E cond^(1/2)`.
pub fn three_step_bound(e: f64, cond: f64) -> f64 {
    e.powi(3) * cond * cond + 3.0 * e * e * cond.powf(1.25) + 3.0 * e * cond.sqrt()
}

/// `E_1 + E_2 - E_1 E_2`.
pub fn complementary_pair_bound(e1: f64, e2: f64) -> f64 {
    e1 + e2 - e1 * e2
}

/// Dispatches on `kind` and the number of steps.
pub fn multi_step_bound(kind: BoundKind, errors: &[f64], exponents: &[f64], cond: f64) -> Result<f64, BoundError> {
    let got = errors.len();
    match kind {
        BoundKind::ComplementaryPair => {
            if got != 2 || exponents.len() != 2 {
                return Err(BoundError::BadArity { kind, expected: "2", got });
            }
            let s = exponents[0] + exponents[1];
            if (s - 1.0).abs() > 1e-12 {
                return Err(BoundError::NotComplementary(s));
            }
            Ok(complementary_pair_bound(errors[0], errors[1]))
        }
        BoundKind::ConditionDependent => match (got, exponents.len()) {
            (2, 2) => Ok(two_step_bound(errors[0], errors[1], exponents[0], exponents[1], cond)),
            (3, 3) if exponents.iter().all(|&a| (a - 0.25).abs() < 1e-12) => {
                // Equal errors by construction; take the largest to stay a bound.
                Ok(three_step_bound(errors.iter().copied().fold(0.0, f64::max), cond))
            }
            _ => Err(BoundError::BadArity { kind, expected: "2, or 3 with alpha_i = 1/4", got }),
        },
    }
}

/// `a_beta eps` with `a_1 = 1`, `a_(b + 1) = 1 + (1 + eps) cond a_b`: the
/// relative accuracy of `beta` consecutive solves each accurate to `eps`.
pub fn beta_accuracy_bound(beta: u32, eps: f64, cond: f64) -> f64 {
    beta_accuracy_factor(beta, eps, cond) * eps
}

/// The factor `a_beta` of [`beta_accuracy_bound`].
pub fn beta_accuracy_factor(beta: u32, eps: f64, cond: f64) -> f64 {
    let mut a = 1.0;
    for _ in 1..beta {
        a = 1.0 + (1.0 + eps) * cond * a;
    }
    a
}
