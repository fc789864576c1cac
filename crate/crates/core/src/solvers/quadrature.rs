//! Sinc quadrature for `AA^(-alpha) f` (Bonito and Pasciak), the baseline
//! the rational solver is compared against.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::operators::SparseSpdOperator;

use super::{shifted_solve, SolveConfig, SolverError};

/// Ceiling that treats values within rounding of an integer as that integer,
/// so `(1 - alpha) k_Q` computed through `k'` keeps its exact value.
fn snapped_ceil(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub kprime: f64,
    /// Terms with negative index: `ceil(pi^2 / (4 alpha k'^2))`.
    pub m_neg: usize,
    /// Terms with positive index: `ceil(pi^2 / (4 (1 - alpha) k'^2))`.
    pub m_pos: usize,
}

impl QuadratureRule {
    pub fn new(alpha: f64, kprime: f64) -> Self {
        let base = PI * PI / (4.0 * kprime * kprime);
        QuadratureRule {
            alpha,
            kprime,
            m_neg: snapped_ceil(base / alpha),
            m_pos: snapped_ceil(base / (1.0 - alpha)),
        }
    }

    /// The rule with `k_Q = pi^2 / (4 alpha (1 - alpha) k'^2)`.
    pub fn from_kq(alpha: f64, kq: f64) -> Self {
        Self::new(alpha, kprime_from_kq(alpha, kq))
    }

    pub fn system_count(&self) -> usize {
        self.m_neg + self.m_pos + 1
    }

    /// `(weight, sigma)` per term: `u_Q = sum weight (sigma I + AA)^(-1) f`.
    pub fn terms(&self) -> Vec<(f64, f64)> {
        let (a, k) = (self.alpha, self.kprime);
        let pre = 2.0 * k * (PI * a).sin() / PI;
        (-(self.m_neg as i64)..=self.m_pos as i64)
            .map(|l| {
                let y = l as f64 * k;
                (pre * (2.0 * (a - 1.0) * y).exp(), (-2.0 * y).exp())
            })
            .collect()
    }
}

pub fn kprime_from_kq(alpha: f64, kq: f64) -> f64 {
    PI / (2.0 * (alpha * (1.0 - alpha) * kq).sqrt())
}

/// Midpoint of the interval of `k'` whose rule solves exactly `count`
/// systems, or `None` when no `k'` gives that count.
pub fn kprime_for_system_count(alpha: f64, count: usize) -> Option<f64> {
    if !(alpha > 0.0 && alpha < 1.0) || count < 3 {
        return None;
    }
    let a = PI * PI / (4.0 * alpha);
    let b = PI * PI / (4.0 * (1.0 - alpha));
    // The count only changes where a / k'^2 or b / k'^2 crosses an integer.
    let mut breaks: Vec<f64> = (1..=count).flat_map(|j| [(a / j as f64).sqrt(), (b / j as f64).sqrt()]).collect();
    breaks.push(0.0);
    breaks.push(2.0 * a.max(b).sqrt());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if mid > 0.0 && QuadratureRule::new(alpha, mid).system_count() == count {
            lo = lo.min(w[0]);
            hi = hi.max(w[1]);
        }
    }
    (lo < hi).then(|| 0.5 * (lo + hi))
}

/// `u_Q ~ AA^(-alpha) f` for the unnormalised `AA = scale * A`.
///
/// Returns the approximation and the number of solves.
pub fn quadrature_apply(
    a: &SparseSpdOperator,
    f: &[f64],
    alpha: f64,
    kprime: f64,
    cfg: &SolveConfig,
) -> Result<(Vec<f64>, usize), SolverError> {
    if !(kprime > 0.0) {
        return Err(SolverError::InvalidInput(format!("k' = {kprime} must be positive")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SolverError::InvalidInput(format!("alpha = {alpha} is not in (0, 1)")));
    }
    use rayon::prelude::*;
    let rule = QuadratureRule::new(alpha, kprime);
    let terms = rule.terms();
    // (sigma I + AA)^(-1) = (A - shift I)^(-1) / scale with shift = -sigma / scale.
    let sols: Vec<Result<Vec<f64>, SolverError>> = terms
        .par_iter()
        .map(|&(_, sigma)| {
            let shift = -sigma / a.scale;
            shifted_solve(a, shift, f, cfg)
                .map(|s| s.x)
                .map_err(|e| SolverError::AtShift { shift, source: Box::new(e) })
        })
        .collect();
    let mut u = vec![0.0; f.len()];
    for ((w, _), x) in terms.iter().zip(sols) {
        let x = x?;
        let c = w / a.scale;
        for (ui, xi) in u.iter_mut().zip(&x) {
            *ui += c * xi;
        }
    }
    Ok((u, rule.system_count()))
}
