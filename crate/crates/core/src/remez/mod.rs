//! Best uniform rational approximation of `t^(beta - alpha)` on `[0, 1]` by a
//! modified Remez exchange in the shifted Chebyshev basis.

mod extrema;
mod leveled;
mod reference;
mod target;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::xnum::{ChebPoly, XScalar, XnumError, DEFAULT_PRECISION};

pub use extrema::{refine_extrema, Refined};
pub use leveled::solve_leveled_system;
pub use reference::{geometric_reference, initialize_reference, uniform_reference};
pub use target::Target;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RemezError {
    #[error("no convergence after {iterations} iterations (relative spread {last_spread:e})")]
    NonConvergence { iterations: usize, last_spread: f64 },
    #[error("leveled system did not settle within {iterations} inner iterations")]
    InnerDiverged { iterations: usize },
    #[error("no sign-alternating initial approximation could be built")]
    BadReference,
    #[error("residual lost sign alternation at iteration {iteration}")]
    AlternationLost { iteration: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numeric(#[from] XnumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedReference {
    Uniform,
    GeometricNearZero,
}

impl SeedReference {
    fn other(self) -> Self {
        match self {
            SeedReference::Uniform => SeedReference::GeometricNearZero,
            SeedReference::GeometricNearZero => SeedReference::Uniform,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemezConfig {
    pub max_outer: usize,
    pub max_inner: usize,
    /// Convergence when `(max eta - min eta) / max eta` drops to this value.
    pub delta_rel: f64,
    pub grid_refinements: usize,
    pub grid_points_per_interval: usize,
    pub precision_bits: u32,
    pub seed_reference: SeedReference,
    /// Extra exchange steps taken after `delta_rel` is met, kept while the
    /// spread keeps shrinking.
    pub polish_steps: usize,
}

impl Default for RemezConfig {
    fn default() -> Self {
        RemezConfig {
            max_outer: 50,
            max_inner: 25,
            delta_rel: 1e-3,
            grid_refinements: 4,
            grid_points_per_interval: 12,
            precision_bits: DEFAULT_PRECISION,
            seed_reference: SeedReference::Uniform,
            polish_steps: 4,
        }
    }
}

impl RemezConfig {
    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn validate(&self) -> Result<(), RemezError> {
        let bad = |s: &str| Err(RemezError::InvalidInput(s.to_string()));
        if self.max_outer == 0 || self.max_inner == 0 {
            return bad("iteration caps must be positive");
        }
        if self.grid_refinements == 0 || self.grid_points_per_interval < 3 {
            return bad("grid needs at least one refinement and three points");
        }
        if !(self.delta_rel > 0.0 && self.delta_rel < 1.0) {
            return bad("delta_rel must lie in (0, 1)");
        }
        if self.precision_bits < crate::xnum::MIN_PRECISION {
            return bad("precision below 53 bits");
        }
        Ok(())
    }
}

/// `P(s) / Q(s)` with both factors in the shifted Chebyshev basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebRational {
    pub num: ChebPoly,
    pub den: ChebPoly,
}

impl ChebRational {
    pub fn eval(&self, s: &XScalar) -> XScalar {
        self.num.eval(s) / self.den.eval(s)
    }

    pub fn m(&self) -> usize {
        self.num.degree()
    }

    pub fn k(&self) -> usize {
        self.den.degree()
    }
}

/// The β-BURA `r(t) = P(t) / Q(t)` of `t^(beta - alpha)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalApproximant {
    pub alpha: f64,
    pub beta: u32,
    pub m: usize,
    pub k: usize,
    pub num: ChebPoly,
    /// Constant Chebyshev coefficient equal to one.
    pub den: ChebPoly,
    pub error: XScalar,
    /// Points in `t`, strictly increasing, where the residual equioscillates.
    pub extreme_points: Vec<XScalar>,
    pub iterations: usize,
    pub precision_bits: u32,
}

impl fmt::Debug for RationalApproximant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalApproximant")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("m", &self.m)
            .field("k", &self.k)
            .field("error", &self.error)
            .field("iterations", &self.iterations)
            .field("precision_bits", &self.precision_bits)
            .finish()
    }
}

impl RationalApproximant {
    pub fn target(&self) -> Target {
        Target::new(self.alpha, self.beta, self.precision_bits)
    }

    pub fn rational(&self) -> ChebRational {
        ChebRational { num: self.num.clone(), den: self.den.clone() }
    }

    /// `r(t)`.
    pub fn eval_t(&self, t: &XScalar) -> XScalar {
        let s = t * 2.0 - 1.0;
        self.num.eval(&s) / self.den.eval(&s)
    }

    /// `t^(beta - alpha) - r(t)`.
    pub fn residual_t(&self, t: &XScalar) -> XScalar {
        let s = t * 2.0 - 1.0;
        self.target().eval(&s) - self.num.eval(&s) / self.den.eval(&s)
    }

    pub fn error_f64(&self) -> f64 {
        self.error.to_f64()
    }
}

fn check_inputs(alpha: f64, beta: u32, m: usize, k: usize, cfg: &RemezConfig) -> Result<(), RemezError> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(RemezError::InvalidInput(format!("alpha = {alpha} is not in (0, 1)")));
    }
    if beta < 1 {
        return Err(RemezError::InvalidInput("beta must be at least 1".into()));
    }
    if m >= k + beta as usize {
        return Err(RemezError::InvalidInput(format!("need m < k + beta, got m = {m}, k = {k}, beta = {beta}")));
    }
    if m + k + 2 > crate::xnum::DEFAULT_DENSE_CAP {
        return Err(RemezError::InvalidInput("degrees exceed the dense solver cap".into()));
    }
    Ok(())
}

struct Attempt {
    rational: ChebRational,
    error: XScalar,
    points: Vec<XScalar>,
    spread: f64,
    iterations: usize,
}

/// Runs the exchange from one starting reference.
fn run_from(
    target: &Target,
    points0: Vec<XScalar>,
    r0: ChebRational,
    cfg: &RemezConfig,
) -> Result<Attempt, RemezError> {
    let prec = cfg.precision_bits;
    let f0: Vec<XScalar> = points0.iter().map(|s| target.eval(s)).collect();
    // Starting level: average signed residual of r0 on the reference.
    let mut e = XScalar::zero(prec);
    for (i, (s, fv)) in points0.iter().zip(&f0).enumerate() {
        let res = fv - r0.eval(s);
        if leveled::sigma(i) < 0 {
            e -= res;
        } else {
            e += res;
        }
    }
    e = e / XScalar::from_i64(points0.len() as i64, prec);

    let mut points = points0;
    let mut r = r0;
    let mut best: Option<Attempt> = None;
    let mut converged_at: Option<usize> = None;
    let mut last_spread = f64::INFINITY;

    for n in 1..=cfg.max_outer {
        let refined = refine_extrema(target, &r, &points, cfg).map_err(|err| match err {
            RemezError::AlternationLost { .. } => RemezError::AlternationLost { iteration: n },
            other => other,
        })?;
        let spread = refined.relative_spread();
        last_spread = spread;
        let improved = best.as_ref().map_or(true, |b| spread < b.spread);
        if improved {
            best = Some(Attempt {
                rational: r.clone(),
                error: e.abs(),
                points: points.clone(),
                spread,
                iterations: n,
            });
        }
        match converged_at {
            None if spread <= cfg.delta_rel => converged_at = Some(n),
            Some(c) if !improved || n >= c + cfg.polish_steps => break,
            _ => {}
        }
        if spread < 1e-12 || (converged_at.is_some() && spread < 1e-9) {
            break;
        }

        let fvals: Vec<XScalar> = refined.points.iter().map(|s| target.eval(s)).collect();
        let (r_new, e_new) = solve_leveled_system(&refined.points, &fvals, &e, &r, cfg)?;
        if !leveled::denominator_sign_constant(&r_new.den, target) {
            break;
        }
        r = r_new;
        e = e_new;
        points = refined.points;
    }

    match (converged_at, best) {
        (Some(_), Some(b)) if b.spread <= cfg.delta_rel => Ok(b),
        _ => Err(RemezError::NonConvergence { iterations: cfg.max_outer, last_spread }),
    }
}

/// Modified Remez algorithm for the β-BURA of `t^(beta - alpha)` with
/// numerator degree `m` and denominator degree `k`.
pub fn compute_bura(
    alpha: f64,
    beta: u32,
    m: usize,
    k: usize,
    cfg: &RemezConfig,
) -> Result<RationalApproximant, RemezError> {
    check_inputs(alpha, beta, m, k, cfg)?;
    let target = Target::new(alpha, beta, cfg.precision_bits);

    let mut failures = Vec::new();
    for seed in [cfg.seed_reference, cfg.seed_reference.other()] {
        let attempt = reference::initialize_with(&target, m, k, seed, cfg)
            .and_then(|(pts, r0)| run_from(&target, pts, r0, cfg));
        match attempt {
            Ok(a) => return Ok(finish(alpha, beta, m, k, a, cfg)),
            Err(err @ RemezError::InvalidInput(_)) => return Err(err),
            Err(err) => failures.push(err),
        }
    }
    // Degree continuation: the (m - 1, k - 1) extreme points make a much
    // better start than either fixed seed when the precision is tight.
    if m >= 1 && k >= 1 {
        let attempt = compute_bura(alpha, beta, m - 1, k - 1, cfg).and_then(|lower| {
            let pts = reference::continuation_reference(&lower.extreme_points, cfg.precision_bits);
            let r0 = reference::starting_rational(&target, &pts, m, k)?;
            run_from(&target, pts, r0, cfg)
        });
        match attempt {
            Ok(a) => return Ok(finish(alpha, beta, m, k, a, cfg)),
            Err(err) => failures.push(err),
        }
    }
    Err(aggregate(failures, cfg))
}

fn aggregate(failures: Vec<RemezError>, cfg: &RemezConfig) -> RemezError {
    if failures.iter().all(|e| matches!(e, RemezError::BadReference)) {
        return RemezError::BadReference;
    }
    if let Some(inner) = failures.iter().find(|e| matches!(e, RemezError::InnerDiverged { .. })) {
        if failures.iter().all(|e| matches!(e, RemezError::InnerDiverged { .. })) {
            return inner.clone();
        }
    }
    let last_spread = failures
        .iter()
        .filter_map(|e| match e {
            RemezError::NonConvergence { last_spread, .. } => Some(*last_spread),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    RemezError::NonConvergence { iterations: cfg.max_outer, last_spread }
}

fn finish(alpha: f64, beta: u32, m: usize, k: usize, a: Attempt, cfg: &RemezConfig) -> RationalApproximant {
    let half = XScalar::from_ratio(1, 2, cfg.precision_bits);
    let extreme_points = a.points.iter().map(|s| (s + 1.0) * &half).collect();
    RationalApproximant {
        alpha,
        beta,
        m,
        k,
        num: a.rational.num,
        den: a.rational.den,
        error: a.error,
        extreme_points,
        iterations: a.iterations,
        precision_bits: cfg.precision_bits,
    }
}

#[cfg(test)]
mod tests;

