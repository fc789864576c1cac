//! Shifted SPD solves and the fractional solution engines built on them.

mod apply;
mod bounds;
mod krylov;
mod quadrature;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operators::SparseSpdOperator;

pub use apply::{bura_apply, bura_apply_product, multi_step_apply, ApplyConfig, FracSolveReport, SystemRecord};
pub use bounds::{
    beta_accuracy_bound, beta_accuracy_factor, complementary_pair_bound, multi_step_bound, three_step_bound, two_step_bound, BoundError,
    BoundKind,
};
pub use quadrature::{kprime_for_system_count, kprime_from_kq, quadrature_apply, QuadratureRule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("no convergence in {iterations} iterations (relative residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("the Thomas algorithm needs a tridiagonal operator")]
    MethodMismatch,
    #[error("shift {0} is positive; A - shift I may be indefinite")]
    PositiveShift(f64),
    #[error("zero pivot at row {row}")]
    Breakdown { row: usize },
    #[error("dimension mismatch: operator has {expected} rows, vector has {got}")]
    Dimension { expected: usize, got: usize },
    #[error("solve with shift {shift:e} failed: {source}")]
    AtShift { shift: f64, source: Box<SolverError> },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Thomas,
    Cg,
    PcgJacobi,
    PcgIc0,
}

impl std::str::FromStr for SolveMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thomas" => Ok(SolveMethod::Thomas),
            "cg" => Ok(SolveMethod::Cg),
            "pcg-jacobi" | "pcg_jacobi" => Ok(SolveMethod::PcgJacobi),
            "pcg-ic0" | "pcg_ic0" => Ok(SolveMethod::PcgIc0),
            _ => Err(format!("unknown method '{s}' (thomas, cg, pcg-jacobi, pcg-ic0)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub method: SolveMethod,
    /// Stop when the recursively updated residual satisfies
    /// `||r|| <= rel_tol ||b||`.
    pub rel_tol: f64,
    /// `None` means `10 n`.
    pub max_iter: Option<usize>,
    pub record_history: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { method: SolveMethod::PcgIc0, rel_tol: 1e-12, max_iter: None, record_history: false }
    }
}

impl SolveConfig {
    pub fn thomas() -> Self {
        SolveConfig { method: SolveMethod::Thomas, ..Self::default() }
    }

    pub fn with_method(mut self, method: SolveMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(SolverError::InvalidInput(format!("rel_tol = {} is not in (0, 1)", self.rel_tol)));
        }
        Ok(())
    }
}

/// Result of one shifted solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True residual `||b - (A - shift I) x|| / ||b||` of the returned `x`.
    pub rel_residual: f64,
    pub history: Vec<f64>,
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn true_residual(a: &SparseSpdOperator, shift: f64, x: &[f64], b: &[f64]) -> f64 {
    let mut r = vec![0.0; b.len()];
    a.matvec_shifted(shift, x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let nb = norm(b);
    if nb == 0.0 {
        0.0
    } else {
        norm(&r) / nb
    }
}

/// Solves `(A - shift I) x = b` for `shift <= 0`.
pub fn shifted_solve(a: &SparseSpdOperator, shift: f64, b: &[f64], cfg: &SolveConfig) -> Result<Solution, SolverError> {
    cfg.validate()?;
    if shift > 0.0 {
        return Err(SolverError::PositiveShift(shift));
    }
    if b.len() != a.n() {
        return Err(SolverError::Dimension { expected: a.n(), got: b.len() });
    }
    let mut sol = match cfg.method {
        SolveMethod::Thomas => {
            let (sub, diag, sup) = a.tridiagonal_bands().ok_or(SolverError::MethodMismatch)?;
            let x = krylov::thomas(&sub, &diag, &sup, shift, b)?;
            Solution { x, iterations: 1, rel_residual: 0.0, history: Vec::new() }
        }
        SolveMethod::Cg => krylov::pcg(a, shift, b, cfg, &krylov::Preconditioner::Identity)?,
        SolveMethod::PcgJacobi => krylov::pcg(a, shift, b, cfg, &krylov::Preconditioner::jacobi(a, shift))?,
        SolveMethod::PcgIc0 => krylov::pcg(a, shift, b, cfg, &krylov::Preconditioner::ic0(a, shift)?)?,
    };
    sol.rel_residual = true_residual(a, shift, &sol.x, b);
    Ok(sol)
}

#[cfg(test)]
mod tests;
