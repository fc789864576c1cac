//! Experiment driver: coefficient cache, seeded error sweeps and CSV/JSON
//! reports for the desk-scale reproductions.
//!
//! 1D sizes are given as `N`, the number of interior nodes, with
//! `h = 1 / (N + 1)`. 2D and 3D sizes are the resolution `h^-1`.

mod cache;
mod experiments;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::DecompError;
use crate::operators::OperatorError;
use crate::remez::RemezError;
use crate::solvers::{BoundError, SolverError};

pub use cache::{CacheMeta, CoefficientCache, CoefficientCacheEntry};
pub use experiments::{
    compare_2d_case, id_check_1d_case, id_check_3d_case, multistep_case, run_experiment, validate_case, Compare2d,
    ErrorStats, IdCheck1d, IdCheck3d, MAX_1D, MAX_2D_DEFAULT, MAX_2D_FULL, MAX_3D,
};
pub use report::{CaseRecord, ExperimentReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("unknown experiment '{0}' (table-errors, coeff-tables, fig-1d-validate, multistep-1d, compare-2d, id-check)")]
    UnknownExperiment(String),
    #[error("no cache entry for alpha = {alpha}, beta = {beta}, (m, k) = ({m}, {k}) at {bits} bits")]
    CacheMiss { alpha: f64, beta: u32, m: usize, k: usize, bits: u32 },
    #[error("cache entry {path:?} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("{path:?}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Remez(#[from] RemezError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("operator: {0}")]
    Operator(String),
    #[error("case {case}: {source}")]
    Case { case: String, source: Box<HarnessError> },
}

impl From<OperatorError> for HarnessError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::Io(io) => HarnessError::Io { path: PathBuf::new(), msg: io.to_string() },
            other => HarnessError::Operator(other.to_string()),
        }
    }
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    NonConvergence,
    InvariantViolation,
    Io,
    Usage,
}

impl HarnessError {
    pub fn class(&self) -> ErrorClass {
        match self {
            HarnessError::Case { source, .. } => source.class(),
            HarnessError::Remez(RemezError::NonConvergence { .. } | RemezError::InnerDiverged { .. }) => {
                ErrorClass::NonConvergence
            }
            HarnessError::Remez(RemezError::InvalidInput(_)) => ErrorClass::Usage,
            HarnessError::Remez(_) => ErrorClass::InvariantViolation,
            HarnessError::Solver(s) => solver_class(s),
            HarnessError::Decomp(_) | HarnessError::CacheCorrupt { .. } | HarnessError::Bound(_) => {
                ErrorClass::InvariantViolation
            }
            HarnessError::Io { .. } | HarnessError::CacheMiss { .. } => ErrorClass::Io,
            HarnessError::UnknownExperiment(_) | HarnessError::InvalidParams(_) | HarnessError::Operator(_) => {
                ErrorClass::Usage
            }
        }
    }

    pub(crate) fn in_case(self, case: &str) -> Self {
        HarnessError::Case { case: case.to_string(), source: Box::new(self) }
    }
}

fn solver_class(e: &SolverError) -> ErrorClass {
    match e {
        SolverError::MaxIterExceeded { .. } => ErrorClass::NonConvergence,
        SolverError::AtShift { source, .. } => solver_class(source),
        SolverError::Breakdown { .. } => ErrorClass::InvariantViolation,
        _ => ErrorClass::Usage,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    TableErrors,
    CoeffTables,
    Fig1dValidate,
    Multistep1d,
    Compare2d,
    IdCheck,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::TableErrors,
        ExperimentId::CoeffTables,
        ExperimentId::Fig1dValidate,
        ExperimentId::Multistep1d,
        ExperimentId::Compare2d,
        ExperimentId::IdCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::TableErrors => "table-errors",
            ExperimentId::CoeffTables => "coeff-tables",
            ExperimentId::Fig1dValidate => "fig-1d-validate",
            ExperimentId::Multistep1d => "multistep-1d",
            ExperimentId::Compare2d => "compare-2d",
            ExperimentId::IdCheck => "id-check",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| HarnessError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub seed: u64,
    pub random_trials: usize,
    pub precision_bits: u32,
    /// Stopping tolerance of the iterative solves (2D and 3D cases).
    pub rel_tol: f64,
    /// Replaces the default 1D sweep of `N`.
    pub sizes: Option<Vec<usize>>,
    /// Replaces the default degree list (`k` of the `(k, k)` families).
    pub degrees: Option<Vec<usize>>,
    /// Replaces the default 3D resolutions `h^-1`.
    pub sizes_3d: Option<Vec<usize>>,
    /// Runs compare-2d at `h = 2^-10` instead of `2^-7`.
    pub full_2d: bool,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            seed: 42,
            random_trials: 1000,
            precision_bits: crate::xnum::DEFAULT_PRECISION,
            rel_tol: 1e-12,
            sizes: None,
            degrees: None,
            sizes_3d: None,
            full_2d: false,
        }
    }
}
