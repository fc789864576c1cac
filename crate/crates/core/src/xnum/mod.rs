//! Extended-precision scalars, shifted-Chebyshev polynomials, small dense
//! solves and polynomial root finding.

mod cheb;
mod dense;
mod roots;
mod scalar;

use thiserror::Error;

pub use cheb::{cheb_eval, cheb_to_monomial, monomial_eval, monomial_to_cheb, ChebPoly};
pub use dense::{dense_solve, dense_solve_with, DenseSolveOptions, DEFAULT_DENSE_CAP};
pub use roots::poly_roots;
pub use scalar::{XComplex, XScalar, DEFAULT_PRECISION, MIN_PRECISION};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum XnumError {
    #[error("singular matrix: pivot {pivot:e} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("system of dimension {dim} exceeds the cap of {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("matrix has {rows} rows but right-hand side has {rhs} entries")]
    DimensionMismatch { rows: usize, rhs: usize },
    #[error("root polishing did not converge (residual {residual:e})")]
    RootPolishDiverged { residual: f64 },
    #[error("root finding needs degree >= 1")]
    DegreeTooLow,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("cannot parse {input:?} as a number: {reason}")]
    Parse { input: String, reason: String },
}
