//! Fractional powers of sparse SPD matrices through best uniform rational
//! approximation (BURA).
//!
//! The solve `A^alpha u = f` with `0 < alpha < 1` is reduced to `k + beta`
//! shifted SPD solves. The pipeline is:
//!
//! 1. [`remez::compute_bura`] finds the best uniform rational approximation of
//!    `t^(beta - alpha)` on `[0, 1]` in extended precision;
//! 2. [`decomp::to_partial_fractions`] turns it into poles, residues and
//!    inverse-power coefficients;
//! 3. [`solvers::bura_apply`] sums the shifted solves for a concrete operator
//!    from [`operators`].
//!
//! [`harness`] drives the reproducible experiments and the coefficient cache.

pub mod decomp;
pub mod harness;
pub mod operators;
pub mod remez;
pub mod solvers;
pub mod xnum;

pub use xnum::{ChebPoly, XComplex, XScalar};
