use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{PartialFractionForm, ZeroPoleSet};
use crate::operators::SparseSpdOperator;

use super::{shifted_solve, SolveConfig, SolveMethod, Solution, SolverError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub shift: f64,
    pub iterations: usize,
    pub rel_residual: f64,
}

/// Echo of everything needed to rerun an application.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApplyConfig {
    /// One entry per step; a plain application has one.
    pub alphas: Vec<f64>,
    pub beta: u32,
    pub m: usize,
    pub k: usize,
    pub method: SolveMethod,
    pub rel_tol: f64,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracSolveReport {
    pub u_r: Vec<f64>,
    pub per_system: Vec<SystemRecord>,
    /// Seconds.
    pub wall_time: f64,
    pub config: ApplyConfig,
}

fn record(shift: f64, s: &Solution) -> SystemRecord {
    SystemRecord { shift, iterations: s.iterations, rel_residual: s.rel_residual }
}

fn solve_at(a: &SparseSpdOperator, shift: f64, b: &[f64], cfg: &SolveConfig) -> Result<Solution, SolverError> {
    shifted_solve(a, shift, b, cfg).map_err(|e| SolverError::AtShift { shift, source: Box::new(e) })
}

fn check_dim(a: &SparseSpdOperator, f: &[f64]) -> Result<(), SolverError> {
    if f.len() != a.n() {
        return Err(SolverError::Dimension { expected: a.n(), got: f.len() });
    }
    Ok(())
}

/// `u_r = sum_i c0_i A^(-i) f + sum_j c_j (A - d_j I)^(-1) f`.
///
/// The `beta` inverse powers are a chain of unshifted solves; the `k`
/// shifted solves run concurrently. Terms are summed in a fixed order, c0
/// terms first, so results do not depend on scheduling.
pub fn bura_apply(
    pf: &PartialFractionForm,
    a: &SparseSpdOperator,
    f: &[f64],
    cfg: &SolveConfig,
) -> Result<FracSolveReport, SolverError> {
    check_dim(a, f)?;
    let start = Instant::now();
    let beta = pf.beta as usize;
    let k = pf.d.len();
    // Task 0 is the inverse-power chain, task j >= 1 is pole j - 1.
    let results: Vec<Result<Vec<Solution>, SolverError>> = (0..=k)
        .into_par_iter()
        .map(|task| {
            if task == 0 {
                let mut chain = Vec::with_capacity(beta);
                let mut rhs = f.to_vec();
                for _ in 0..beta {
                    let s = solve_at(a, 0.0, &rhs, cfg)?;
                    rhs.clone_from(&s.x);
                    chain.push(s);
                }
                Ok(chain)
            } else {
                Ok(vec![solve_at(a, pf.d[task - 1], f, cfg)?])
            }
        })
        .collect();

    let mut u = vec![0.0; f.len()];
    let mut per_system = Vec::with_capacity(k + beta);
    for (task, res) in results.into_iter().enumerate() {
        let sols = res?;
        if task == 0 {
            for (c, s) in pf.c0.iter().zip(&sols) {
                axpy(*c, &s.x, &mut u);
                per_system.push(record(0.0, s));
            }
        } else {
            axpy(pf.c[task - 1], &sols[0].x, &mut u);
            per_system.push(record(pf.d[task - 1], &sols[0]));
        }
    }
    Ok(FracSolveReport {
        u_r: u,
        per_system,
        wall_time: start.elapsed().as_secs_f64(),
        config: apply_config(vec![pf.alpha], pf.beta, pf.m, pf.k, cfg),
    })
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

fn apply_config(alphas: Vec<f64>, beta: u32, m: usize, k: usize, cfg: &SolveConfig) -> ApplyConfig {
    ApplyConfig { alphas, beta, m, k, method: cfg.method, rel_tol: cfg.rel_tol, max_iter: cfg.max_iter, seed: None }
}

/// `u_r = lead prod_j (A - z_j I)(A - d_j I)^(-1) A^(-1) f`, one factor at a
/// time in ascending `j`. Conjugate zero pairs enter as
/// `(A - re I)^2 + im^2 I` after all real factors.
pub fn bura_apply_product(
    zp: &ZeroPoleSet,
    a: &SparseSpdOperator,
    f: &[f64],
    cfg: &SolveConfig,
) -> Result<FracSolveReport, SolverError> {
    check_dim(a, f)?;
    let start = Instant::now();
    let zeros = zp.zeros_f64();
    let poles = zp.poles_f64();
    let pairs: Vec<(f64, f64)> = zp.complex_zeros.iter().map(|(re, im)| (re.to_f64(), im.to_f64())).collect();
    let n = f.len();
    let mut per_system = Vec::with_capacity(poles.len() + 1);
    let mut tmp = vec![0.0; n];

    let s = solve_at(a, 0.0, f, cfg)?;
    per_system.push(record(0.0, &s));
    let mut v = s.x;
    let times_shifted = |shift: f64, v: &mut Vec<f64>, tmp: &mut Vec<f64>| {
        a.matvec_shifted(shift, v, tmp);
        std::mem::swap(v, tmp);
    };
    for (j, &d) in poles.iter().enumerate() {
        let s = solve_at(a, d, &v, cfg)?;
        per_system.push(record(d, &s));
        v = s.x;
        if let Some(&z) = zeros.get(j) {
            times_shifted(z, &mut v, &mut tmp);
        }
    }
    for &z in zeros.iter().skip(poles.len()) {
        times_shifted(z, &mut v, &mut tmp);
    }
    for (re, im) in pairs {
        let w = v.clone();
        times_shifted(re, &mut v, &mut tmp);
        times_shifted(re, &mut v, &mut tmp);
        axpy(im * im, &w, &mut v);
    }
    let lead = zp.lead.to_f64();
    for x in &mut v {
        *x *= lead;
    }
    let (m, k) = (zeros.len() + 2 * zp.complex_zeros.len(), poles.len());
    Ok(FracSolveReport {
        u_r: v,
        per_system,
        wall_time: start.elapsed().as_secs_f64(),
        config: apply_config(Vec::new(), 1, m, k, cfg),
    })
}

/// `u_0 = f`, `u_i = bura_apply(pf_i, A, u_(i-1))`: approximates `A^(-alpha) f`
/// with `alpha = sum alpha_i`.
pub fn multi_step_apply(
    pfs: &[PartialFractionForm],
    target_alpha: f64,
    a: &SparseSpdOperator,
    f: &[f64],
    cfg: &SolveConfig,
) -> Result<FracSolveReport, SolverError> {
    if pfs.is_empty() {
        return Err(SolverError::InvalidInput("no steps given".into()));
    }
    if pfs.iter().any(|p| p.beta != 1) {
        return Err(SolverError::InvalidInput("multi-step composition needs beta = 1 steps".into()));
    }
    let total: f64 = pfs.iter().map(|p| p.alpha).sum();
    if (total - target_alpha).abs() > 1e-12 {
        return Err(SolverError::InvalidInput(format!("step exponents sum to {total}, not {target_alpha}")));
    }
    let start = Instant::now();
    let mut u = f.to_vec();
    let mut per_system = Vec::new();
    for pf in pfs {
        let rep = bura_apply(pf, a, &u, cfg)?;
        u = rep.u_r;
        per_system.extend(rep.per_system);
    }
    Ok(FracSolveReport {
        u_r: u,
        per_system,
        wall_time: start.elapsed().as_secs_f64(),
        config: apply_config(pfs.iter().map(|p| p.alpha).collect(), 1, pfs[0].m, pfs[0].k, cfg),
    })
}
