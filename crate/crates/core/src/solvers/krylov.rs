use crate::operators::SparseSpdOperator;

use super::{dot, norm, SolveConfig, Solution, SolverError};

/// Thomas algorithm for `(T - shift I) x = b` with bands `(sub, diag, sup)`.
pub(super) fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], shift: f64, b: &[f64]) -> Result<Vec<f64>, SolverError> {
    let n = b.len();
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut beta = diag[0] - shift;
    if beta == 0.0 {
        return Err(SolverError::Breakdown { row: 0 });
    }
    x[0] = b[0] / beta;
    for i in 1..n {
        c[i - 1] = sup[i - 1] / beta;
        beta = diag[i] - shift - sub[i] * c[i - 1];
        if beta == 0.0 {
            return Err(SolverError::Breakdown { row: i });
        }
        x[i] = (b[i] - sub[i] * x[i - 1]) / beta;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

pub(super) enum Preconditioner {
    Identity,
    Jacobi(Vec<f64>),
    /// Lower factor of `A - shift I` on the pattern of its lower triangle,
    /// rows stored with the diagonal last.
    Ic0 { ptr: Vec<usize>, cols: Vec<usize>, vals: Vec<f64> },
}

impl Preconditioner {
    pub(super) fn jacobi(a: &SparseSpdOperator, shift: f64) -> Self {
        Preconditioner::Jacobi(a.diagonal().iter().map(|d| 1.0 / (d - shift)).collect())
    }

    pub(super) fn ic0(a: &SparseSpdOperator, shift: f64) -> Result<Self, SolverError> {
        let n = a.n();
        let mut ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        for i in 0..n {
            let start = cols.len();
            for (j, v) in a.row(i) {
                if j <= i {
                    cols.push(j);
                    vals.push(if j == i { v - shift } else { v });
                }
            }
            // Rows of A are sorted, so the diagonal is last.
            if cols.last() != Some(&i) || cols.len() == start {
                return Err(SolverError::Breakdown { row: i });
            }
            for p in start..cols.len() {
                let k = cols[p];
                if k == i {
                    let d = vals[p] - vals[start..p].iter().map(|v| v * v).sum::<f64>();
                    if d <= 0.0 {
                        return Err(SolverError::Breakdown { row: i });
                    }
                    vals[p] = d.sqrt();
                    continue;
                }
                // sum_{j < k} L_ij L_kj over the shared pattern
                let (ks, ke) = (ptr[k], ptr[k + 1]);
                let mut s = 0.0;
                let (mut q, mut r) = (start, ks);
                while q < p && r < ke - 1 {
                    match cols[q].cmp(&cols[r]) {
                        std::cmp::Ordering::Less => q += 1,
                        std::cmp::Ordering::Greater => r += 1,
                        std::cmp::Ordering::Equal => {
                            s += vals[q] * vals[r];
                            q += 1;
                            r += 1;
                        }
                    }
                }
                vals[p] = (vals[p] - s) / vals[ke - 1];
            }
            ptr.push(cols.len());
        }
        Ok(Preconditioner::Ic0 { ptr, cols, vals })
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Preconditioner::Identity => z.copy_from_slice(r),
            Preconditioner::Jacobi(inv) => {
                for ((zi, ri), di) in z.iter_mut().zip(r).zip(inv) {
                    *zi = ri * di;
                }
            }
            Preconditioner::Ic0 { ptr, cols, vals } => {
                let n = r.len();
                for i in 0..n {
                    let mut s = r[i];
                    for p in ptr[i]..ptr[i + 1] - 1 {
                        s -= vals[p] * z[cols[p]];
                    }
                    z[i] = s / vals[ptr[i + 1] - 1];
                }
                for i in (0..n).rev() {
                    z[i] /= vals[ptr[i + 1] - 1];
                    let zi = z[i];
                    for p in ptr[i]..ptr[i + 1] - 1 {
                        z[cols[p]] -= vals[p] * zi;
                    }
                }
            }
        }
    }
}

/// Preconditioned conjugate gradients from a zero initial guess.
pub(super) fn pcg(
    a: &SparseSpdOperator,
    shift: f64,
    b: &[f64],
    cfg: &SolveConfig,
    pre: &Preconditioner,
) -> Result<Solution, SolverError> {
    let n = b.len();
    let max_iter = cfg.max_iter.unwrap_or(10 * n.max(1));
    let nb = norm(b);
    let mut x = vec![0.0; n];
    let mut history = Vec::new();
    if nb == 0.0 {
        return Ok(Solution { x, iterations: 0, rel_residual: 0.0, history });
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    pre.apply(&r, &mut z);
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut rel = 1.0;
    for it in 1..=max_iter {
        a.matvec_shifted(shift, &p, &mut q);
        let step = rz / dot(&p, &q);
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * q[i];
        }
        rel = norm(&r) / nb;
        if cfg.record_history {
            history.push(rel);
        }
        if rel <= cfg.rel_tol {
            return Ok(Solution { x, iterations: it, rel_residual: rel, history });
        }
        pre.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(SolverError::MaxIterExceeded { iterations: max_iter, residual: rel })
}
