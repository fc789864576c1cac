use super::scalar::XScalar;
use super::XnumError;

/// Largest system `dense_solve` accepts by default.
pub const DEFAULT_DENSE_CAP: usize = 64;

/// Knobs for [`dense_solve_with`].
#[derive(Clone, Debug)]
pub struct DenseSolveOptions {
    pub max_dim: usize,
    /// Pivots below `pivot_threshold * max|M_ij|` are treated as zero.
    /// `None` means `2^(-precision/2)`.
    pub pivot_threshold: Option<XScalar>,
}

impl Default for DenseSolveOptions {
    fn default() -> Self {
        DenseSolveOptions { max_dim: DEFAULT_DENSE_CAP, pivot_threshold: None }
    }
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting.
pub fn dense_solve(m: &[Vec<XScalar>], b: &[XScalar]) -> Result<Vec<XScalar>, XnumError> {
    dense_solve_with(m, b, &DenseSolveOptions::default())
}

pub fn dense_solve_with(
    m: &[Vec<XScalar>],
    b: &[XScalar],
    opts: &DenseSolveOptions,
) -> Result<Vec<XScalar>, XnumError> {
    let n = b.len();
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(XnumError::DimensionMismatch { rows: m.len(), rhs: n });
    }
    if n > opts.max_dim {
        return Err(XnumError::TooLarge { dim: n, cap: opts.max_dim });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let prec = m
        .iter()
        .flat_map(|r| r.iter().map(XScalar::precision))
        .chain(b.iter().map(XScalar::precision))
        .max()
        .unwrap();

    let mut a: Vec<Vec<XScalar>> = m.iter().map(|r| r.iter().map(|v| v.with_precision(prec)).collect()).collect();
    let mut rhs: Vec<XScalar> = b.iter().map(|v| v.with_precision(prec)).collect();

    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(XScalar::zero(prec), |acc, v| acc.max(v.abs()));
    let threshold = opts
        .pivot_threshold
        .clone()
        .unwrap_or_else(|| XScalar::exp2i(-((prec / 2) as i32), prec));
    let floor = &threshold * &scale;

    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold(None::<(usize, XScalar)>, |best, (r, v)| match best {
                Some((_, ref bv)) if *bv >= v => best,
                _ => Some((r, v)),
            })
            .unwrap();
        if scale.is_zero() || piv_abs <= floor {
            return Err(XnumError::SingularMatrix { column: col, pivot: piv_abs.to_f64() });
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        let pivot_row = a[col].clone();
        let pivot_rhs = rhs[col].clone();
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot_row[col];
            for c in col..n {
                let delta = &factor * &pivot_row[c];
                a[r][c] -= delta;
            }
            let delta = &factor * &pivot_rhs;
            rhs[r] -= delta;
        }
    }

    let mut x = vec![XScalar::zero(prec); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r].clone();
        for c in (r + 1)..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Ok(x)
}
