//! Model SPD operators normalised to spectrum in `(0, 1]`, their closed-form
//! spectra, and the special right-hand sides used by the experiments.

mod market;
mod rhs;
mod spectral;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use market::{read_matrix_market, write_matrix_market};
pub use rhs::{random_eigen_mix, special_rhs, RhsKind};
pub use spectral::{oracle_frac_apply, weighted_norm, SineBasis, SpectralOracle};

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("resolution h^-1 = {0} is below 2")]
    BadResolution(usize),
    #[error("coefficient jump mu = {0} is not in (0, 1]")]
    BadJump(f64),
    #[error("{0:?} operators are not assembled from a stencil")]
    NotAssemblable(OperatorKind),
    #[error("matrix market line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Laplace1d,
    Laplace2d5pt,
    Laplace3d7ptJump,
    External,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OperatorKind::Laplace1d => "1d",
            OperatorKind::Laplace2d5pt => "2d",
            OperatorKind::Laplace3d7ptJump => "3d-jump",
            OperatorKind::External => "external",
        };
        f.write_str(s)
    }
}

/// Uniform grid of interior nodes, `x` index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub dims: Vec<usize>,
    pub h: f64,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of node `idx`.
    pub fn point(&self, mut idx: usize) -> Vec<f64> {
        self.dims
            .iter()
            .map(|&n| {
                let i = idx % n;
                idx /= n;
                (i + 1) as f64 * self.h
            })
            .collect()
    }
}

/// Normalised operator `A = AA / scale` in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct SparseSpdOperator {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
    /// Spectral upper bound of the unnormalised matrix.
    pub scale: f64,
    pub kind: OperatorKind,
    pub h: f64,
    pub mu: f64,
    pub dims: Vec<usize>,
}

impl SparseSpdOperator {
    /// Builds the CSR form from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        n: usize,
        mut triplets: Vec<(usize, usize, f64)>,
        kind: OperatorKind,
        scale: f64,
        h: f64,
        mu: f64,
        dims: Vec<usize>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            cols.push(c);
            values.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseSpdOperator { n, row_ptr, cols, values, scale, kind, h, mu, dims }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn grid(&self) -> Grid {
        Grid { dims: self.dims.clone(), h: self.h }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.entry(i, i)).collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    /// `y = (A - shift I) x`.
    pub fn matvec_shifted(&self, shift: f64, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y);
        if shift != 0.0 {
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi -= shift * xi;
            }
        }
    }

    /// Largest absolute row sum.
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest `|A_ij - A_ji|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.entry(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, _)| i.abs_diff(j) <= 1))
    }

    /// `(sub, diag, sup)` bands, `sub[0]` and `sup[n-1]` zero, if tridiagonal.
    pub fn tridiagonal_bands(&self) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        if !self.is_tridiagonal() {
            return None;
        }
        let mut sub = vec![0.0; self.n];
        let mut diag = vec![0.0; self.n];
        let mut sup = vec![0.0; self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                match j as isize - i as isize {
                    -1 => sub[i] = v,
                    0 => diag[i] = v,
                    _ => sup[i] = v,
                }
            }
        }
        Some((sub, diag, sup))
    }

    /// The CSR arrays `(row_ptr, cols, values)`.
    pub fn csr(&self) -> (&[usize], &[usize], &[f64]) {
        (&self.row_ptr, &self.cols, &self.values)
    }
}

fn check_resolution(resolution: usize) -> Result<(), OperatorError> {
    if resolution < 2 {
        return Err(OperatorError::BadResolution(resolution));
    }
    Ok(())
}

/// Assembles a model operator on `(0, 1)^d` with `h = 1 / resolution`.
///
/// * `Laplace1d`: `tridiag(-1/4, 1/2, -1/4)`, scale `4 / h^2`.
/// * `Laplace2d5pt`: `h^2 AA / 8` for the five-point Laplacian, scale `8 / h^2`.
/// * `Laplace3d7ptJump`: seven-point stencil with coefficient `mu` on
///   `x_1 < 1/2`, harmonic-mean face values, scaled by its Gershgorin bound.
pub fn assemble(kind: OperatorKind, resolution: usize, mu: f64) -> Result<SparseSpdOperator, OperatorError> {
    check_resolution(resolution)?;
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(OperatorError::BadJump(mu));
    }
    let h = 1.0 / resolution as f64;
    let n = resolution - 1;
    match kind {
        OperatorKind::Laplace1d => {
            let mut t = Vec::with_capacity(3 * n);
            for i in 0..n {
                t.push((i, i, 0.5));
                if i > 0 {
                    t.push((i, i - 1, -0.25));
                }
                if i + 1 < n {
                    t.push((i, i + 1, -0.25));
                }
            }
            Ok(SparseSpdOperator::from_triplets(n, t, kind, 4.0 / (h * h), h, 1.0, vec![n]))
        }
        OperatorKind::Laplace2d5pt => {
            let mut t = Vec::with_capacity(5 * n * n);
            for y in 0..n {
                for x in 0..n {
                    let p = y * n + x;
                    t.push((p, p, 0.5));
                    if x > 0 {
                        t.push((p, p - 1, -0.125));
                    }
                    if x + 1 < n {
                        t.push((p, p + 1, -0.125));
                    }
                    if y > 0 {
                        t.push((p, p - n, -0.125));
                    }
                    if y + 1 < n {
                        t.push((p, p + n, -0.125));
                    }
                }
            }
            Ok(SparseSpdOperator::from_triplets(n * n, t, kind, 8.0 / (h * h), h, 1.0, vec![n, n]))
        }
        OperatorKind::Laplace3d7ptJump => Ok(assemble_jump(resolution, mu)),
        OperatorKind::External => Err(OperatorError::NotAssemblable(kind)),
    }
}

fn assemble_jump(resolution: usize, mu: f64) -> SparseSpdOperator {
    let h = 1.0 / resolution as f64;
    let n = resolution - 1;
    // Node coefficient; indices run over 0..=resolution including the boundary.
    let a = |i: usize| if (i as f64) * h < 0.5 { mu } else { 1.0 };
    let face = |p: f64, q: f64| 2.0 * p * q / (p + q);
    let inv_h2 = 1.0 / (h * h);
    let idx = |x: usize, y: usize, z: usize| ((z - 1) * n + (y - 1)) * n + (x - 1);
    let mut t = Vec::with_capacity(7 * n * n * n);
    for z in 1..=n {
        for y in 1..=n {
            for x in 1..=n {
                let p = idx(x, y, z);
                let ap = a(x);
                let mut diag = 0.0;
                // Neighbours along x change the coefficient; y and z keep it.
                for (nx, ny, nz) in [(x - 1, y, z), (x + 1, y, z), (x, y - 1, z), (x, y + 1, z), (x, y, z - 1), (x, y, z + 1)] {
                    let w = face(ap, a(nx)) * inv_h2;
                    diag += w;
                    let inside = (1..=n).contains(&nx) && (1..=n).contains(&ny) && (1..=n).contains(&nz);
                    if inside {
                        t.push((p, idx(nx, ny, nz), -w));
                    }
                }
                t.push((p, p, diag));
            }
        }
    }
    let mut op =
        SparseSpdOperator::from_triplets(n * n * n, t, OperatorKind::Laplace3d7ptJump, 1.0, h, mu, vec![n, n, n]);
    let bound = op.gershgorin_bound();
    for v in &mut op.values {
        *v /= bound;
    }
    op.scale = bound;
    op
}
