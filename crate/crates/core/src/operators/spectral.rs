use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{OperatorKind, SparseSpdOperator};

/// DST-I of length `n`: `y_i = sum_k x_k sin(i k pi / (n + 1))`.
#[derive(Clone)]
struct Dst1 {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl Dst1 {
    fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(2 * (n + 1));
        Dst1 { n, fft }
    }

    /// Odd extension of length `2(n + 1)`; the transform is `-Im(X_i) / 2`.
    fn run(&self, x: &mut [f64], buf: &mut Vec<Complex<f64>>) {
        let n = self.n;
        let len = 2 * (n + 1);
        buf.clear();
        buf.resize(len, Complex::new(0.0, 0.0));
        for k in 0..n {
            buf[k + 1].re = x[k];
            buf[len - 1 - k].re = -x[k];
        }
        self.fft.process(buf);
        for i in 0..n {
            x[i] = -buf[i + 1].im * 0.5;
        }
    }
}

/// Tensor-product sine basis on a grid of interior nodes, `x` index fastest.
#[derive(Clone)]
pub struct SineBasis {
    dims: Vec<usize>,
    dst: Vec<Dst1>,
}

impl fmt::Debug for SineBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SineBasis").field("dims", &self.dims).finish()
    }
}

impl SineBasis {
    pub fn new(dims: &[usize]) -> Self {
        SineBasis { dims: dims.to_vec(), dst: dims.iter().map(|&n| Dst1::new(n)).collect() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `||Psi||^2`, the same for every basis vector: `prod (n_a + 1) / 2`.
    pub fn norm_sq(&self) -> f64 {
        self.dims.iter().map(|&n| (n + 1) as f64 / 2.0).product()
    }

    /// Separable transform along every axis. It maps node values to the
    /// inner products `<v, Psi>` and, being symmetric, coefficients back to
    /// `sum c Psi`.
    fn transform(&self, v: &mut [f64]) {
        assert_eq!(v.len(), self.len());
        let mut stride = 1;
        let mut line = Vec::new();
        let mut buf = Vec::new();
        for (axis, &n) in self.dims.iter().enumerate() {
            let block = stride * n;
            line.resize(n, 0.0);
            for start in (0..v.len()).step_by(block) {
                for off in 0..stride {
                    for i in 0..n {
                        line[i] = v[start + off + i * stride];
                    }
                    self.dst[axis].run(&mut line, &mut buf);
                    for i in 0..n {
                        v[start + off + i * stride] = line[i];
                    }
                }
            }
            stride = block;
        }
    }

    /// `<v, Psi_i>` for every basis vector, in grid order of the mode indices.
    pub fn coefficients(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        self.transform(&mut out);
        out
    }

    /// `sum_i c_i Psi_i`.
    pub fn synthesize(&self, c: &[f64]) -> Vec<f64> {
        let mut out = c.to_vec();
        self.transform(&mut out);
        out
    }

    /// Mode numbers (1-based, per axis) of linear index `idx`.
    pub fn modes(&self, mut idx: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&n| {
                let i = idx % n;
                idx /= n;
                i + 1
            })
            .collect()
    }

    /// `Psi_idx` sampled at the nodes.
    pub fn vector(&self, idx: usize) -> Vec<f64> {
        let mut c = vec![0.0; self.len()];
        c[idx] = 1.0;
        self.synthesize(&c)
    }
}

/// Closed-form eigenpairs of the normalised 1D and 2D model operators.
#[derive(Clone, Debug)]
pub struct SpectralOracle {
    pub kind: OperatorKind,
    basis: SineBasis,
    eigenvalues: Vec<f64>,
}

fn half_sin_sq(i: usize, n: usize) -> f64 {
    let s = (i as f64 * PI / (2.0 * (n + 1) as f64)).sin();
    s * s
}

impl SpectralOracle {
    /// `Lambda_i = sin^2(i pi / (2 (N + 1)))`, `Psi_i = (sin(i k pi / (N + 1)))_k`.
    pub fn laplace_1d(n: usize) -> Self {
        let eigenvalues = (1..=n).map(|i| half_sin_sq(i, n)).collect();
        SpectralOracle { kind: OperatorKind::Laplace1d, basis: SineBasis::new(&[n]), eigenvalues }
    }

    /// `Lambda_ij = (sin^2(i pi h / 2) + sin^2(j pi h / 2)) / 2`.
    pub fn laplace_2d(nx: usize, ny: usize) -> Self {
        let mut eigenvalues = Vec::with_capacity(nx * ny);
        for j in 1..=ny {
            for i in 1..=nx {
                eigenvalues.push((half_sin_sq(i, nx) + half_sin_sq(j, ny)) / 2.0);
            }
        }
        SpectralOracle { kind: OperatorKind::Laplace2d5pt, basis: SineBasis::new(&[nx, ny]), eigenvalues }
    }

    /// The oracle matching an assembled model operator, if it has one.
    pub fn for_operator(op: &SparseSpdOperator) -> Option<Self> {
        match op.kind {
            OperatorKind::Laplace1d => Some(Self::laplace_1d(op.dims[0])),
            OperatorKind::Laplace2d5pt => Some(Self::laplace_2d(op.dims[0], op.dims[1])),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn basis(&self) -> &SineBasis {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, idx: usize) -> f64 {
        self.eigenvalues[idx]
    }

    pub fn eigenvector(&self, idx: usize) -> Vec<f64> {
        self.basis.vector(idx)
    }

    pub fn norm_sq(&self) -> f64 {
        self.basis.norm_sq()
    }

    /// `lambda_max / lambda_min`.
    pub fn condition_number(&self) -> f64 {
        let (lo, hi) = self.eigenvalues.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
        hi / lo
    }

    /// `sum_i phi(Lambda_i) <f, Psi_i> / ||Psi_i||^2 Psi_i`.
    pub fn apply_fn(&self, f: &[f64], phi: impl Fn(f64) -> f64) -> Vec<f64> {
        let ns = self.norm_sq();
        let mut c = self.basis.coefficients(f);
        for (ci, &l) in c.iter_mut().zip(&self.eigenvalues) {
            *ci *= phi(l) / ns;
        }
        self.basis.synthesize(&c)
    }

    /// `sqrt(sum_i phi(Lambda_i) <v, Psi_i>^2 / ||Psi_i||^2)`.
    pub fn norm_fn(&self, v: &[f64], phi: impl Fn(f64) -> f64) -> f64 {
        let ns = self.norm_sq();
        let c = self.basis.coefficients(v);
        let s: f64 = c.iter().zip(&self.eigenvalues).map(|(ci, &l)| phi(l) * ci * ci).sum();
        (s / ns).max(0.0).sqrt()
    }
}

/// Exact spectral application of `A^gamma`.
pub fn oracle_frac_apply(oracle: &SpectralOracle, gamma: f64, f: &[f64]) -> Vec<f64> {
    if gamma == 0.0 {
        return f.to_vec();
    }
    oracle.apply_fn(f, |l| l.powf(gamma))
}

/// `||v||_{A^gamma} = sqrt(v^T A^gamma v)`.
pub fn weighted_norm(oracle: &SpectralOracle, gamma: f64, v: &[f64]) -> f64 {
    oracle.norm_fn(v, |l| l.powf(gamma))
}
