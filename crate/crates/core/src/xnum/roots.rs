use nalgebra::DMatrix;

use super::cheb::ChebPoly;
use super::scalar::{XComplex, XScalar};
use super::XnumError;

const MAX_POLISH_ITERATIONS: usize = 100;

/// Roots in the `t` variable of a shifted Chebyshev series, sorted by real part
/// in descending order.
///
/// Estimates come from the eigenvalues of the colleague matrix in binary64 and
/// are then refined simultaneously (Newton with Aberth's repulsion term) at the
/// polynomial's own precision, followed by plain Newton steps on each root.
pub fn poly_roots(q: &ChebPoly) -> Result<Vec<XComplex>, XnumError> {
    let n = q.degree();
    if n == 0 {
        return Err(XnumError::DegreeTooLow);
    }
    if q.leading().is_zero() {
        return Err(XnumError::ZeroLeadingCoefficient);
    }
    let prec = q.precision();
    let dq = q.derivative_s();

    let estimates = colleague_estimates(q);
    let mut z: Vec<XComplex> = estimates
        .iter()
        .map(|&(re, im)| XComplex::from_f64(re, im, prec))
        .collect();

    let step_tol = XScalar::exp2i(-(prec as i32) + 24, prec);
    let res_tol = XScalar::exp2i(-(prec as i32) + 16, prec);
    let tiny = XScalar::exp2i(-(prec as i32) / 2, prec);

    let mut converged = false;
    for _ in 0..MAX_POLISH_ITERATIONS {
        let mut max_rel_step = XScalar::zero(prec);
        let mut next = z.clone();
        for i in 0..n {
            let pz = q.eval_complex(&z[i]);
            if pz.re.is_zero() && pz.im.is_zero() {
                continue;
            }
            let dpz = dq.eval_complex(&z[i]);
            let w = pz.div(&dpz);
            let mut repulse = XComplex::real(XScalar::zero(prec));
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    repulse = repulse.add(&z[i].sub(zj).recip());
                }
            }
            let one = XComplex::real(XScalar::one(prec));
            let step = w.div(&one.sub(&w.mul(&repulse)));
            let rel = step.abs() / z[i].abs().max(tiny.clone());
            if rel > max_rel_step {
                max_rel_step = rel;
            }
            next[i] = z[i].sub(&step);
        }
        z = next;
        if max_rel_step <= step_tol {
            converged = true;
            break;
        }
        if z.iter().all(|zi| residual_ok(q, zi, &res_tol)) {
            converged = true;
            break;
        }
    }

    // Final individual Newton polish.
    for zi in z.iter_mut() {
        for _ in 0..8 {
            if residual_ok(q, zi, &res_tol) {
                break;
            }
            let pz = q.eval_complex(zi);
            let dpz = dq.eval_complex(zi);
            if dpz.re.is_zero() && dpz.im.is_zero() {
                break;
            }
            *zi = zi.sub(&pz.div(&dpz));
        }
    }

    let all_ok = z.iter().all(|zi| residual_ok(q, zi, &res_tol));
    if !converged && !all_ok {
        let worst = z
            .iter()
            .map(|zi| q.eval_complex(zi).abs().to_f64())
            .fold(0.0_f64, f64::max);
        return Err(XnumError::RootPolishDiverged { residual: worst });
    }
    if !all_ok {
        let worst = z
            .iter()
            .map(|zi| {
                let r = q.eval_complex(zi).abs();
                (r / q.magnitude_at(zi)).to_f64()
            })
            .fold(0.0_f64, f64::max);
        return Err(XnumError::RootPolishDiverged { residual: worst });
    }

    let half = XScalar::from_ratio(1, 2, prec);
    let mut roots: Vec<XComplex> = z
        .into_iter()
        .map(|s| XComplex::new((s.re + 1.0) * &half, s.im * &half))
        .collect();
    roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal));
    Ok(roots)
}

fn residual_ok(q: &ChebPoly, z: &XComplex, tol: &XScalar) -> bool {
    let r = q.eval_complex(z).abs();
    r <= tol * &q.magnitude_at(z)
}

/// Eigenvalues of the colleague matrix of `q`, in the `s` variable.
fn colleague_estimates(q: &ChebPoly) -> Vec<(f64, f64)> {
    let n = q.degree();
    let c: Vec<f64> = q.coeffs().iter().map(XScalar::to_f64).collect();
    if n == 1 {
        return vec![(-c[0] / c[1], 0.0)];
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    m[(0, 1)] = 1.0;
    for i in 1..n {
        m[(i, i - 1)] = 0.5;
        if i + 1 < n {
            m[(i, i + 1)] = 0.5;
        }
    }
    let lead = c[n];
    for j in 0..n {
        m[(n - 1, j)] -= c[j] / (2.0 * lead);
    }
    let eig = m.complex_eigenvalues();
    let mut out: Vec<(f64, f64)> = eig.iter().map(|e| (e.re, e.im)).collect();
    if out.iter().any(|(re, im)| !re.is_finite() || !im.is_finite()) {
        // Fall back to a circle of starting points.
        out = (0..n)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64;
                (1.5 * th.cos(), 1.5 * th.sin())
            })
            .collect();
    }
    // Conjugate-symmetric starts stay symmetric under Aberth, so a spurious
    // complex pair could never split onto the real axis. Nudge every start
    // off-symmetry; this also separates duplicates.
    for (i, e) in out.iter_mut().enumerate() {
        let th = 0.7 + 1.3 * i as f64;
        let r = 1e-7 * (1.0 + e.0.abs()) * (1.0 + 0.1 * i as f64);
        e.0 += r * th.cos();
        e.1 += r * th.sin();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xnum::cheb::monomial_to_cheb;

    fn mono(v: &[f64], prec: u32) -> ChebPoly {
        monomial_to_cheb(&v.iter().map(|&x| XScalar::from_f64(x, prec)).collect::<Vec<_>>())
    }

    #[test]
    fn linear_root() {
        let q = mono(&[-0.25, 1.0], 128);
        let r = poly_roots(&q).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re.to_f64() - 0.25).abs() < 1e-30);
    }

    #[test]
    fn quadratic_roots_sorted_descending() {
        let q = mono(&[-1.0, 0.0, 1.0], 128);
        let r = poly_roots(&q).unwrap();
        assert!((r[0].re.to_f64() - 1.0).abs() < 1e-30);
        assert!((r[1].re.to_f64() + 1.0).abs() < 1e-30);
        assert!(r.iter().all(|z| z.im.abs().to_f64() < 1e-30));
    }

    #[test]
    fn complex_pair() {
        // t^2 + 1
        let q = mono(&[1.0, 0.0, 1.0], 128);
        let r = poly_roots(&q).unwrap();
        for z in &r {
            assert!(z.re.abs().to_f64() < 1e-30);
            assert!((z.im.abs().to_f64() - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn clustered_negative_roots() {
        // roots spread over ten decades near t = 0, like BURA denominators
        let roots = [-1e-10, -3e-8, -2e-5, -4e-3, -0.3, -9.0];
        let prec = 256;
        let mut coeffs = vec![XScalar::one(prec)];
        for &r in &roots {
            let mut next = vec![XScalar::zero(prec); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        let q = monomial_to_cheb(&coeffs);
        let found = poly_roots(&q).unwrap();
        for (z, want) in found.iter().zip(roots.iter()) {
            let rel = ((z.re.to_f64() - want) / want).abs();
            assert!(rel < 1e-12, "root {want}: got {:?}", z.re);
        }
    }

    #[test]
    fn constant_is_rejected() {
        let q = ChebPoly::from_f64(&[3.0], 64);
        assert!(matches!(poly_roots(&q), Err(XnumError::DegreeTooLow)));
    }
}
