//! Zeros, poles and the partial-fraction form of `t^(-beta) r(t)`.
//!
//! For a β-BURA `r` of `t^(beta - alpha)` the solver needs
//!
//! ```text
//! t^(-beta) r(t) = sum_{j=1..beta} c0_j / t^j + sum_{j=1..k} c_j / (t - d_j)
//! ```
//!
//! with real negative poles `d_j`. Everything is computed at the precision of
//! the approximant and exported to `f64` at the end.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::remez::RationalApproximant;
use crate::xnum::{cheb_to_monomial, poly_roots, XComplex, XScalar, XnumError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompError {
    #[error("{count} poles are complex (imaginary part up to {max_imag:e})")]
    ComplexPolesDetected { count: usize, max_imag: f64 },
    #[error("zeros and poles do not interlace: {0}")]
    InterlacingViolated(String),
    #[error("poles {i} and {j} coincide to within {gap:e}")]
    RepeatedPole { i: usize, j: usize, gap: f64 },
    #[error("identity check {which} failed (deviation {deviation:e})")]
    IdentityCheckFailed { which: &'static str, deviation: f64 },
    #[error(transparent)]
    Numeric(#[from] XnumError),
}

/// Roots of the numerator and denominator in `t`, both in decreasing order,
/// with `r(t) = lead * prod (t - zeros_j) * prod |t - w_j|^2 / prod (t - poles_j)`
/// where `w_j` are the `complex_zeros`.
///
/// Numerators of the `beta >= 2` approximants can carry one conjugate pair
/// of zeros; only the upper member of each pair is stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroPoleSet {
    pub zeros: Vec<XScalar>,
    pub complex_zeros: Vec<(XScalar, XScalar)>,
    pub poles: Vec<XScalar>,
    pub lead: XScalar,
}

impl ZeroPoleSet {
    pub fn zeros_f64(&self) -> Vec<f64> {
        self.zeros.iter().map(XScalar::to_f64).collect()
    }

    pub fn poles_f64(&self) -> Vec<f64> {
        self.poles.iter().map(XScalar::to_f64).collect()
    }

    /// Product form evaluated at `t`.
    pub fn eval(&self, t: &XScalar) -> XScalar {
        let mut v = self.lead.with_precision(t.precision().max(self.lead.precision()));
        for z in &self.zeros {
            v = v * (t - z);
        }
        for (re, im) in &self.complex_zeros {
            v = v * ((t - re).square() + im.square());
        }
        for d in &self.poles {
            v = v / (t - d);
        }
        v
    }
}

/// Coefficients of `t^(-beta) r(t)` at full precision plus `f64` exports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialFractionForm {
    pub alpha: f64,
    pub beta: u32,
    pub m: usize,
    pub k: usize,
    /// `c0[j - 1]` multiplies `t^(-j)`.
    pub c0: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub error: f64,
    pub c0_full: Vec<XScalar>,
    pub c_full: Vec<XScalar>,
    pub d_full: Vec<XScalar>,
    pub error_full: XScalar,
}

impl PartialFractionForm {
    /// Number of shifted solves one application costs: `k` poles plus `beta`
    /// solves with the unshifted operator.
    pub fn system_count(&self) -> usize {
        self.k + self.beta as usize
    }
}

/// Splits roots into real ones (imaginary part below `2^(-prec/2) |z|`) and
/// the upper members of conjugate pairs.
fn split_roots(roots: Vec<XComplex>, prec: u32) -> (Vec<XScalar>, Vec<(XScalar, XScalar)>) {
    let tol = XScalar::exp2i(-((prec / 2) as i32), prec);
    let mut real = Vec::new();
    let mut pairs = Vec::new();
    for z in roots {
        let scale = z.abs().max(tol.clone());
        if z.im.abs() <= &tol * &scale {
            real.push(z.re);
        } else if !z.im.is_sign_negative() {
            pairs.push((z.re, z.im));
        }
    }
    (real, pairs)
}

/// Roots of numerator and denominator, checked for reality, ordering and
/// (for `(k, k; 1)`) interlacing `0 > z_1 > d_1 > z_2 > ... > z_k > d_k`.
pub fn extract_zeros_poles(r: &RationalApproximant) -> Result<ZeroPoleSet, DecompError> {
    let prec = r.precision_bits;
    let num = r.num.trimmed();
    let den = r.den.trimmed();
    let (zeros, complex_zeros) =
        if num.degree() == 0 { (Vec::new(), Vec::new()) } else { split_roots(poly_roots(&num)?, prec) };
    let (poles, complex_poles) =
        if den.degree() == 0 { (Vec::new(), Vec::new()) } else { split_roots(poly_roots(&den)?, prec) };
    if !complex_poles.is_empty() {
        let max_imag = complex_poles.iter().map(|(_, im)| im.to_f64()).fold(0.0, f64::max);
        return Err(DecompError::ComplexPolesDetected { count: 2 * complex_poles.len(), max_imag });
    }

    // Leading monomial coefficients in t.
    let pm = cheb_to_monomial(&num);
    let qm = cheb_to_monomial(&den);
    let lead = pm.last().unwrap() / qm.last().unwrap();

    if let Some(p) = poles.iter().position(|d| !d.is_sign_negative() || d.is_zero()) {
        return Err(DecompError::InterlacingViolated(format!("pole {} = {:e} is not negative", p + 1, poles[p].to_f64())));
    }
    if let Some(w) = poles.windows(2).position(|w| w[0] <= w[1]) {
        return Err(DecompError::InterlacingViolated(format!("poles {} and {} are out of order", w + 1, w + 2)));
    }
    if let Some(far) = poles.last() {
        let gap_tol = far.abs() * XScalar::exp2i(-((prec / 4) as i32), prec);
        for (i, w) in poles.windows(2).enumerate() {
            let gap = (&w[0] - &w[1]).abs();
            if gap < gap_tol {
                return Err(DecompError::RepeatedPole { i: i + 1, j: i + 2, gap: gap.to_f64() });
            }
        }
    }
    if r.beta == 1 && r.m == r.k {
        if zeros.len() != poles.len() {
            return Err(DecompError::InterlacingViolated(format!("{} complex zero pair(s)", complex_zeros.len())));
        }
        let mut prev = XScalar::zero(prec);
        for (j, (z, d)) in zeros.iter().zip(&poles).enumerate() {
            if !(*z < prev && d < z) {
                return Err(DecompError::InterlacingViolated(format!(
                    "zero {} = {:e}, pole {} = {:e}",
                    j + 1,
                    z.to_f64(),
                    j + 1,
                    d.to_f64()
                )));
            }
            prev = d.clone();
        }
    }
    Ok(ZeroPoleSet { zeros, complex_zeros, poles, lead })
}

/// Polynomial part of `P / Q` (monomials in `t`, lowest degree first); empty
/// when `deg P < deg Q`.
fn polynomial_quotient(p: &[XScalar], q: &[XScalar]) -> Vec<XScalar> {
    if p.len() < q.len() {
        return Vec::new();
    }
    let mut rem = p.to_vec();
    let dq = q.len() - 1;
    let lead = q.last().unwrap();
    let mut quot = vec![XScalar::zero(lead.precision()); p.len() - dq];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dq] / lead;
        for (j, qj) in q.iter().enumerate() {
            rem[i + j] -= &c * qj;
        }
        quot[i] = c;
    }
    quot
}

/// Partial fractions of `t^(-beta) r(t)`: residues `c*_j = P(d_j) / Q'(d_j)`,
/// `c_j = c*_j / d_j^beta` and `c0_j = b_(beta-j) - sum_i c*_i / d_i^(beta-j+1)`
/// where `b` is the polynomial part of `r`.
pub fn to_partial_fractions(r: &RationalApproximant) -> Result<PartialFractionForm, DecompError> {
    let prec = r.precision_bits;
    let zp = extract_zeros_poles(r)?;
    let num = r.num.trimmed();
    let den = r.den.trimmed();
    let dq = den.derivative_t();
    let beta = r.beta as i32;

    let mut cstar = Vec::with_capacity(zp.poles.len());
    let mut c = Vec::with_capacity(zp.poles.len());
    for d in &zp.poles {
        let s = d * 2.0 - 1.0;
        let cs = num.eval(&s) / dq.eval(&s);
        c.push(&cs / d.powi(beta));
        cstar.push(cs);
    }

    let pm = cheb_to_monomial(&num);
    let qm = cheb_to_monomial(&den);
    let b = polynomial_quotient(&pm, &qm);
    let mut c0 = Vec::with_capacity(r.beta as usize);
    for j in 1..=beta {
        let n = (beta - j) as usize;
        let mut v = b.get(n).cloned().unwrap_or_else(|| XScalar::zero(prec));
        for (cs, d) in cstar.iter().zip(&zp.poles) {
            v -= cs / d.powi(n as i32 + 1);
        }
        c0.push(v);
    }

    let pf = PartialFractionForm {
        alpha: r.alpha,
        beta: r.beta,
        m: r.m,
        k: r.k,
        c0: c0.iter().map(XScalar::to_f64).collect(),
        c: c.iter().map(XScalar::to_f64).collect(),
        d: zp.poles.iter().map(XScalar::to_f64).collect(),
        error: r.error.to_f64(),
        c0_full: c0,
        c_full: c,
        d_full: zp.poles.clone(),
        error_full: r.error.clone(),
    };
    check_identities(&pf, &zp.lead)?;
    Ok(pf)
}

/// `|c0_beta| = E` (relative `1e-8`) and
/// `c0_1 + sum c_j = lead` if `m - k = beta - 1`, else `0` (absolute
/// `1e-10 max(1, |lead|)`).
fn check_identities(pf: &PartialFractionForm, lead: &XScalar) -> Result<(), DecompError> {
    let e = &pf.error_full;
    let last = pf.c0_full.last().expect("beta >= 1");
    let dev = ((last.abs() - e) / e).abs().to_f64();
    if !(dev <= 1e-8) {
        return Err(DecompError::IdentityCheckFailed { which: "c0_beta = E", deviation: dev });
    }

    let mut sum = pf.c0_full[0].clone();
    for cj in &pf.c_full {
        sum += cj;
    }
    let lead_f = lead.to_f64();
    let want = if pf.m as i64 - pf.k as i64 == pf.beta as i64 - 1 { lead_f } else { 0.0 };
    let dev = (sum.to_f64() - want).abs();
    if !(dev <= 1e-10 * lead_f.abs().max(1.0)) {
        return Err(DecompError::IdentityCheckFailed { which: "coefficient sum", deviation: dev });
    }
    if pf.beta == 1 && pf.m == pf.k && pf.c_full.iter().any(|c| c.is_sign_negative()) {
        return Err(DecompError::IdentityCheckFailed { which: "positive residues", deviation: 0.0 });
    }
    Ok(())
}

/// `sum_j c0_j / t^j + sum_j c_j / (t - d_j)` in binary64.
pub fn pf_eval(pf: &PartialFractionForm, t: f64) -> f64 {
    let mut inv = 1.0;
    let mut acc = 0.0;
    for c in &pf.c0 {
        inv /= t;
        acc += c * inv;
    }
    for (c, d) in pf.c.iter().zip(&pf.d) {
        acc += c / (t - d);
    }
    acc
}

/// [`pf_eval`] at full precision.
pub fn pf_eval_full(pf: &PartialFractionForm, t: &XScalar) -> XScalar {
    let prec = t.precision().max(pf.error_full.precision());
    let t = t.with_precision(prec);
    let mut inv = XScalar::one(prec);
    let mut acc = XScalar::zero(prec);
    for c in &pf.c0_full {
        inv = inv / &t;
        acc += c * &inv;
    }
    for (c, d) in pf.c_full.iter().zip(&pf.d_full) {
        acc += c / (&t - d);
    }
    acc
}

/// Asymptotic size of `E_alpha(k, k; beta)`:
/// `4^(1 + beta - alpha) |sin pi (beta - alpha)| exp(-2 pi sqrt((beta - alpha) k))`.
pub fn error_model(alpha: f64, beta: u32, k: usize) -> f64 {
    let g = beta as f64 - alpha;
    let pi = std::f64::consts::PI;
    4f64.powf(1.0 + g) * (pi * g).sin().abs() * (-2.0 * pi * (g * k as f64).sqrt()).exp()
}

#[cfg(test)]
mod tests;
