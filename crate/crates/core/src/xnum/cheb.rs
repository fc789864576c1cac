//! Polynomials in the shifted Chebyshev basis `T_j(s)`, `s = 2t - 1`.

use super::scalar::{XComplex, XScalar};

/// `sum_j coeffs[j] * T_j(s)` with `s = 2t - 1` mapping `t in [0, 1]` onto `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChebPoly {
    coeffs: Vec<XScalar>,
    padded: bool,
}

impl ChebPoly {
    /// Builds a polynomial whose leading coefficient is taken at face value.
    pub fn new(coeffs: Vec<XScalar>) -> Self {
        assert!(!coeffs.is_empty(), "a Chebyshev series needs at least one coefficient");
        ChebPoly { coeffs, padded: false }
    }

    /// Same as [`ChebPoly::new`] but records that trailing coefficients may be zero.
    pub fn padded(coeffs: Vec<XScalar>) -> Self {
        assert!(!coeffs.is_empty(), "a Chebyshev series needs at least one coefficient");
        ChebPoly { coeffs, padded: true }
    }

    pub fn from_f64(coeffs: &[f64], prec: u32) -> Self {
        ChebPoly::new(coeffs.iter().map(|&c| XScalar::from_f64(c, prec)).collect())
    }

    pub fn coeffs(&self) -> &[XScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_padded(&self) -> bool {
        self.padded
    }

    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(XScalar::precision).max().unwrap_or(53)
    }

    pub fn leading(&self) -> &XScalar {
        self.coeffs.last().expect("non-empty")
    }

    /// Degree after dropping exactly-zero trailing coefficients.
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn trimmed(&self) -> ChebPoly {
        let d = self.effective_degree();
        ChebPoly { coeffs: self.coeffs[..=d].to_vec(), padded: false }
    }

    /// Clenshaw evaluation in the `s` variable.
    pub fn eval(&self, s: &XScalar) -> XScalar {
        cheb_eval(self, s)
    }

    /// Evaluation in the `t` variable (`s = 2t - 1`).
    pub fn eval_t(&self, t: &XScalar) -> XScalar {
        let s = t * 2.0 - 1.0;
        cheb_eval(self, &s)
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c.to_f64() + 2.0 * s * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0].to_f64() + s * b1 - b2
    }

    /// Clenshaw evaluation at a complex `s`.
    pub fn eval_complex(&self, z: &XComplex) -> XComplex {
        let p = self.precision().max(z.re.precision());
        let zero = XComplex::real(XScalar::zero(p));
        let two_z = z.scale(&XScalar::from_i64(2, p));
        let mut b1 = zero.clone();
        let mut b2 = zero;
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = two_z.mul(&b1).sub(&b2).add(&XComplex::real(c.clone()));
            b2 = b1;
            b1 = b0;
        }
        z.mul(&b1).sub(&b2).add(&XComplex::real(self.coeffs[0].clone()))
    }

    /// Derivative with respect to `s`, again in Chebyshev form.
    pub fn derivative_s(&self) -> ChebPoly {
        let n = self.degree();
        let p = self.precision();
        if n == 0 {
            return ChebPoly::new(vec![XScalar::zero(p)]);
        }
        let mut d = vec![XScalar::zero(p); n + 2];
        for j in (1..=n).rev() {
            let term = &self.coeffs[j] * XScalar::from_i64(2 * j as i64, p);
            d[j - 1] = &d[j + 1] + &term;
        }
        d[0] = &d[0] * 0.5;
        d.truncate(n);
        ChebPoly::new(d)
    }

    /// Derivative with respect to `t` (`ds/dt = 2`).
    pub fn derivative_t(&self) -> ChebPoly {
        let ds = self.derivative_s();
        ChebPoly::new(ds.coeffs.into_iter().map(|c| c * 2.0).collect())
    }

    /// Sum of `|c_j| |T_j(z)|`; the natural rounding scale of an evaluation at `z`.
    pub fn magnitude_at(&self, z: &XComplex) -> XScalar {
        let p = self.precision().max(z.re.precision());
        let one = XComplex::real(XScalar::one(p));
        let two_z = z.scale(&XScalar::from_i64(2, p));
        let mut t_prev = one.clone();
        let mut t_cur = z.clone();
        let mut acc = self.coeffs[0].abs();
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            if j > 1 {
                let next = two_z.mul(&t_cur).sub(&t_prev);
                t_prev = t_cur;
                t_cur = next;
            }
            acc += c.abs() * t_cur.abs();
        }
        acc
    }

    pub fn scaled(&self, k: &XScalar) -> ChebPoly {
        ChebPoly { coeffs: self.coeffs.iter().map(|c| c * k).collect(), padded: self.padded }
    }
}

/// Clenshaw recurrence for `sum_j c_j T_j(s)`; total for any `s`.
pub fn cheb_eval(p: &ChebPoly, s: &XScalar) -> XScalar {
    let prec = p.precision().max(s.precision());
    let two_s = s * XScalar::from_i64(2, prec);
    let mut b1 = XScalar::zero(prec);
    let mut b2 = XScalar::zero(prec);
    for c in p.coeffs.iter().skip(1).rev() {
        let b0 = c + &two_s * &b1 - &b2;
        b2 = b1;
        b1 = b0;
    }
    &p.coeffs[0] + s * &b1 - &b2
}

/// Multiplies a Chebyshev series by `s`: `s T_0 = T_1`, `s T_j = (T_{j+1} + T_{j-1}) / 2`.
fn mul_by_s(c: &[XScalar], prec: u32) -> Vec<XScalar> {
    let mut out = vec![XScalar::zero(prec); c.len() + 1];
    for (j, cj) in c.iter().enumerate() {
        if j == 0 {
            out[1] += cj;
        } else {
            let half = cj * 0.5;
            out[j + 1] += &half;
            out[j - 1] += &half;
        }
    }
    out
}

/// Converts monomial coefficients in `t` to the shifted Chebyshev basis.
pub fn monomial_to_cheb(mono: &[XScalar]) -> ChebPoly {
    assert!(!mono.is_empty());
    let prec = mono.iter().map(XScalar::precision).max().unwrap();
    // Horner in t, with t = (T_0 + s) / 2.
    let mut acc = vec![mono.last().unwrap().clone()];
    for a in mono.iter().rev().skip(1) {
        let s_acc = mul_by_s(&acc, prec);
        let mut next: Vec<XScalar> = Vec::with_capacity(s_acc.len());
        for (j, v) in s_acc.into_iter().enumerate() {
            let own = acc.get(j).cloned().unwrap_or_else(|| XScalar::zero(prec));
            next.push((own + v) * 0.5);
        }
        next[0] += a;
        acc = next;
    }
    acc.truncate(mono.len());
    ChebPoly::new(acc)
}

/// Expands a shifted Chebyshev series into monomial coefficients in `t`.
pub fn cheb_to_monomial(p: &ChebPoly) -> Vec<XScalar> {
    let prec = p.precision();
    let n = p.degree();
    let mut out = vec![XScalar::zero(prec); n + 1];
    // T_j(2t - 1) built by the three-term recurrence on monomial vectors.
    let mut t_prev: Vec<XScalar> = vec![XScalar::one(prec)];
    let mut t_cur: Vec<XScalar> = vec![XScalar::from_i64(-1, prec), XScalar::from_i64(2, prec)];
    out[0] += &p.coeffs[0];
    if n >= 1 {
        for (i, v) in t_cur.iter().enumerate() {
            out[i] += &p.coeffs[1] * v;
        }
    }
    for j in 2..=n {
        // T_j = 2 (2t - 1) T_{j-1} - T_{j-2}
        let mut next = vec![XScalar::zero(prec); j + 1];
        for (i, v) in t_cur.iter().enumerate() {
            next[i + 1] += v * 4.0;
            next[i] -= v * 2.0;
        }
        for (i, v) in t_prev.iter().enumerate() {
            next[i] -= v;
        }
        for (i, v) in next.iter().enumerate() {
            out[i] += &p.coeffs[j] * v;
        }
        t_prev = t_cur;
        t_cur = next;
    }
    out
}

/// Horner evaluation of monomial coefficients.
pub fn monomial_eval(mono: &[XScalar], t: &XScalar) -> XScalar {
    let mut acc = mono.last().cloned().unwrap_or_else(|| XScalar::zero(t.precision()));
    for a in mono.iter().rev().skip(1) {
        acc = acc * t + a;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn x(v: f64) -> XScalar {
        XScalar::from_f64(v, P)
    }

    #[test]
    fn clenshaw_basics() {
        assert_eq!(cheb_eval(&ChebPoly::from_f64(&[1.0], P), &x(0.37)).to_f64(), 1.0);
        assert_eq!(cheb_eval(&ChebPoly::from_f64(&[0.0, 1.0], P), &x(-1.0)).to_f64(), -1.0);
        // T_2(s) = 2 s^2 - 1
        let t2 = cheb_eval(&ChebPoly::from_f64(&[0.0, 0.0, 1.0], P), &x(0.5)).to_f64();
        assert_eq!(t2, 2.0 * 0.25 - 1.0);
    }

    #[test]
    fn monomial_conversion_examples() {
        let t = monomial_to_cheb(&[x(0.0), x(1.0)]);
        let c: Vec<f64> = t.coeffs().iter().map(XScalar::to_f64).collect();
        assert_eq!(c, vec![0.5, 0.5]);

        let one = monomial_to_cheb(&[x(1.0)]);
        assert_eq!(one.coeffs()[0].to_f64(), 1.0);

        // ((1 + s) / 2)^2 = 3/8 T_0 + 1/2 T_1 + 1/8 T_2
        let t2 = monomial_to_cheb(&[x(0.0), x(0.0), x(1.0)]);
        let c: Vec<f64> = t2.coeffs().iter().map(XScalar::to_f64).collect();
        assert_eq!(c, vec![0.375, 0.5, 0.125]);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ChebPoly::from_f64(&[0.3, -1.2, 0.7, 2.5, -0.4], P);
        let dp = p.derivative_s();
        let s = x(0.31);
        let h = x(1e-15);
        let fd = (cheb_eval(&p, &(&s + &h)) - cheb_eval(&p, &(&s - &h))) / (h * 2.0);
        let exact = cheb_eval(&dp, &s);
        assert!(((fd - &exact) / exact).abs().to_f64() < 1e-20);
    }

    #[test]
    fn complex_eval_agrees_on_real_axis() {
        let p = ChebPoly::from_f64(&[0.3, -1.2, 0.7, 2.5], P);
        let z = XComplex::real(x(-0.45));
        let v = p.eval_complex(&z);
        assert!((v.re - cheb_eval(&p, &x(-0.45))).abs().to_f64() < 1e-35);
        assert!(v.im.is_zero());
    }
}
