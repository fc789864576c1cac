use crate::xnum::XScalar;

/// `f(s) = ((1 + s) / 2)^(beta - alpha)`, the function being approximated.
#[derive(Clone, Debug)]
pub struct Target {
    pub alpha: f64,
    pub beta: u32,
    gamma: XScalar,
    prec: u32,
}

impl Target {
    pub fn new(alpha: f64, beta: u32, prec: u32) -> Self {
        // Go through the shortest decimal form so that 0.1 means one tenth.
        let a = XScalar::parse_decimal(&format!("{alpha}"), prec)
            .unwrap_or_else(|_| XScalar::from_f64(alpha, prec));
        let gamma = XScalar::from_i64(beta as i64, prec) - a;
        Target { alpha, beta, gamma, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn gamma(&self) -> &XScalar {
        &self.gamma
    }

    /// Value at `s`; zero for `s <= -1`.
    pub fn eval(&self, s: &XScalar) -> XScalar {
        let t = (s + 1.0) * 0.5;
        self.eval_t(&t)
    }

    pub fn eval_t(&self, t: &XScalar) -> XScalar {
        if t.is_zero() || t.is_sign_negative() {
            return XScalar::zero(self.prec);
        }
        t.with_precision(self.prec).pow(&self.gamma)
    }
}
