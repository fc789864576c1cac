use crate::xnum::{dense_solve_with, ChebPoly, DenseSolveOptions, XScalar};

use super::extrema::global_grid;
use super::{ChebRational, RemezConfig, RemezError, Target};

/// Sign attached to the level at reference point `i` (zero based): the first
/// point gets `-E`.
pub(super) fn sigma(i: usize) -> i32 {
    if i % 2 == 0 {
        -1
    } else {
        1
    }
}

/// The leveled matrices are legitimately ill conditioned (the denominator is
/// tiny near `t = 0`), so only pivots within a few bits of the working
/// precision count as singular.
pub(super) fn solve_options(prec: u32) -> DenseSolveOptions {
    DenseSolveOptions {
        pivot_threshold: Some(XScalar::exp2i(-(prec as i32) + 12, prec)),
        ..DenseSolveOptions::default()
    }
}

fn dot(a: &[XScalar], b: &[XScalar]) -> XScalar {
    let mut acc = XScalar::zero(a.first().map_or(53, XScalar::precision));
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Chebyshev values `T_0(s) .. T_n(s)`.
fn cheb_values(s: &XScalar, n: usize) -> Vec<XScalar> {
    let prec = s.precision();
    let mut out = vec![XScalar::one(prec)];
    if n >= 1 {
        out.push(s.clone());
    }
    let two_s = s * 2.0;
    for j in 2..=n {
        let next = &two_s * &out[j - 1] - &out[j - 2];
        out.push(next);
    }
    out
}

struct System {
    tvals: Vec<Vec<XScalar>>,
    f: Vec<XScalar>,
    m: usize,
    k: usize,
}

impl System {
    /// One linearised solve: the `E * Q` product uses `e_old`.
    fn step(&self, e_old: &XScalar) -> Result<(Vec<XScalar>, XScalar), RemezError> {
        let l = self.f.len();
        let (m, k) = (self.m, self.k);
        let mut rows = Vec::with_capacity(l);
        for i in 0..l {
            let sg = sigma(i) as f64;
            let mut row = Vec::with_capacity(l);
            row.extend(self.tvals[i][..=m].iter().cloned());
            let factor = &self.f[i] - &(e_old * sg);
            for j in 1..=k {
                row.push(-(&factor * &self.tvals[i][j]));
            }
            row.push(XScalar::from_f64(sg, e_old.precision()));
            rows.push(row);
        }
        let x = dense_solve_with(&rows, &self.f, &solve_options(e_old.precision()))?;
        let e_new = x[l - 1].clone();
        Ok((x, e_new))
    }

    /// `max_i |f_i - r(s_i) - sigma_i E| / |E|`.
    fn level_defect(&self, x: &[XScalar]) -> XScalar {
        let (m, k) = (self.m, self.k);
        let e = &x[x.len() - 1];
        let mut worst = XScalar::zero(e.precision());
        for (i, tv) in self.tvals.iter().enumerate() {
            let p = dot(&tv[..=m], &x[..=m]);
            let q = XScalar::one(e.precision()) + dot(&tv[1..=k], &x[m + 1..m + 1 + k]);
            let d = (&self.f[i] - &(p / q) - &(e * sigma(i) as f64)).abs();
            worst = worst.max(d);
        }
        if e.is_zero() {
            worst
        } else {
            worst / e.abs()
        }
    }

    /// Newton step on `P(s_i) - (f_i - sigma_i E) Q(s_i) = 0` with `q_0 = 1`.
    fn newton(&self, x: &[XScalar]) -> Result<Vec<XScalar>, RemezError> {
        let l = self.f.len();
        let (m, k) = (self.m, self.k);
        let prec = x[0].precision();
        let e = &x[l - 1];
        let mut jac = Vec::with_capacity(l);
        let mut rhs = Vec::with_capacity(l);
        for i in 0..l {
            let tv = &self.tvals[i];
            let sg = sigma(i) as f64;
            let factor = &self.f[i] - &(e * sg);
            let p = dot(&tv[..=m], &x[..=m]);
            let q = XScalar::one(prec) + dot(&tv[1..=k], &x[m + 1..m + 1 + k]);
            let mut row = Vec::with_capacity(l);
            row.extend(tv[..=m].iter().cloned());
            for j in 1..=k {
                row.push(-(&factor * &tv[j]));
            }
            row.push(&q * sg);
            jac.push(row);
            rhs.push(-(p - &factor * &q));
        }
        let dx = dense_solve_with(&jac, &rhs, &solve_options(prec))?;
        Ok(x.iter().zip(&dx).map(|(a, d)| a + d).collect())
    }

    fn rational(&self, x: &[XScalar]) -> ChebRational {
        let (m, k) = (self.m, self.k);
        let prec = x[0].precision();
        let num = ChebPoly::new(x[..=m].to_vec());
        let mut den = vec![XScalar::one(prec)];
        den.extend(x[m + 1..m + 1 + k].iter().cloned());
        ChebRational { num, den: ChebPoly::new(den) }
    }
}

/// Solves `f(s_i) - r(s_i) = sigma_i E` for the coefficients of `r` and the
/// level `E`, starting the inner fixed point from `prev_e`.
///
/// `prev_r` fixes the degrees. The iteration is accelerated with
/// Aitken-Steffensen and falls back to the plain fixed point when the
/// accelerated sequence misbehaves.
pub fn solve_leveled_system(
    points: &[XScalar],
    f_values: &[XScalar],
    prev_e: &XScalar,
    prev_r: &ChebRational,
    cfg: &RemezConfig,
) -> Result<(ChebRational, XScalar), RemezError> {
    let (m, k) = (prev_r.m(), prev_r.k());
    let l = m + k + 2;
    if points.len() != l || f_values.len() != l {
        return Err(RemezError::InvalidInput(format!(
            "reference has {} points, degrees ({m}, {k}) need {l}",
            points.len()
        )));
    }
    if !prev_e.is_finite() {
        return Err(RemezError::InvalidInput("previous level is not finite".into()));
    }
    let prec = cfg.precision_bits;
    let nmax = m.max(k);
    let sys = System {
        tvals: points.iter().map(|s| cheb_values(&s.with_precision(prec), nmax)).collect(),
        f: f_values.iter().map(|v| v.with_precision(prec)).collect(),
        m,
        k,
    };
    let e0 = prev_e.with_precision(prec);

    let x = match inner(&sys, &e0, cfg, true) {
        Ok(x) => x,
        Err(RemezError::InnerDiverged { .. }) => inner(&sys, &e0, cfg, false)?,
        Err(other) => return Err(other),
    };
    let x = polish(&sys, x, prec);
    let e = x[l - 1].clone();
    Ok((sys.rational(&x), e))
}

/// The linearised iteration stops once `E` settles, but near `t = 0` the
/// denominator is tiny and a level that is still off in the last bits
/// shows up as a visibly uneven residual. A few Newton steps on the full
/// system bring the levels down to `2^(-prec/2)` relative.
fn polish(sys: &System, mut x: Vec<XScalar>, prec: u32) -> Vec<XScalar> {
    let goal = XScalar::exp2i(-((prec / 2) as i32), prec);
    let mut defect = sys.level_defect(&x);
    for _ in 0..6 {
        if defect <= goal {
            break;
        }
        let Ok(next) = sys.newton(&x) else { break };
        let d = sys.level_defect(&next);
        if !d.is_finite() || d >= defect {
            break;
        }
        x = next;
        defect = d;
    }
    x
}

fn inner(
    sys: &System,
    e_start: &XScalar,
    cfg: &RemezConfig,
    accelerate: bool,
) -> Result<Vec<XScalar>, RemezError> {
    let prec = cfg.precision_bits;
    let eps = XScalar::exp2i(-((prec / 2) as i32), prec);

    let mut e0 = e_start.clone();
    for _ in 0..cfg.max_inner {
        let (x1, e1) = sys.step(&e0)?;
        if (&e1 - &e0).abs() < eps {
            return Ok(x1);
        }
        if !accelerate {
            e0 = e1;
            continue;
        }
        let (x2, e2) = sys.step(&e1)?;
        if (&e2 - &e1).abs() < eps {
            return Ok(x2);
        }
        let denom = &e2 - &(&e1 * 2.0) + &e0;
        let next = if denom.is_zero() {
            e2.clone()
        } else {
            let diff = &e1 - &e0;
            &e0 - &(diff.square() / &denom)
        };
        e0 = if next.is_finite() { next } else { e2 };
    }
    Err(RemezError::InnerDiverged { iterations: cfg.max_inner })
}

/// Denominator keeps one sign on a fine grid of `[-1, 1]`.
pub(super) fn denominator_sign_constant(den: &ChebPoly, target: &Target) -> bool {
    let signs: Vec<i32> = global_grid(target.precision())
        .iter()
        .map(|s| {
            let v = den.eval(s);
            if v.is_finite() {
                v.signum_i32()
            } else {
                0
            }
        })
        .collect();
    signs[0] != 0 && signs.iter().all(|&sg| sg == signs[0])
}
