use crate::xnum::{dense_solve_with, ChebPoly, XScalar};

use super::leveled::{denominator_sign_constant, sigma, solve_options};
use super::{check_inputs, ChebRational, RemezConfig, RemezError, SeedReference, Target};

/// `l` equispaced points on `[-1, 1]`.
pub fn uniform_reference(l: usize, prec: u32) -> Vec<XScalar> {
    if l == 1 {
        return vec![XScalar::from_i64(-1, prec)];
    }
    (0..l)
        .map(|i| XScalar::from_ratio(2 * i as i64, (l - 1) as i64, prec) - 1.0)
        .collect()
}

/// `s_0 = -1` and `s_i = -1 + 2 ratio^(i - (l - 1))`: points crowd toward
/// `t = 0` with consecutive gaps in `t` growing by `ratio`.
pub fn geometric_reference(l: usize, ratio: f64, prec: u32) -> Vec<XScalar> {
    let r = XScalar::from_f64(ratio, prec);
    let mut out = vec![XScalar::from_i64(-1, prec)];
    for i in 1..l {
        let t = r.powi(i as i32 - (l as i32 - 1));
        out.push(t * 2.0 - 1.0);
    }
    out
}

const GEOMETRIC_RATIO: f64 = 10.0;

fn cheb_row(s: &XScalar, n: usize) -> Vec<XScalar> {
    let mut out = vec![XScalar::one(s.precision())];
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

fn split(x: &[XScalar], m: usize, k: usize) -> ChebRational {
    let prec = x[0].precision();
    let mut den = vec![XScalar::one(prec)];
    den.extend(x[m + 1..m + 1 + k].iter().cloned());
    ChebRational { num: ChebPoly::new(x[..=m].to_vec()), den: ChebPoly::new(den) }
}

/// Linearised least squares `P(s_i) - f_i (Q(s_i) - 1) ~ f_i`.
fn least_squares(points: &[XScalar], f: &[XScalar], m: usize, k: usize) -> Option<ChebRational> {
    let nmax = m.max(k);
    let rows: Vec<Vec<XScalar>> = points
        .iter()
        .zip(f)
        .map(|(s, fv)| {
            let t = cheb_row(s, nmax);
            let mut row: Vec<XScalar> = t[..=m].to_vec();
            for tj in &t[1..=k] {
                row.push(-(fv * tj));
            }
            row
        })
        .collect();
    let n = m + k + 1;
    let prec = points[0].precision();
    let mut ata = vec![vec![XScalar::zero(prec); n]; n];
    let mut atb = vec![XScalar::zero(prec); n];
    for (row, fv) in rows.iter().zip(f) {
        for a in 0..n {
            atb[a] += &row[a] * fv;
            for b in 0..n {
                ata[a][b] += &row[a] * &row[b];
            }
        }
    }
    dense_solve_with(&ata, &atb, &solve_options(points[0].precision())).ok().map(|x| split(&x, m, k))
}

/// The leveled system with the `E * Q` product dropped.
fn leveled_guess(points: &[XScalar], f: &[XScalar], m: usize, k: usize) -> Option<ChebRational> {
    let nmax = m.max(k);
    let rows: Vec<Vec<XScalar>> = points
        .iter()
        .zip(f)
        .enumerate()
        .map(|(i, (s, fv))| {
            let t = cheb_row(s, nmax);
            let mut row: Vec<XScalar> = t[..=m].to_vec();
            for tj in &t[1..=k] {
                row.push(-(fv * tj));
            }
            row.push(XScalar::from_i64(sigma(i) as i64, s.precision()));
            row
        })
        .collect();
    dense_solve_with(&rows, f, &solve_options(points[0].precision())).ok().map(|x| split(&x, m, k))
}

fn admissible(target: &Target, r: &ChebRational, points: &[XScalar], f: &[XScalar]) -> bool {
    let signs: Vec<i32> = points.iter().zip(f).map(|(s, fv)| (fv - r.eval(s)).signum_i32()).collect();
    signs.iter().all(|&v| v != 0)
        && signs.windows(2).all(|w| w[0] == -w[1])
        && denominator_sign_constant(&r.den, target)
}

pub(super) fn initialize_with(
    target: &Target,
    m: usize,
    k: usize,
    seed: SeedReference,
    cfg: &RemezConfig,
) -> Result<(Vec<XScalar>, ChebRational), RemezError> {
    let l = m + k + 2;
    let prec = cfg.precision_bits;
    let points = match seed {
        SeedReference::Uniform => uniform_reference(l, prec),
        SeedReference::GeometricNearZero => geometric_reference(l, GEOMETRIC_RATIO, prec),
    };
    let r0 = starting_rational(target, &points, m, k)?;
    Ok((points, r0))
}

/// A rational function of degrees `(m, k)` whose residual alternates on
/// `points`: least squares first, then the leveled system with the level
/// product dropped.
pub(super) fn starting_rational(
    target: &Target,
    points: &[XScalar],
    m: usize,
    k: usize,
) -> Result<ChebRational, RemezError> {
    let f: Vec<XScalar> = points.iter().map(|s| target.eval(s)).collect();
    for guess in [least_squares(points, &f, m, k), leveled_guess(points, &f, m, k)]
        .into_iter()
        .flatten()
    {
        if admissible(target, &guess, points, &f) {
            return Ok(guess);
        }
    }
    Err(RemezError::BadReference)
}

/// Reference for degrees `(m + 1, k + 1)` built from the extreme points (in
/// `t`) of a converged `(m, k)` approximant: keeps `t = 0` and `t = 1`,
/// resamples the positive points uniformly in `ln t` and reaches one step
/// further toward zero, where the extra points go.
pub(super) fn continuation_reference(prev: &[XScalar], prec: u32) -> Vec<XScalar> {
    let logs: Vec<f64> = prev[1..].iter().map(|t| t.to_f64().ln()).collect();
    let p = logs.len();
    let mut ext = Vec::with_capacity(p + 1);
    ext.push(logs[0] - 1.3 * (logs[1] - logs[0]));
    ext.extend(logs.iter().copied());
    let count = p + 2;
    let mut out = vec![XScalar::from_i64(-1, prec)];
    for j in 0..count {
        let x = j as f64 * (ext.len() - 1) as f64 / (count - 1) as f64;
        let i = (x.floor() as usize).min(ext.len() - 2);
        let w = x - i as f64;
        let u = ext[i] * (1.0 - w) + ext[i + 1] * w;
        let t = if j + 1 == count { XScalar::one(prec) } else { XScalar::from_f64(u.exp(), prec) };
        out.push(t * 2.0 - 1.0);
    }
    out
}

/// Starting reference and a rational function whose residual alternates in
/// sign on it. The configured seeding is tried first, then the other one.
pub fn initialize_reference(
    alpha: f64,
    beta: u32,
    m: usize,
    k: usize,
    cfg: &RemezConfig,
) -> Result<(Vec<XScalar>, ChebRational), RemezError> {
    check_inputs(alpha, beta, m, k, cfg)?;
    let target = Target::new(alpha, beta, cfg.precision_bits);
    initialize_with(&target, m, k, cfg.seed_reference, cfg)
        .or_else(|_| initialize_with(&target, m, k, cfg.seed_reference.other(), cfg))
}
