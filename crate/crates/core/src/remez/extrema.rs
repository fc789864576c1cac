use crate::xnum::XScalar;

use super::{ChebRational, RemezConfig, RemezError, Target};

/// Outcome of one exchange step.
#[derive(Clone, Debug)]
pub struct Refined {
    /// New reference in `s`, strictly increasing.
    pub points: Vec<XScalar>,
    /// `|f - r|` at the new reference.
    pub eta: Vec<XScalar>,
    /// Global maximiser of `|f - r|` and its value.
    pub global: (XScalar, XScalar),
}

impl Refined {
    /// `(max eta - min eta) / max eta`.
    pub fn relative_spread(&self) -> f64 {
        let max = self.eta.iter().cloned().fold(XScalar::zero(53), XScalar::max);
        let min = self.eta.iter().cloned().fold(max.clone(), XScalar::min);
        if max.is_zero() {
            return 0.0;
        }
        ((&max - &min) / &max).to_f64()
    }
}

fn residual(target: &Target, r: &ChebRational, s: &XScalar) -> XScalar {
    target.eval(s) - r.eval(s)
}

fn to_t(s: &XScalar) -> XScalar {
    (s + 1.0) * 0.5
}

fn to_s(t: &XScalar) -> XScalar {
    t * 2.0 - 1.0
}

/// Sample points in `s` used for global scans: uniform in `s` plus a
/// logarithmic sweep of `t` toward zero, where the extrema cluster.
pub(super) fn global_grid(prec: u32) -> Vec<XScalar> {
    let mut ts: Vec<XScalar> = Vec::new();
    let uniform = 128;
    for i in 0..=uniform {
        ts.push(XScalar::from_ratio(i, uniform, prec));
    }
    let per_decade = 16;
    let decades = 36;
    let step = XScalar::from_i64(10, prec).pow(&XScalar::from_ratio(-1, per_decade, prec));
    let mut t = XScalar::one(prec);
    for _ in 0..(per_decade * decades) {
        t = &t * &step;
        ts.push(t.clone());
    }
    let mut s: Vec<XScalar> = ts.iter().map(to_s).collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.dedup();
    s
}

/// How a bracket is sampled: uniformly in `s`, or uniformly in `ln t` when
/// the bracket spans more than a decade of `t`.
enum Coord {
    Linear,
    Log,
}

struct Bracket {
    coord: Coord,
    lo: XScalar,
    hi: XScalar,
}

impl Bracket {
    fn new(a: &XScalar, b: &XScalar) -> Self {
        let (ta, tb) = (to_t(a), to_t(b));
        if ta.is_zero() || ta.is_sign_negative() {
            if tb < 0.1 && !tb.is_zero() {
                let floor = &tb * XScalar::exp2i(-40, tb.precision());
                return Bracket { coord: Coord::Log, lo: floor.ln(), hi: tb.ln() };
            }
        } else if &tb / &ta > 10.0 {
            return Bracket { coord: Coord::Log, lo: ta.ln(), hi: tb.ln() };
        }
        Bracket { coord: Coord::Linear, lo: a.clone(), hi: b.clone() }
    }

    fn point(&self, u: &XScalar) -> XScalar {
        match self.coord {
            Coord::Linear => u.clone(),
            Coord::Log => to_s(&u.exp()),
        }
    }
}

/// Maximises `obj` over `[a, b]` by iterated grid refinement. `extra` are
/// candidates evaluated once (previous reference point, bracket ends).
fn maximize<F>(a: &XScalar, b: &XScalar, extra: &[XScalar], n: usize, rounds: usize, obj: F) -> (XScalar, XScalar)
where
    F: Fn(&XScalar) -> XScalar,
{
    let br = Bracket::new(a, b);
    let mut best_s = a.clone();
    let mut best_v = obj(a);
    let consider = |s: XScalar, v: XScalar, best_s: &mut XScalar, best_v: &mut XScalar| {
        if v > *best_v {
            *best_v = v;
            *best_s = s;
        }
    };
    for s in extra.iter().chain(std::iter::once(b)) {
        if s >= a && s <= b {
            let v = obj(s);
            consider(s.clone(), v, &mut best_s, &mut best_v);
        }
    }

    let (lo0, hi0) = (br.lo.clone(), br.hi.clone());
    let (mut lo, mut hi) = (lo0.clone(), hi0.clone());
    let steps = XScalar::from_i64((n - 1) as i64, lo.precision());
    for _ in 0..=rounds {
        let h = (&hi - &lo) / &steps;
        let mut round_u = lo.clone();
        let mut round_v: Option<XScalar> = None;
        for j in 0..n {
            let u = &lo + &(&h * XScalar::from_i64(j as i64, lo.precision()));
            let s = br.point(&u).max(a.clone()).min(b.clone());
            let v = obj(&s);
            if round_v.as_ref().map_or(true, |rv| v > *rv) {
                round_v = Some(v.clone());
                round_u = u.clone();
            }
            consider(s, v, &mut best_s, &mut best_v);
        }
        lo = (&round_u - &h).max(lo0.clone());
        hi = (&round_u + &h).min(hi0.clone());
        if hi <= lo {
            break;
        }
    }
    (best_s, best_v)
}

/// Zero of the residual between `a` and `b`, where the residual has signs
/// `sa` at `a` and the opposite at `b`.
fn bisect_zero(target: &Target, r: &ChebRational, a: &XScalar, b: &XScalar, sa: i32) -> XScalar {
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..80 {
        let (ta, tb) = (to_t(&a), to_t(&b));
        let mid = if !ta.is_zero() && !ta.is_sign_negative() && &tb / &ta > 4.0 {
            to_s(&(&ta * &tb).sqrt())
        } else {
            (&a + &b) * 0.5
        };
        if mid <= a || mid >= b {
            break;
        }
        let v = residual(target, r, &mid).signum_i32();
        if v == 0 {
            return mid;
        }
        if v == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    (&a + &b) * 0.5
}

fn alternates(signs: &[i32]) -> bool {
    signs.iter().all(|&s| s != 0) && signs.windows(2).all(|w| w[0] == -w[1])
}

/// Step 1 of the exchange: moves every reference point to the local maximum
/// of `|f - r|` inside its sign bracket, then merges the global maximiser.
pub fn refine_extrema(
    target: &Target,
    r: &ChebRational,
    points: &[XScalar],
    cfg: &RemezConfig,
) -> Result<Refined, RemezError> {
    let l = points.len();
    let prec = cfg.precision_bits;
    let signs: Vec<i32> = points.iter().map(|s| residual(target, r, s).signum_i32()).collect();
    if !alternates(&signs) {
        return Err(RemezError::AlternationLost { iteration: 0 });
    }

    let neg_one = XScalar::from_i64(-1, prec);
    let one = XScalar::one(prec);
    let mut edges = vec![neg_one.clone()];
    for i in 0..l - 1 {
        edges.push(bisect_zero(target, r, &points[i], &points[i + 1], signs[i]));
    }
    edges.push(one.clone());

    let n = cfg.grid_points_per_interval;
    let rounds = cfg.grid_refinements;
    // The endpoints always belong to the alternation set of t^(beta - alpha);
    // pinning them keeps rounding noise near t = 0 from dragging the first
    // point inward.
    let mut new_points = Vec::with_capacity(l);
    new_points.push(neg_one.clone());
    for i in 1..l - 1 {
        let sg = signs[i] as f64;
        let obj = |s: &XScalar| residual(target, r, s) * sg;
        let (s, _) = maximize(&edges[i], &edges[i + 1], &[points[i].clone()], n, rounds, obj);
        new_points.push(s);
    }
    new_points.push(one.clone());

    // Global maximiser: a fine scan catches oscillations the brackets miss.
    let abs_obj = |s: &XScalar| residual(target, r, s).abs();
    let grid = global_grid(prec);
    let (gi, gv) = grid
        .iter()
        .enumerate()
        .map(|(i, s)| (i, abs_obj(s)))
        .fold((0, XScalar::zero(prec)), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let local_max = new_points.iter().map(|s| abs_obj(s)).fold(XScalar::zero(prec), XScalar::max);
    let (mut gs, mut gval) = new_points
        .iter()
        .map(|s| (s.clone(), abs_obj(s)))
        .fold((new_points[0].clone(), XScalar::zero(prec)), |acc, c| if c.1 > acc.1 { c } else { acc });
    if gv > local_max {
        let lo = grid[gi.saturating_sub(1)].clone();
        let hi = grid[(gi + 1).min(grid.len() - 1)].clone();
        let (s, v) = maximize(&lo, &hi, &[grid[gi].clone()], n, rounds, abs_obj);
        gs = s;
        gval = v;
        exchange(target, r, &mut new_points, &gs, prec);
    }

    let eta: Vec<XScalar> = new_points.iter().map(|s| abs_obj(s)).collect();
    let new_signs: Vec<i32> = new_points.iter().map(|s| residual(target, r, s).signum_i32()).collect();
    let increasing = new_points.windows(2).all(|w| w[0] < w[1]);
    if !alternates(&new_signs) || !increasing {
        return Err(RemezError::AlternationLost { iteration: 0 });
    }
    Ok(Refined { points: new_points, eta, global: (gs, gval) })
}

/// Single-point exchange keeping sign alternation.
fn exchange(target: &Target, r: &ChebRational, pts: &mut Vec<XScalar>, s_star: &XScalar, prec: u32) {
    let tie = XScalar::exp2i(-((prec / 2) as i32), prec);
    if pts.iter().any(|p| (p - s_star).abs() <= tie) {
        return;
    }
    let sign = |s: &XScalar| residual(target, r, s).signum_i32();
    let star = sign(s_star);
    let l = pts.len();
    if *s_star < pts[0] {
        if star == sign(&pts[0]) {
            pts[0] = s_star.clone();
        } else {
            pts.pop();
            pts.insert(0, s_star.clone());
        }
        return;
    }
    if *s_star > pts[l - 1] {
        if star == sign(&pts[l - 1]) {
            pts[l - 1] = s_star.clone();
        } else {
            pts.remove(0);
            pts.push(s_star.clone());
        }
        return;
    }
    let j = pts.windows(2).position(|w| w[0] < *s_star && *s_star < w[1]).unwrap();
    if star == sign(&pts[j]) {
        pts[j] = s_star.clone();
    } else {
        pts[j + 1] = s_star.clone();
    }
}
