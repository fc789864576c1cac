use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decomp::PartialFractionForm;
use crate::operators::{
    assemble, oracle_frac_apply, random_eigen_mix, special_rhs, weighted_norm, OperatorKind, RhsKind, SparseSpdOperator,
    SpectralOracle,
};
use crate::remez::RemezConfig;
use crate::solvers::{
    bura_apply, complementary_pair_bound, kprime_from_kq, multi_step_apply, multi_step_bound, quadrature_apply,
    shifted_solve, BoundKind, SolveConfig,
};

use super::{CaseRecord, CoefficientCache, ExperimentId, ExperimentParams, ExperimentReport, HarnessError};

/// Largest 1D `N`.
pub const MAX_1D: usize = (1 << 20) - 1;
/// Largest 2D resolution without the full flag, and with it.
pub const MAX_2D_DEFAULT: usize = 1 << 9;
pub const MAX_2D_FULL: usize = 1 << 10;
/// Largest 3D resolution.
pub const MAX_3D: usize = 64;

const ALPHAS: [f64; 3] = [0.25, 0.5, 0.75];

/// The four error quantities of a sweep over eigenvectors and random mixes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorStats {
    pub max_eigen: f64,
    pub avg_eigen: f64,
    pub max_random: f64,
    pub avg_random: f64,
    /// Total solver iterations over the sweep.
    pub iterations: usize,
}

fn max_avg(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let max = v.iter().copied().fold(0.0, f64::max);
    (max, v.iter().sum::<f64>() / v.len() as f64)
}

/// Applies `ratio` to every eigenvector of `oracle` and to `trials` random
/// mixes. Trial `t` draws from stream `t` of a ChaCha8 generator seeded with
/// `seed`, so results do not depend on scheduling.
fn sweep<F>(oracle: &SpectralOracle, trials: usize, seed: u64, ratio: F) -> Result<ErrorStats, HarnessError>
where
    F: Fn(&[f64]) -> Result<(f64, usize), HarnessError> + Sync,
{
    let eig: Vec<(f64, usize)> =
        (0..oracle.len()).into_par_iter().map(|i| ratio(&oracle.eigenvector(i))).collect::<Result<_, _>>()?;
    let rnd: Vec<(f64, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            ratio(&random_eigen_mix(oracle.basis(), &mut rng))
        })
        .collect::<Result<_, _>>()?;
    let e: Vec<f64> = eig.iter().map(|x| x.0).collect();
    let r: Vec<f64> = rnd.iter().map(|x| x.0).collect();
    let (max_eigen, avg_eigen) = max_avg(&e);
    let (max_random, avg_random) = max_avg(&r);
    let iterations = eig.iter().chain(&rnd).map(|x| x.1).sum();
    Ok(ErrorStats { max_eigen, avg_eigen, max_random, avg_random, iterations })
}

fn iterations(rep: &crate::solvers::FracSolveReport) -> usize {
    rep.per_system.iter().map(|s| s.iterations).sum()
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn laplace_1d(n: usize) -> Result<(SparseSpdOperator, SpectralOracle), HarnessError> {
    if n == 0 || n > MAX_1D {
        return Err(HarnessError::InvalidParams(format!("1D size N = {n} is outside 1..={MAX_1D}")));
    }
    let a = assemble(OperatorKind::Laplace1d, n + 1, 1.0)?;
    let o = SpectralOracle::laplace_1d(n);
    Ok((a, o))
}

/// 1D error ratios `||u_r - u||_A / ||f||_(A^(1 - 2 beta))` of one
/// approximant with exact tridiagonal solves, `N` interior nodes.
pub fn validate_case(pf: &PartialFractionForm, n: usize, trials: usize, seed: u64) -> Result<ErrorStats, HarnessError> {
    let (a, oracle) = laplace_1d(n)?;
    let cfg = SolveConfig::thomas();
    let gamma_f = 1.0 - 2.0 * pf.beta as f64;
    sweep(&oracle, trials, seed, |f| {
        let rep = bura_apply(pf, &a, f, &cfg)?;
        let u = oracle_frac_apply(&oracle, -pf.alpha, f);
        let ratio = weighted_norm(&oracle, 1.0, &diff(&rep.u_r, &u)) / weighted_norm(&oracle, gamma_f, f);
        Ok((ratio, iterations(&rep)))
    })
}

/// Same ratios for a composition of `beta = 1` steps.
pub fn multistep_case(pfs: &[PartialFractionForm], n: usize, trials: usize, seed: u64) -> Result<ErrorStats, HarnessError> {
    let (a, oracle) = laplace_1d(n)?;
    let cfg = SolveConfig::thomas();
    let alpha: f64 = pfs.iter().map(|p| p.alpha).sum();
    sweep(&oracle, trials, seed, |f| {
        let rep = multi_step_apply(pfs, alpha, &a, f, &cfg)?;
        let u = oracle_frac_apply(&oracle, -alpha, f);
        let ratio = weighted_norm(&oracle, 1.0, &diff(&rep.u_r, &u)) / weighted_norm(&oracle, -1.0, f);
        Ok((ratio, iterations(&rep)))
    })
}

/// `f_r = A r_outer(A) A^-1 r_inner(A) A^-1 f`, the reconstruction of `f`.
fn reconstruct(
    inner: &PartialFractionForm,
    outer: &PartialFractionForm,
    a: &SparseSpdOperator,
    f: &[f64],
    cfg: &SolveConfig,
) -> Result<(Vec<f64>, usize), HarnessError> {
    let u1 = bura_apply(inner, a, f, cfg)?;
    let u2 = bura_apply(outer, a, &u1.u_r, cfg)?;
    Ok((a.apply(&u2.u_r), iterations(&u1) + iterations(&u2)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdCheck1d {
    pub stats: ErrorStats,
    /// Ratio for `f = (1, ..., 1)`.
    pub ones: f64,
    /// Ratio for `f = (1, 0, ..., 0)`.
    pub e1: f64,
}

/// `||f_r - f|| / ||A^-1 f||` in 1D with exact solves.
pub fn id_check_1d_case(
    inner: &PartialFractionForm,
    outer: &PartialFractionForm,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<IdCheck1d, HarnessError> {
    let (a, oracle) = laplace_1d(n)?;
    let cfg = SolveConfig::thomas();
    let ratio = |f: &[f64]| -> Result<(f64, usize), HarnessError> {
        let (fr, it) = reconstruct(inner, outer, &a, f, &cfg)?;
        Ok((norm2(&diff(&fr, f)) / norm2(&oracle_frac_apply(&oracle, -1.0, f)), it))
    };
    let stats = sweep(&oracle, trials, seed, ratio)?;
    let grid = a.grid();
    let ones = ratio(&special_rhs(RhsKind::Ones, &grid, seed))?.0;
    let e1 = ratio(&special_rhs(RhsKind::E1, &grid, seed))?.0;
    Ok(IdCheck1d { stats, ones, e1 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdCheck3d {
    pub ones: f64,
    pub e1: f64,
    pub iterations: usize,
}

/// The reconstruction on the 7-point jump operator at resolution `h^-1`.
/// `||A^-1 f||` comes from one more solve at the same tolerance.
pub fn id_check_3d_case(
    inner: &PartialFractionForm,
    outer: &PartialFractionForm,
    resolution: usize,
    mu: f64,
    cfg: &SolveConfig,
) -> Result<IdCheck3d, HarnessError> {
    if !(2..=MAX_3D).contains(&resolution) {
        return Err(HarnessError::InvalidParams(format!("3D resolution {resolution} is outside 2..={MAX_3D}")));
    }
    let a = assemble(OperatorKind::Laplace3d7ptJump, resolution, mu)?;
    let grid = a.grid();
    let mut total = 0;
    let mut one = |kind| -> Result<f64, HarnessError> {
        let f = special_rhs(kind, &grid, 0);
        let (fr, it) = reconstruct(inner, outer, &a, &f, cfg)?;
        let x = shifted_solve(&a, 0.0, &f, cfg)?;
        total += it + x.iterations;
        Ok(norm2(&diff(&fr, &f)) / norm2(&x.x))
    };
    let ones = one(RhsKind::Ones)?;
    let e1 = one(RhsKind::E1)?;
    Ok(IdCheck3d { ones, e1, iterations: total })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Compare2d {
    /// `||u_ref - u_r|| / ||f||`.
    pub bura: f64,
    pub bura_systems: usize,
    pub bura_iterations: usize,
    /// `||u_ref - u_Q|| / ||f||`.
    pub quadrature: f64,
    pub quadrature_systems: usize,
}

/// BURA against sinc quadrature on the checkerboard problem
/// `(-Delta)^alpha u = f`, exact tensor-product reference.
pub fn compare_2d_case(
    pf: &PartialFractionForm,
    resolution: usize,
    kq: f64,
    cfg: &SolveConfig,
) -> Result<Compare2d, HarnessError> {
    if !(2..=MAX_2D_FULL).contains(&resolution) {
        return Err(HarnessError::InvalidParams(format!("2D resolution {resolution} is outside 2..={MAX_2D_FULL}")));
    }
    let a = assemble(OperatorKind::Laplace2d5pt, resolution, 1.0)?;
    let oracle = SpectralOracle::for_operator(&a).expect("2D Laplacian has an oracle");
    let f = special_rhs(RhsKind::Checkerboard, &a.grid(), 0);
    let alpha = pf.alpha;
    // AA^-alpha = scale^-alpha A^-alpha
    let s = a.scale.powf(-alpha);
    let u_ref: Vec<f64> = oracle_frac_apply(&oracle, -alpha, &f).iter().map(|x| x * s).collect();
    let rep = bura_apply(pf, &a, &f, cfg)?;
    let u_r: Vec<f64> = rep.u_r.iter().map(|x| x * s).collect();
    let nf = norm2(&f);
    let (u_q, count) = quadrature_apply(&a, &f, alpha, kprime_from_kq(alpha, kq), cfg)?;
    Ok(Compare2d {
        bura: norm2(&diff(&u_ref, &u_r)) / nf,
        bura_systems: pf.system_count(),
        bura_iterations: iterations(&rep),
        quadrature: norm2(&diff(&u_ref, &u_q)) / nf,
        quadrature_systems: count,
    })
}

struct Ctx<'a> {
    params: &'a ExperimentParams,
    cache: &'a CoefficientCache,
    remez: RemezConfig,
}

impl Ctx<'_> {
    fn entry(&self, alpha: f64, beta: u32, m: usize, k: usize) -> Result<super::CoefficientCacheEntry, HarnessError> {
        self.cache.get_or_compute(alpha, beta, m, k, &self.remez)
    }

    fn pf(&self, alpha: f64, beta: u32, m: usize, k: usize) -> Result<PartialFractionForm, HarnessError> {
        Ok(self.entry(alpha, beta, m, k)?.partial_fractions()?)
    }

    fn base(&self, case: String, alpha: f64, beta: u32, m: usize, k: usize) -> CaseRecord {
        CaseRecord { case, alpha, steps: alpha.to_string(), beta, m, k, seed: self.params.seed, ..CaseRecord::default() }
    }

    fn sizes(&self, default: &[usize]) -> Vec<usize> {
        self.params.sizes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn degrees(&self, default: &[usize]) -> Vec<usize> {
        self.params.degrees.clone().unwrap_or_else(|| default.to_vec())
    }
}

fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|p| 1usize << p).collect()
}

fn stats_into(r: &mut CaseRecord, s: &ErrorStats) {
    r.max_eigen_error = Some(s.max_eigen);
    r.avg_eigen_error = Some(s.avg_eigen);
    r.max_random_error = Some(s.max_random);
    r.avg_random_error = Some(s.avg_random);
    r.iterations = Some(s.iterations);
}

fn one_d(r: &mut CaseRecord, n: usize) {
    r.n = Some(n);
    r.h = Some(1.0 / (n + 1) as f64);
    r.method = Some("thomas".into());
}

/// Runs experiment `id`, writing nothing; see [`ExperimentReport::write`].
pub fn run_experiment(
    id: ExperimentId,
    params: &ExperimentParams,
    cache: &CoefficientCache,
) -> Result<ExperimentReport, HarnessError> {
    if let Some(s) = &params.sizes {
        if let Some(&bad) = s.iter().find(|&&n| n == 0 || n > MAX_1D) {
            return Err(HarnessError::InvalidParams(format!("1D size N = {bad} is outside 1..={MAX_1D}")));
        }
    }
    if !(params.rel_tol > 0.0 && params.rel_tol < 1.0) {
        return Err(HarnessError::InvalidParams(format!("rel_tol = {} is not in (0, 1)", params.rel_tol)));
    }
    let ctx = Ctx { params, cache, remez: RemezConfig::default().with_precision(params.precision_bits) };
    let records = match id {
        ExperimentId::TableErrors => table_errors(&ctx)?,
        ExperimentId::CoeffTables => coeff_tables(&ctx)?,
        ExperimentId::Fig1dValidate => fig_1d_validate(&ctx)?,
        ExperimentId::Multistep1d => multistep_1d(&ctx)?,
        ExperimentId::Compare2d => compare_2d(&ctx)?,
        ExperimentId::IdCheck => id_check(&ctx)?,
    };
    Ok(ExperimentReport { id, seed: params.seed, params: params.clone(), records })
}

/// `(alpha, beta, m, k)` of every tabulated error.
fn error_grid() -> Vec<(f64, u32, usize, usize)> {
    let mut v = Vec::new();
    for k in [5, 6, 7] {
        for alpha in [0.75, 0.5, 0.25] {
            v.push((alpha, 1, k, k));
        }
    }
    for beta in [2, 3] {
        for alpha in [0.75, 0.5, 0.25] {
            v.push((alpha, beta, 5, 5));
        }
    }
    for m in [5, 7] {
        for beta in [1u32, 2, 3] {
            for alpha in [0.75, 0.5, 0.25, 0.1] {
                let k = m + 1 - beta as usize;
                if !v.contains(&(alpha, beta, m, k)) {
                    v.push((alpha, beta, m, k));
                }
            }
        }
    }
    v
}

fn table_errors(ctx: &Ctx) -> Result<Vec<CaseRecord>, HarnessError> {
    error_grid()
        .into_par_iter()
        .map(|(alpha, beta, m, k)| {
            let case = format!("E({m},{k};{beta}) alpha={alpha}");
            let start = Instant::now();
            let e = ctx.entry(alpha, beta, m, k).map_err(|e| e.in_case(&case))?;
            let mut r = ctx.base(case, alpha, beta, m, k);
            r.quantity = "E".into();
            r.value = Some(e.error_f64());
            r.iterations = Some(e.created.iterations);
            r.wall_time = start.elapsed().as_secs_f64();
            Ok(r)
        })
        .collect()
}

fn coeff_tables(ctx: &Ctx) -> Result<Vec<CaseRecord>, HarnessError> {
    let mut configs = Vec::new();
    for (beta, m, k) in [(1u32, 5usize, 5usize), (1, 7, 7), (2, 5, 4), (2, 7, 6)] {
        for alpha in ALPHAS {
            configs.push((alpha, beta, m, k));
        }
    }
    let per: Vec<Vec<CaseRecord>> = configs
        .into_par_iter()
        .map(|(alpha, beta, m, k)| {
            let case = format!("({m},{k};{beta}) alpha={alpha}");
            let pf = ctx.pf(alpha, beta, m, k).map_err(|e| e.in_case(&case))?;
            let mut rows = Vec::new();
            let mut push = |q: String, v: f64| {
                let mut r = ctx.base(case.clone(), alpha, beta, m, k);
                r.quantity = q;
                r.value = Some(v);
                rows.push(r);
            };
            for (j, c) in pf.c0.iter().enumerate() {
                push(format!("c0_{}", j + 1), *c);
            }
            for (j, (c, d)) in pf.c.iter().zip(&pf.d).enumerate() {
                push(format!("c_{}", j + 1), *c);
                push(format!("d_{}", j + 1), *d);
            }
            Ok(rows)
        })
        .collect::<Result<_, HarnessError>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn fig_1d_validate(ctx: &Ctx) -> Result<Vec<CaseRecord>, HarnessError> {
    let sizes = ctx.sizes(&powers_of_two(3, 10));
    let mut cases = Vec::new();
    for (beta, m, k) in [(1u32, 7usize, 7usize), (2, 7, 6)] {
        for alpha in ALPHAS {
            for &n in &sizes {
                cases.push((alpha, beta, m, k, n));
            }
        }
    }
    cases
        .into_iter()
        .map(|(alpha, beta, m, k, n)| {
            let case = format!("({m},{k};{beta}) alpha={alpha} N={n}");
            let start = Instant::now();
            let pf = ctx.pf(alpha, beta, m, k).map_err(|e| e.in_case(&case))?;
            let stats = validate_case(&pf, n, ctx.params.random_trials, ctx.params.seed).map_err(|e| e.in_case(&case))?;
            let mut r = ctx.base(case, alpha, beta, m, k);
            one_d(&mut r, n);
            r.quantity = "ratio".into();
            stats_into(&mut r, &stats);
            // Exact solves: the bound is E, up to rounding.
            r.bound = Some(pf.error);
            r.systems = Some(pf.system_count());
            r.wall_time = start.elapsed().as_secs_f64();
            Ok(r)
        })
        .collect()
}

/// Step exponents of the compositions, innermost first.
const COMPOSITIONS: [&[f64]; 3] = [&[0.25, 0.25], &[0.25, 0.25, 0.25], &[0.5, 0.25]];

fn multistep_1d(ctx: &Ctx) -> Result<Vec<CaseRecord>, HarnessError> {
    let sizes = ctx.sizes(&powers_of_two(3, 10));
    let mut out = Vec::new();
    for k in ctx.degrees(&[5, 7]) {
        for steps in COMPOSITIONS {
            let alpha: f64 = steps.iter().sum();
            let label: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
            let label = label.join("+");
            let pfs: Vec<PartialFractionForm> =
                steps.iter().map(|&s| ctx.pf(s, 1, k, k)).collect::<Result<_, _>>()?;
            let errors: Vec<f64> = pfs.iter().map(|p| p.error).collect();
            for &n in &sizes {
                let case = format!("({k},{k};1) steps={label} N={n}");
                let start = Instant::now();
                let stats =
                    multistep_case(&pfs, n, ctx.params.random_trials, ctx.params.seed).map_err(|e| e.in_case(&case))?;
                // The bound uses t^-a <= Lambda_1^-a on the normalised spectrum.
                let cond = 1.0 / SpectralOracle::laplace_1d(n).eigenvalue(0);
                let bound = multi_step_bound(BoundKind::ConditionDependent, &errors, steps, cond)?;
                let mut r = ctx.base(case, alpha, 1, k, k);
                r.steps = label.clone();
                one_d(&mut r, n);
                r.quantity = "ratio".into();
                stats_into(&mut r, &stats);
                r.bound = Some(bound);
                r.systems = Some(pfs.iter().map(|p| p.system_count()).sum());
                r.wall_time = start.elapsed().as_secs_f64();
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// `(alpha, k, k_Q)` of the 2D comparison.
const COMPARE_2D: [(f64, usize, usize); 3] = [(0.25, 9, 9), (0.5, 8, 7), (0.75, 7, 6)];

fn compare_2d(ctx: &Ctx) -> Result<Vec<CaseRecord>, HarnessError> {
    let resolution = if ctx.params.full_2d { MAX_2D_FULL } else { 1 << 7 };
    let cfg = SolveConfig::default().with_tol(ctx.params.rel_tol);
    let mut out = Vec::new();
    for (alpha, k, kq) in COMPARE_2D {
        let case = format!("2d alpha={alpha} k={k} kQ={kq} h^-1={resolution}");
        let start = Instant::now();
        let pf = ctx.pf(alpha, 1, k, k).map_err(|e| e.in_case(&case))?;
        let c = compare_2d_case(&pf, resolution, kq as f64, &cfg).map_err(|e| e.in_case(&case))?;
        let wall = start.elapsed().as_secs_f64();
        for (q, v, systems) in [("bura", c.bura, c.bura_systems), ("quadrature", c.quadrature, c.quadrature_systems)] {
            let mut r = ctx.base(case.clone(), alpha, 1, k, k);
            r.n = Some(resolution - 1);
            r.h = Some(1.0 / resolution as f64);
            r.rhs = Some("checkerboard".into());
            r.method = Some("pcg-ic0".into());
            r.rel_tol = Some(ctx.params.rel_tol);
            r.quantity = q.into();
            r.value = Some(v);
            r.systems = Some(systems);
            if q == "bura" {
                r.iterations = Some(c.bura_iterations);
            }
            r.wall_time = wall;
            out.push(r);
        }
    }
    Ok(out)
}

/// `(inner, outer)` exponents; the inner one is applied first.
const PAIRS: [(f64, f64); 2] = [(0.75, 0.25), (0.5, 0.5)];

fn id_check(ctx: &Ctx) -> Result<Vec<CaseRecord>, HarnessError> {
    let sizes = ctx.sizes(&powers_of_two(4, 12));
    let sizes_3d = ctx.params.sizes_3d.clone().unwrap_or_else(|| vec![8, 16, 32, 64]);
    if let Some(&bad) = sizes_3d.iter().find(|&&r| !(2..=MAX_3D).contains(&r)) {
        return Err(HarnessError::InvalidParams(format!("3D resolution {bad} is outside 2..={MAX_3D}")));
    }
    let cfg = SolveConfig::default().with_tol(ctx.params.rel_tol);
    let mut out = Vec::new();
    for k in ctx.degrees(&[5, 7]) {
        for (inner, outer) in PAIRS {
            let steps = format!("{inner}+{outer}");
            let pi = ctx.pf(inner, 1, k, k)?;
            let po = ctx.pf(outer, 1, k, k)?;
            let bound = complementary_pair_bound(pi.error, po.error);
            let base = |case: String| {
                let mut r = ctx.base(case, 1.0, 1, k, k);
                r.steps = steps.clone();
                r.bound = Some(bound);
                r
            };
            for &n in &sizes {
                let case = format!("1d ({k},{k}) steps={steps} N={n}");
                let start = Instant::now();
                let c = id_check_1d_case(&pi, &po, n, ctx.params.random_trials, ctx.params.seed)
                    .map_err(|e| e.in_case(&case))?;
                let wall = start.elapsed().as_secs_f64();
                let mut r = base(case.clone());
                one_d(&mut r, n);
                r.quantity = "ratio".into();
                r.rhs = Some("eigen+random".into());
                stats_into(&mut r, &c.stats);
                r.wall_time = wall;
                out.push(r);
                for (rhs, v) in [("ones", c.ones), ("e1", c.e1)] {
                    let mut r = base(case.clone());
                    one_d(&mut r, n);
                    r.quantity = "ratio".into();
                    r.rhs = Some(rhs.into());
                    r.value = Some(v);
                    out.push(r);
                }
            }
            for mu in [1.0, 1e-3] {
                for &res in &sizes_3d {
                    let case = format!("3d ({k},{k}) steps={steps} mu={mu} h^-1={res}");
                    let start = Instant::now();
                    let c = id_check_3d_case(&pi, &po, res, mu, &cfg).map_err(|e| e.in_case(&case))?;
                    let wall = start.elapsed().as_secs_f64();
                    for (rhs, v) in [("ones", c.ones), ("e1", c.e1)] {
                        let mut r = base(case.clone());
                        r.n = Some(res - 1);
                        r.h = Some(1.0 / res as f64);
                        r.mu = Some(mu);
                        r.rhs = Some(rhs.into());
                        r.method = Some("pcg-ic0".into());
                        r.rel_tol = Some(ctx.params.rel_tol);
                        r.quantity = "ratio".into();
                        r.value = Some(v);
                        r.iterations = Some(c.iterations);
                        r.wall_time = wall;
                        out.push(r);
                    }
                }
            }
        }
    }
    Ok(out)
}
