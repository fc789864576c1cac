//! `bura`: compute rational approximations, apply them to model or Matrix
//! Market operators, and run the reproducibility experiments.
//!
//! Exit codes: 0 success, 1 usage, 2 non-convergence, 3 invariant
//! violation, 4 I/O.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bura_core::decomp::{extract_zeros_poles, PartialFractionForm};
use bura_core::harness::{run_experiment, CoefficientCache, ErrorClass, ExperimentId, ExperimentParams, HarnessError};
use bura_core::operators::{
    assemble, oracle_frac_apply, read_matrix_market, special_rhs, weighted_norm, OperatorKind, RhsKind,
    SparseSpdOperator, SpectralOracle,
};
use bura_core::remez::RemezConfig;
use bura_core::solvers::{bura_apply, bura_apply_product, SolveConfig, SolveMethod};

#[derive(Parser)]
#[command(name = "bura", version, about = "Fractional powers of sparse SPD matrices via best uniform rational approximation")]
struct Cli {
    /// Coefficient cache directory.
    #[arg(long, global = true, env = "BURA_CACHE", default_value = ".bura-cache")]
    cache: PathBuf,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Approx {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    beta: u32,
    /// Numerator degree; defaults to k + beta - 1.
    #[arg(short)]
    m: Option<usize>,
    #[arg(short, default_value_t = 5)]
    k: usize,
    /// Working precision in bits.
    #[arg(long, default_value_t = 256)]
    bits: u32,
}

impl Approx {
    fn m(&self) -> usize {
        self.m.unwrap_or(self.k + self.beta as usize - 1)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute (or load) a BURA and print its error and extreme points.
    Compute {
        #[command(flatten)]
        approx: Approx,
        /// Print the full cache entry as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the partial-fraction and product forms of a BURA.
    Fractions {
        #[command(flatten)]
        approx: Approx,
        #[arg(long)]
        json: bool,
    },
    /// Approximate u = A^-alpha f for a model problem or a Matrix Market file.
    Solve(SolveArgs),
    /// Run one of the reproducibility experiments.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// 1d, 2d, 3d-jump or mm:FILE.
    #[arg(long)]
    problem: String,
    #[command(flatten)]
    approx: Approx,
    /// Interior nodes per axis; ignored for mm:FILE.
    #[arg(long, default_value_t = 255)]
    n: usize,
    /// thomas, cg, pcg-jacobi or pcg-ic0. Default: thomas in 1D, pcg-ic0 otherwise.
    #[arg(long)]
    method: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Coefficient jump of the 3D operator.
    #[arg(long, default_value_t = 1e-3)]
    mu: f64,
    /// ones, e1, checkerboard (2D) or random.
    #[arg(long, default_value = "ones")]
    rhs: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Use the product form instead of partial fractions (beta = 1 only).
    #[arg(long)]
    product: bool,
    /// Write the solution, one value per line.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// table-errors, coeff-tables, fig-1d-validate, multistep-1d, compare-2d or id-check.
    id: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Comma-separated 1D sizes N.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Comma-separated degrees k.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Comma-separated 3D resolutions h^-1.
    #[arg(long, value_delimiter = ',')]
    sizes_3d: Option<Vec<usize>>,
    /// Run compare-2d at h = 2^-10.
    #[arg(long)]
    full_2d: bool,
    #[arg(long, default_value_t = 256)]
    bits: u32,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

fn exit_code(e: &HarnessError) -> u8 {
    match e.class() {
        ErrorClass::Usage => 1,
        ErrorClass::NonConvergence => 2,
        ErrorClass::InvariantViolation => 3,
        ErrorClass::Io => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cache = CoefficientCache::new(&cli.cache);
    match run(cli.cmd, &cache) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::InvalidParams(msg.into())
}

fn run(cmd: Command, cache: &CoefficientCache) -> Result<(), HarnessError> {
    match cmd {
        Command::Compute { approx, json } => compute(&approx, json, cache),
        Command::Fractions { approx, json } => fractions(&approx, json, cache),
        Command::Solve(args) => solve(&args, cache),
        Command::Experiment(args) => experiment(&args, cache),
    }
}

fn entry(a: &Approx, cache: &CoefficientCache) -> Result<bura_core::harness::CoefficientCacheEntry, HarnessError> {
    let cfg = RemezConfig::default().with_precision(a.bits);
    cache.get_or_compute(a.alpha, a.beta, a.m(), a.k, &cfg)
}

fn compute(a: &Approx, json: bool, cache: &CoefficientCache) -> Result<(), HarnessError> {
    let e = entry(a, cache)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&e).expect("entry serialises"));
        return Ok(());
    }
    println!("alpha = {}, beta = {}, (m, k) = ({}, {}), {} bits", e.alpha, e.beta, e.m, e.k, e.precision_bits);
    println!("E = {:.6e}", e.error_f64());
    println!("iterations = {}", e.created.iterations);
    println!("extreme points:");
    for t in &e.extreme_points {
        println!("  {:.10e}", t.to_f64());
    }
    if let Some(why) = &e.decomp_failure {
        println!("no partial-fraction form: {why}");
    }
    println!("cache: {}", cache.path_for(e.alpha, e.beta, e.m, e.k, e.precision_bits).display());
    Ok(())
}

fn fractions(a: &Approx, json: bool, cache: &CoefficientCache) -> Result<(), HarnessError> {
    let e = entry(a, cache)?;
    let pf = e.partial_fractions()?;
    let zp = extract_zeros_poles(&e.approximant())?;
    if json {
        let v = serde_json::json!({
            "alpha": pf.alpha, "beta": pf.beta, "m": pf.m, "k": pf.k, "error": pf.error,
            "c0": pf.c0, "c": pf.c, "d": pf.d,
            "zeros": zp.zeros_f64(), "poles": zp.poles_f64(), "lead": zp.lead.to_f64(),
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        return Ok(());
    }
    println!("t^-{} r(t) = sum c0_j t^-j + sum c_j / (t - d_j),  E = {:.5e}", pf.beta, pf.error);
    for (j, c) in pf.c0.iter().enumerate() {
        println!("  c0_{}  {:>14.5e}", j + 1, c);
    }
    println!("  {:>3}  {:>14}  {:>14}", "j", "c_j", "d_j");
    for (j, (c, d)) in pf.c.iter().zip(&pf.d).enumerate() {
        println!("  {:>3}  {:>14.5e}  {:>14.5e}", j + 1, c, d);
    }
    println!("zeros: {:?}", zp.zeros_f64());
    for (re, im) in &zp.complex_zeros {
        println!("complex zero pair: {:.6e} +- {:.6e}i", re.to_f64(), im.to_f64());
    }
    Ok(())
}

fn build_problem(args: &SolveArgs) -> Result<(SparseSpdOperator, Vec<f64>), HarnessError> {
    let op = if let Some(path) = args.problem.strip_prefix("mm:") {
        read_matrix_market(Path::new(path), None).map_err(|e| match HarnessError::from(e) {
            HarnessError::Io { msg, .. } => HarnessError::Io { path: path.into(), msg },
            other => other,
        })?
    } else {
        let kind = match args.problem.as_str() {
            "1d" => OperatorKind::Laplace1d,
            "2d" => OperatorKind::Laplace2d5pt,
            "3d-jump" => OperatorKind::Laplace3d7ptJump,
            p => return Err(usage(format!("unknown problem '{p}' (1d, 2d, 3d-jump, mm:FILE)"))),
        };
        assemble(kind, args.n + 1, args.mu)?
    };
    let kind = match args.rhs.as_str() {
        "ones" => RhsKind::Ones,
        "e1" => RhsKind::E1,
        "checkerboard" => RhsKind::Checkerboard,
        "random" => RhsKind::RandomEigenMix,
        r => return Err(usage(format!("unknown rhs '{r}' (ones, e1, checkerboard, random)"))),
    };
    let grid = op.grid();
    if kind == RhsKind::Checkerboard && grid.dims.len() != 2 {
        return Err(usage("the checkerboard right-hand side needs --problem 2d"));
    }
    Ok((op, special_rhs(kind, &grid, args.seed)))
}

fn solve(args: &SolveArgs, cache: &CoefficientCache) -> Result<(), HarnessError> {
    let (op, f) = build_problem(args)?;
    let method = match &args.method {
        Some(m) => SolveMethod::from_str(m).map_err(usage)?,
        None if op.is_tridiagonal() => SolveMethod::Thomas,
        None => SolveMethod::PcgIc0,
    };
    let cfg = SolveConfig { method, rel_tol: args.tol, ..SolveConfig::default() };
    let e = entry(&args.approx, cache)?;
    let start = Instant::now();
    let rep = if args.product {
        if args.approx.beta != 1 {
            return Err(usage("--product needs beta = 1"));
        }
        bura_apply_product(&extract_zeros_poles(&e.approximant())?, &op, &f, &cfg)?
    } else {
        let pf: PartialFractionForm = e.partial_fractions()?;
        bura_apply(&pf, &op, &f, &cfg)?
    };
    let wall = start.elapsed().as_secs_f64();
    let alpha = args.approx.alpha;
    println!("problem {} ({}), {} unknowns, scale {:.6e}", args.problem, op.kind, op.n(), op.scale);
    println!("approximant ({},{};{}) alpha = {alpha}, E = {:.5e}", e.m, e.k, e.beta, e.error_f64());
    println!("method {method:?}, {} systems, {wall:.3} s", rep.per_system.len());
    for s in &rep.per_system {
        println!("  shift {:>13.5e}  iterations {:>5}  residual {:.2e}", s.shift, s.iterations, s.rel_residual);
    }
    if let Some(oracle) = SpectralOracle::for_operator(&op) {
        let u = oracle_frac_apply(&oracle, -alpha, &f);
        let err: Vec<f64> = rep.u_r.iter().zip(&u).map(|(x, y)| x - y).collect();
        let gamma = 1.0 - 2.0 * e.beta as f64;
        let ratio = weighted_norm(&oracle, 1.0, &err) / weighted_norm(&oracle, gamma, &f);
        println!("oracle: ||u_r - u||_A / ||f||_A^(1-2beta) = {ratio:.5e} (E = {:.5e})", e.error_f64());
    }
    if let Some(path) = &args.out {
        // Solution of the unnormalised system AA^alpha u = f.
        let s = op.scale.powf(-alpha);
        let io = |e: std::io::Error| HarnessError::Io { path: path.clone(), msg: e.to_string() };
        let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        for x in &rep.u_r {
            writeln!(w, "{:.17e}", x * s).map_err(io)?;
        }
        w.flush().map_err(io)?;
        println!("solution written to {}", path.display());
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs, cache: &CoefficientCache) -> Result<(), HarnessError> {
    let id: ExperimentId = args.id.parse()?;
    let params = ExperimentParams {
        seed: args.seed,
        random_trials: args.trials,
        precision_bits: args.bits,
        rel_tol: args.tol,
        sizes: args.sizes.clone(),
        degrees: args.degrees.clone(),
        sizes_3d: args.sizes_3d.clone(),
        full_2d: args.full_2d,
    };
    let start = Instant::now();
    let report = run_experiment(id, &params, cache)?;
    let (csv, json) = report.write(&args.out)?;
    eprintln!("{id}: {} rows in {:.1} s", report.records.len(), start.elapsed().as_secs_f64());
    println!("{}", csv.display());
    println!("{}", json.display());
    Ok(())
}
