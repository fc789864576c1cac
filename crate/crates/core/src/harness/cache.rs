//! On-disk coefficient cache: one JSON file per `(alpha, beta, m, k, bits)`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::decomp::{to_partial_fractions, DecompError, PartialFractionForm};
use crate::remez::{compute_bura, RationalApproximant, RemezConfig};
use crate::xnum::{cheb_to_monomial, ChebPoly, XScalar};

use super::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub tool_version: String,
    pub iterations: usize,
}

/// Everything needed to rebuild an approximant and its partial fractions.
/// Extended-precision numbers are stored as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCacheEntry {
    pub alpha: f64,
    pub beta: u32,
    pub m: usize,
    pub k: usize,
    pub precision_bits: u32,
    pub num_cheb: Vec<XScalar>,
    pub den_cheb: Vec<XScalar>,
    pub num_monomial: Vec<XScalar>,
    pub den_monomial: Vec<XScalar>,
    pub error: XScalar,
    pub extreme_points: Vec<XScalar>,
    /// Empty when the approximant has no admissible partial-fraction form
    /// (a pole outside `(-inf, 0)`); `decomp_failure` then says why.
    pub poles: Vec<XScalar>,
    pub residues: Vec<XScalar>,
    pub c0: Vec<XScalar>,
    pub decomp_failure: Option<String>,
    pub created: CacheMeta,
}

impl CoefficientCacheEntry {
    pub fn from_approximant(a: &RationalApproximant) -> Self {
        let pf = to_partial_fractions(a);
        let (poles, residues, c0, decomp_failure) = match pf {
            Ok(pf) => (pf.d_full, pf.c_full, pf.c0_full, None),
            Err(e) => (Vec::new(), Vec::new(), Vec::new(), Some(e.to_string())),
        };
        CoefficientCacheEntry {
            alpha: a.alpha,
            beta: a.beta,
            m: a.m,
            k: a.k,
            precision_bits: a.precision_bits,
            num_cheb: a.num.coeffs().to_vec(),
            den_cheb: a.den.coeffs().to_vec(),
            num_monomial: cheb_to_monomial(&a.num),
            den_monomial: cheb_to_monomial(&a.den),
            error: a.error.clone(),
            extreme_points: a.extreme_points.clone(),
            poles,
            residues,
            c0,
            decomp_failure,
            created: CacheMeta { tool_version: env!("CARGO_PKG_VERSION").to_string(), iterations: a.iterations },
        }
    }

    pub fn approximant(&self) -> RationalApproximant {
        RationalApproximant {
            alpha: self.alpha,
            beta: self.beta,
            m: self.m,
            k: self.k,
            num: ChebPoly::new(self.num_cheb.clone()),
            den: ChebPoly::new(self.den_cheb.clone()),
            error: self.error.clone(),
            extreme_points: self.extreme_points.clone(),
            iterations: self.created.iterations,
            precision_bits: self.precision_bits,
        }
    }

    pub fn partial_fractions(&self) -> Result<PartialFractionForm, DecompError> {
        to_partial_fractions(&self.approximant())
    }

    pub fn error_f64(&self) -> f64 {
        self.error.to_f64()
    }

    /// Re-checks equioscillation, the stored monomial form and, when
    /// present, the partial fractions against a fresh decomposition.
    pub fn verify(&self) -> Result<(), String> {
        let a = self.approximant();
        if self.extreme_points.len() != self.m + self.k + 2 {
            return Err(format!("{} extreme points, expected {}", self.extreme_points.len(), self.m + self.k + 2));
        }
        let e = self.error_f64();
        if !(e > 0.0) {
            return Err(format!("error {e} is not positive"));
        }
        let mut prev = 0;
        for (i, t) in self.extreme_points.iter().enumerate() {
            let res = a.residual_t(t);
            let sg = res.signum_i32();
            if sg == 0 || sg == prev {
                return Err(format!("residual does not alternate at point {i}"));
            }
            prev = sg;
            let dev = (res.abs().to_f64() / e - 1.0).abs();
            if dev > 1e-3 {
                return Err(format!("residual at point {i} deviates from E by {dev:e}"));
            }
        }

        let tol = XScalar::exp2i(-((self.precision_bits / 2) as i32), self.precision_bits);
        let same = |got: &[XScalar], want: &[XScalar], what: &str| -> Result<(), String> {
            if got.len() != want.len() {
                return Err(format!("{what}: {} entries, expected {}", want.len(), got.len()));
            }
            for (i, (g, w)) in got.iter().zip(want).enumerate() {
                let scale = w.abs().max(XScalar::exp2i(-(self.precision_bits as i32) / 2, self.precision_bits));
                if (g - w).abs() > &tol * &scale {
                    return Err(format!("{what}[{i}] does not match its recomputed value"));
                }
            }
            Ok(())
        };
        same(&cheb_to_monomial(&a.num), &self.num_monomial, "numerator monomials")?;
        same(&cheb_to_monomial(&a.den), &self.den_monomial, "denominator monomials")?;

        match (to_partial_fractions(&a), &self.decomp_failure) {
            (Ok(pf), None) => {
                same(&pf.d_full, &self.poles, "poles")?;
                same(&pf.c_full, &self.residues, "residues")?;
                same(&pf.c0_full, &self.c0, "c0")
            }
            (Err(_), Some(_)) => Ok(()),
            (Ok(_), Some(_)) => Err("entry records a decomposition failure that does not reproduce".into()),
            (Err(e), None) => Err(format!("decomposition fails on reload: {e}")),
        }
    }
}

/// Directory of cache entries.
#[derive(Clone, Debug)]
pub struct CoefficientCache {
    dir: PathBuf,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io { path: path.to_path_buf(), msg: e.to_string() }
}

impl CoefficientCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CoefficientCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, alpha: f64, beta: u32, m: usize, k: usize, bits: u32) -> PathBuf {
        self.dir.join(format!("bura_a{alpha}_b{beta}_m{m}_k{k}_p{bits}.json"))
    }

    /// Writes through a temporary file and a rename, so readers never see a
    /// partial entry.
    pub fn put(&self, entry: &CoefficientCacheEntry) -> Result<PathBuf, HarnessError> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let path = self.path_for(entry.alpha, entry.beta, entry.m, entry.k, entry.precision_bits);
        let json = serde_json::to_string_pretty(entry).map_err(|e| io_err(&path, e))?;
        static NEXT: AtomicUsize = AtomicUsize::new(0);
        let tag = NEXT.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("json.tmp{}-{tag}", std::process::id()));
        fs::write(&tmp, json).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    pub fn get(&self, alpha: f64, beta: u32, m: usize, k: usize, bits: u32) -> Result<CoefficientCacheEntry, HarnessError> {
        let path = self.path_for(alpha, beta, m, k, bits);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(HarnessError::CacheMiss { alpha, beta, m, k, bits })
            }
            Err(e) => return Err(io_err(&path, e)),
        };
        let corrupt = |reason: String| HarnessError::CacheCorrupt { path: path.clone(), reason };
        let entry: CoefficientCacheEntry = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if (entry.alpha, entry.beta, entry.m, entry.k, entry.precision_bits) != (alpha, beta, m, k, bits) {
            return Err(corrupt("key fields do not match the file name".into()));
        }
        entry.verify().map_err(corrupt)?;
        Ok(entry)
    }

    /// Cache hit, or compute, store and return.
    pub fn get_or_compute(
        &self,
        alpha: f64,
        beta: u32,
        m: usize,
        k: usize,
        cfg: &RemezConfig,
    ) -> Result<CoefficientCacheEntry, HarnessError> {
        match self.get(alpha, beta, m, k, cfg.precision_bits) {
            Ok(e) => Ok(e),
            Err(HarnessError::CacheMiss { .. }) => {
                let a = compute_bura(alpha, beta, m, k, cfg)?;
                let entry = CoefficientCacheEntry::from_approximant(&a);
                self.put(&entry)?;
                Ok(entry)
            }
            Err(e) => Err(e),
        }
    }
}
