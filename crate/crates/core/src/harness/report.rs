use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentId, ExperimentParams, HarnessError};

/// One row of an experiment. Fields that do not apply to an experiment are
/// left empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case: String,
    /// Total exponent applied; for compositions the steps are in `steps`.
    pub alpha: f64,
    pub steps: String,
    pub beta: u32,
    pub m: usize,
    pub k: usize,
    /// Unknowns per axis; `h = 1 / (n + 1)`.
    pub n: Option<usize>,
    pub h: Option<f64>,
    pub mu: Option<f64>,
    pub rhs: Option<String>,
    pub method: Option<String>,
    pub rel_tol: Option<f64>,
    /// What `value` holds (`E`, `c_3`, `ratio`, ...).
    pub quantity: String,
    pub value: Option<f64>,
    pub max_eigen_error: Option<f64>,
    pub avg_eigen_error: Option<f64>,
    pub max_random_error: Option<f64>,
    pub avg_random_error: Option<f64>,
    pub bound: Option<f64>,
    pub systems: Option<usize>,
    pub iterations: Option<usize>,
    pub seed: u64,
    /// Seconds; kept out of the CSV so reruns compare byte for byte.
    pub wall_time: f64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    case: &'a str,
    alpha: f64,
    steps: &'a str,
    beta: u32,
    m: usize,
    k: usize,
    n: Option<usize>,
    h: Option<f64>,
    mu: Option<f64>,
    rhs: Option<&'a str>,
    method: Option<&'a str>,
    rel_tol: Option<f64>,
    quantity: &'a str,
    value: Option<f64>,
    max_eigen_error: Option<f64>,
    avg_eigen_error: Option<f64>,
    max_random_error: Option<f64>,
    avg_random_error: Option<f64>,
    bound: Option<f64>,
    systems: Option<usize>,
    iterations: Option<usize>,
    seed: u64,
}

impl<'a> From<&'a CaseRecord> for CsvRow<'a> {
    fn from(r: &'a CaseRecord) -> Self {
        CsvRow {
            case: &r.case,
            alpha: r.alpha,
            steps: &r.steps,
            beta: r.beta,
            m: r.m,
            k: r.k,
            n: r.n,
            h: r.h,
            mu: r.mu,
            rhs: r.rhs.as_deref(),
            method: r.method.as_deref(),
            rel_tol: r.rel_tol,
            quantity: &r.quantity,
            value: r.value,
            max_eigen_error: r.max_eigen_error,
            avg_eigen_error: r.avg_eigen_error,
            max_random_error: r.max_random_error,
            avg_random_error: r.avg_random_error,
            bound: r.bound,
            systems: r.systems,
            iterations: r.iterations,
            seed: r.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: ExperimentId,
    pub seed: u64,
    pub params: ExperimentParams,
    pub records: Vec<CaseRecord>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(CsvRow::from(r)).map_err(|e| HarnessError::Io { path: PathBuf::from("<csv>"), msg: e.to_string() })?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io { path: PathBuf::from("<csv>"), msg: e.to_string() })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// Writes `<id>.csv` and `<id>.json` into `dir` and returns both paths.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
        let io = |p: &Path, e: std::io::Error| HarnessError::Io { path: p.to_path_buf(), msg: e.to_string() };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let csv_path = dir.join(format!("{}.csv", self.id));
        let json_path = dir.join(format!("{}.json", self.id));
        fs::write(&csv_path, self.to_csv()?).map_err(|e| io(&csv_path, e))?;
        fs::write(&json_path, self.to_json()).map_err(|e| io(&json_path, e))?;
        Ok((csv_path, json_path))
    }

    /// Records whose `case` label starts with `prefix`.
    pub fn select<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.records.iter().filter(move |r| r.case.starts_with(prefix))
    }
}
