//! Matrix Market coordinate files (`real`, `symmetric` or `general`).

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{OperatorError, OperatorKind, SparseSpdOperator};

fn parse_err(line: usize, msg: impl Into<String>) -> OperatorError {
    OperatorError::Parse { line, msg: msg.into() }
}

/// Reads an SPD matrix `AA` and normalises it by `scale`, or by its
/// Gershgorin bound when `scale` is `None`.
pub fn read_matrix_market(path: &Path, scale: Option<f64>) -> Result<SparseSpdOperator, OperatorError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() < 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" || words[2] != "coordinate" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix coordinate ...'"));
    }
    if words[3] != "real" && words[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", words[3])));
    }
    let symmetric = match words[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (ln, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if tok.len() != 3 {
                    return Err(parse_err(ln + 1, "size line needs rows, cols, nnz"));
                }
                let p = |s: &str| s.parse::<usize>().map_err(|e| parse_err(ln + 1, e.to_string()));
                let (r, c, nnz) = (p(tok[0])?, p(tok[1])?, p(tok[2])?);
                if r != c {
                    return Err(parse_err(ln + 1, format!("matrix is {r} x {c}, not square")));
                }
                size = Some((r, c, nnz));
                triplets.reserve(if symmetric { 2 * nnz } else { nnz });
            }
            Some((n, _, _)) => {
                if tok.len() != 3 {
                    return Err(parse_err(ln + 1, "entry needs row, col, value"));
                }
                let idx = |s: &str| match s.parse::<usize>() {
                    Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                    _ => Err(parse_err(ln + 1, format!("bad index '{s}'"))),
                };
                let (i, j) = (idx(tok[0])?, idx(tok[1])?);
                let v: f64 = tok[2].parse().map_err(|_| parse_err(ln + 1, format!("bad value '{}'", tok[2])))?;
                triplets.push((i, j, v));
                if symmetric && i != j {
                    triplets.push((j, i, v));
                }
            }
        }
    }
    let (n, _, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let stored = if symmetric { triplets.iter().filter(|t| t.0 >= t.1).count() } else { triplets.len() };
    if stored != nnz {
        return Err(parse_err(1, format!("header promises {nnz} entries, found {stored}")));
    }

    let mut op = SparseSpdOperator::from_triplets(n, triplets, OperatorKind::External, 1.0, f64::NAN, 1.0, vec![n]);
    for i in 0..n {
        for (j, v) in op.row(i) {
            if (v - op.entry(j, i)).abs() > 1e-12 * v.abs().max(1.0) {
                return Err(OperatorError::NotSymmetric { row: i + 1, col: j + 1 });
            }
        }
    }
    let scale = scale.unwrap_or_else(|| op.gershgorin_bound());
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(OperatorError::BadScale(scale));
    }
    for v in &mut op.values {
        *v /= scale;
    }
    op.scale = scale;
    Ok(op)
}

/// Writes the lower triangle of the unnormalised matrix `scale * A`.
pub fn write_matrix_market(op: &SparseSpdOperator, path: &Path) -> Result<(), OperatorError> {
    let mut out = Vec::new();
    let lower: Vec<(usize, usize, f64)> =
        (0..op.n()).flat_map(|i| op.row(i).filter(move |&(j, _)| j <= i).map(move |(j, v)| (i, j, v))).collect();
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", op.n(), op.n(), lower.len())?;
    for (i, j, v) in lower {
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v * op.scale)?;
    }
    fs::write(path, out)?;
    Ok(())
}
