//! Text formats for matrices and vectors: MatrixMarket (`coordinate` or
//! `array`, real or integer, general or symmetric) and dense CSV.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

fn parse_f64(tok: &str) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: {tok:?}")))
}

fn parse_usize(tok: &str) -> Result<usize> {
    tok.trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("not an index: {tok:?}")))
}

/// Parses either format, chosen by the `%%MatrixMarket` banner.
pub fn parse_matrix(text: &str) -> Result<NonnegMatrix> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.trim_start().starts_with("%%MatrixMarket") {
        parse_matrix_market(text)
    } else {
        parse_csv(text)
    }
}

pub fn read_matrix(path: &Path) -> Result<NonnegMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// Dense CSV: one row per line, entries separated by commas (or blanks).
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_csv(text: &str) -> Result<NonnegMatrix> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(parse_f64)
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    NonnegMatrix::from_rows(&rows)
}

pub fn parse_matrix_market(text: &str) -> Result<NonnegMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let banner = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse(format!("bad MatrixMarket banner: {banner:?}")));
    }
    let layout = fields[2].as_str();
    if !matches!(fields[3].as_str(), "real" | "integer") {
        return Err(Error::Parse(format!(
            "unsupported field type {}",
            fields[3]
        )));
    }
    let symmetric = match fields[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(Error::Parse(format!("unsupported symmetry {other}"))),
    };
    let mut body = lines.filter(|l| !l.trim_start().starts_with('%'));
    let size_line = body
        .next()
        .ok_or_else(|| Error::Parse("missing size line".into()))?;
    let size: Vec<usize> = size_line
        .split_whitespace()
        .map(parse_usize)
        .collect::<Result<_>>()?;
    let tokens: Vec<&str> = body.flat_map(str::split_whitespace).collect();
    match (layout, size.as_slice()) {
        ("coordinate", &[m, n, nnz]) => {
            if tokens.len() != 3 * nnz {
                return Err(Error::Parse(format!("expected {nnz} entries")));
            }
            let mut data = vec![0.0; m * n];
            for chunk in tokens.chunks(3) {
                let (i, j) = (parse_usize(chunk[0])?, parse_usize(chunk[1])?);
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(Error::Parse(format!("index ({i}, {j}) out of range")));
                }
                let v = parse_f64(chunk[2])?;
                data[(i - 1) * n + (j - 1)] = v;
                if symmetric {
                    data[(j - 1) * n + (i - 1)] = v;
                }
            }
            NonnegMatrix::new(m, n, data)
        }
        ("array", &[m, n]) => {
            let vals: Vec<f64> = tokens.iter().map(|t| parse_f64(t)).collect::<Result<_>>()?;
            let mut data = vec![0.0; m * n];
            if symmetric {
                // lower triangle, column major
                let mut it = vals.iter();
                for j in 0..n {
                    for i in j..m {
                        let v = *it
                            .next()
                            .ok_or_else(|| Error::Parse("too few entries".into()))?;
                        data[i * n + j] = v;
                        data[j * n + i] = v;
                    }
                }
                if it.next().is_some() {
                    return Err(Error::Parse("too many entries".into()));
                }
            } else {
                if vals.len() != m * n {
                    return Err(Error::Parse(format!("expected {} entries", m * n)));
                }
                // column major
                for (idx, v) in vals.into_iter().enumerate() {
                    data[(idx % m) * n + idx / m] = v;
                }
            }
            NonnegMatrix::new(m, n, data)
        }
        _ => Err(Error::Parse(format!(
            "bad size line {size_line:?} for {layout} layout"
        ))),
    }
}

/// Numbers separated by commas or blanks, or a JSON array.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()));
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(parse_f64)
        .collect()
}
