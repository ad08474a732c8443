//! JSON encodings of matrices and vectors.
//!
//! Complex entries are `[re, im]` pairs. Decimals are written in the shortest
//! form that parses back to the same `f64`, so write→read is bit-exact.

use std::fmt;
use std::fs;
use std::path::Path;

use dmaj_core::linalg::c64;
use dmaj_core::{ChoiMatrix, ComplexMatrix, WeightVector};
use serde::{Deserialize, Serialize};

/// Usage or data error; the binary exits with code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<dmaj_core::Error> for CliError {
    fn from(e: dmaj_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError(format!("malformed JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `{"rows", "cols", "entries": [[re, im], ...]}` row-major, or the
/// `{"diag": [...]}` shorthand for a real diagonal matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixFile {
    Dense {
        rows: usize,
        cols: usize,
        entries: Vec<[f64; 2]>,
    },
    Diag {
        diag: Vec<f64>,
    },
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixFile::Dense {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> CliResult<ComplexMatrix> {
        match self {
            MatrixFile::Dense {
                rows,
                cols,
                entries,
            } => {
                if entries.len() != rows * cols {
                    return Err(CliError(format!(
                        "expected {} entries for a {rows}x{cols} matrix, found {}",
                        rows * cols,
                        entries.len()
                    )));
                }
                let data = entries.iter().map(|[re, im]| c64(*re, *im)).collect();
                Ok(ComplexMatrix::try_new(*rows, *cols, data)?)
            }
            MatrixFile::Diag { diag } => {
                if diag.iter().any(|v| !v.is_finite()) {
                    return Err(CliError("diagonal contains non-finite entries".into()));
                }
                Ok(ComplexMatrix::from_diag(diag))
            }
        }
    }

    /// The diagonal if the file uses the `diag` shorthand.
    pub fn diagonal(&self) -> Option<&[f64]> {
        match self {
            MatrixFile::Diag { diag } => Some(diag),
            MatrixFile::Dense { .. } => None,
        }
    }
}

/// A real vector: a plain array or `{"diag": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorFile {
    Plain(Vec<f64>),
    Diag { diag: Vec<f64> },
}

impl VectorFile {
    pub fn into_vec(self) -> CliResult<Vec<f64>> {
        let v = match self {
            VectorFile::Plain(v) | VectorFile::Diag { diag: v } => v,
        };
        if v.iter().any(|a| !a.is_finite()) {
            return Err(CliError("vector contains non-finite entries".into()));
        }
        Ok(v)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError(format!("malformed JSON in {}: {e}", path.display())))
}

pub fn read_matrix_file(path: &Path) -> CliResult<MatrixFile> {
    read_json(path)
}

pub fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    read_matrix_file(path)?.to_matrix()
}

pub fn read_vector(path: &Path) -> CliResult<Vec<f64>> {
    read_json::<VectorFile>(path)?.into_vec()
}

pub fn read_weights(path: &Path) -> CliResult<WeightVector> {
    Ok(WeightVector::new(read_vector(path)?)?)
}

/// Reads a Choi matrix of a map `C^{n×n} → C^{k×k}`. Without `in_dim` the map
/// is taken to be square (`n = k`).
pub fn read_choi(path: &Path, in_dim: Option<usize>) -> CliResult<ChoiMatrix> {
    let m = read_matrix(path)?;
    let size = m.ensure_square()?;
    let n = match in_dim {
        Some(n) => n,
        None => {
            let n = (size as f64).sqrt().round() as usize;
            if n * n != size {
                return Err(CliError(format!(
                    "Choi matrix of size {size} is not square-compatible; pass --in-dim"
                )));
            }
            n
        }
    };
    if n == 0 || size % n != 0 {
        return Err(CliError(format!("input dimension {n} does not divide {size}")));
    }
    Ok(ChoiMatrix::new(n, size / n, m)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_diag_parse() {
        let dense: MatrixFile =
            serde_json::from_str(r#"{"rows":1,"cols":2,"entries":[[1,0],[0,-1]]}"#).unwrap();
        let m = dense.to_matrix().unwrap();
        assert_eq!(m[(0, 1)], c64(0.0, -1.0));
        let diag: MatrixFile = serde_json::from_str(r#"{"diag":[0.5,0.25]}"#).unwrap();
        assert_eq!(diag.to_matrix().unwrap(), ComplexMatrix::from_diag(&[0.5, 0.25]));
    }

    #[test]
    fn entry_count_is_checked() {
        let f: MatrixFile = serde_json::from_str(r#"{"rows":2,"cols":2,"entries":[[1,0]]}"#).unwrap();
        assert!(f.to_matrix().is_err());
    }

    #[test]
    fn vectors_accept_both_forms() {
        let a: VectorFile = serde_json::from_str("[1, 2.5]").unwrap();
        let b: VectorFile = serde_json::from_str(r#"{"diag":[1, 2.5]}"#).unwrap();
        assert_eq!(a.into_vec().unwrap(), b.into_vec().unwrap());
    }
}
