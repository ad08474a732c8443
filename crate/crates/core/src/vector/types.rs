use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Strictly positive weights `d ∈ R₊₊ⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        for (index, &value) in entries.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonpositiveWeight { index, value });
            }
        }
        if entries.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        Ok(Self(entries))
    }

    /// The all-ones vector.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether `d ∝ e` within a relative tolerance.
    pub fn is_constant(&self, tol: f64) -> bool {
        let max = self.0.iter().copied().fold(0.0, f64::max);
        max - self.min() <= tol * max
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Real `n×n` column-stochastic matrix, optionally with a fixed vector `d`
/// (`Ad = d`).
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    entries: Vec<f64>,
    fixed_vector: Option<WeightVector>,
}

impl Serialize for StochasticMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<&[f64]> = self.entries.chunks(self.n).collect();
        let mut st = s.serialize_struct("StochasticMatrix", 2)?;
        st.serialize_field("rows", &rows)?;
        st.serialize_field("fixed_vector", &self.fixed_vector)?;
        st.end()
    }
}

impl StochasticMatrix {
    /// Validates entries `≥ −tol`, unit column sums and `Ad = d` if a fixed
    /// vector is given.
    pub fn new(
        n: usize,
        entries: Vec<f64>,
        fixed_vector: Option<WeightVector>,
        tol: f64,
    ) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", n * n),
                found: format!("{}", entries.len()),
            });
        }
        let m = Self {
            n,
            entries,
            fixed_vector,
        };
        if m.min_entry() < -tol {
            return Err(Error::NotDStochastic(format!(
                "negative entry {:.3e}",
                m.min_entry()
            )));
        }
        if m.column_sum_deviation() > tol {
            return Err(Error::NotDStochastic(format!(
                "column sums deviate from 1 by {:.3e}",
                m.column_sum_deviation()
            )));
        }
        if let Some(d) = &m.fixed_vector {
            let r = m.fixed_point_residual(d);
            if d.len() != n || r > tol * d.sum().max(1.0) {
                return Err(Error::NotDStochastic(format!("‖Ad − d‖∞ = {r:.3e}")));
            }
        }
        Ok(m)
    }

    pub(crate) fn from_parts(n: usize, entries: Vec<f64>) -> Self {
        Self {
            n,
            entries,
            fixed_vector: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(n, (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect())
    }

    pub fn with_fixed_vector(mut self, d: WeightVector) -> Self {
        self.fixed_vector = Some(d);
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn fixed_vector(&self) -> Option<&WeightVector> {
        self.fixed_vector.as_ref()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self · other`
    pub fn compose(&self, other: &StochasticMatrix) -> StochasticMatrix {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Self::from_parts(n, out)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn column_sum_deviation(&self) -> f64 {
        (0..self.n)
            .map(|j| ((0..self.n).map(|i| self.get(i, j)).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `‖Ad − d‖∞`
    pub fn fixed_point_residual(&self, d: &WeightVector) -> f64 {
        self.apply(d.as_slice())
            .iter()
            .zip(d.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
