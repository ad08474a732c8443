use serde::Serialize;

use super::types::StochasticMatrix;
use crate::error::{Error, Result};

/// `λ·𝟙 + (1 − λ)·P_ij` with `P_ij` the transposition of `i` and `j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub lambda: f64,
}

impl TTransform {
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let mut v = u.to_vec();
        let (a, b) = (u[self.i], u[self.j]);
        v[self.i] = self.lambda * a + (1.0 - self.lambda) * b;
        v[self.j] = (1.0 - self.lambda) * a + self.lambda * b;
        v
    }

    pub fn matrix(&self, n: usize) -> StochasticMatrix {
        let mut m = StochasticMatrix::identity(n).entries().to_vec();
        let (i, j, l) = (self.i, self.j, self.lambda);
        m[i * n + i] = l;
        m[j * n + j] = l;
        m[i * n + j] = 1.0 - l;
        m[j * n + i] = 1.0 - l;
        StochasticMatrix::from_parts(n, m)
    }
}

/// 0/1 column-stochastic matrix sending `x` to `(Σx₊, −Σx₋, 0, …, 0)`:
/// nonnegative coordinates go to the first row, negative ones to the second.
pub fn collapse_matrix(x: &[f64]) -> Result<StochasticMatrix> {
    let n = x.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: n });
    }
    let mut m = vec![0.0; n * n];
    for (j, &v) in x.iter().enumerate() {
        let row = if v >= 0.0 { 0 } else { 1 };
        m[row * n + j] = 1.0;
    }
    Ok(StochasticMatrix::from_parts(n, m))
}

fn is_descending(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// T-transforms carrying a descending `u` to a descending `x ≺ u`.
///
/// Each step takes the largest `j` with `u_j > x_j` and the smallest `k > j`
/// with `u_k < x_k`, and moves `min(u_j − x_j, x_k − u_k)` from `j` to `k`.
/// Discrepancies below `1e−14·‖u‖₁` count as zero.
pub fn t_transform_chain(u: &[f64], x: &[f64]) -> Result<Vec<TTransform>> {
    if u.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: x.len(),
        });
    }
    if !is_descending(u) || !is_descending(x) {
        return Err(Error::PreconditionViolated(
            "T-transform chain needs descending vectors".into(),
        ));
    }
    let n = u.len();
    let eps = 1e-14 * u.iter().chain(x).map(|a| a.abs()).sum::<f64>().max(1.0);
    let mut u = u.to_vec();
    let mut chain = Vec::new();
    for _ in 0..n * n {
        let Some(j) = (0..n).rev().find(|&j| u[j] - x[j] > eps) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&k| x[k] - u[k] > eps) else {
            break;
        };
        let delta = (u[j] - x[j]).min(x[k] - u[k]);
        let spread = u[j] - u[k];
        let t = TTransform {
            i: j,
            j: k,
            lambda: 1.0 - delta / spread,
        };
        u = t.apply(&u);
        chain.push(t);
    }
    Ok(chain)
}

/// Permutation indices sorting `v` in decreasing order, ties by index.
fn descending_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    idx
}

/// Column-stochastic `M` with `My = x`, given `eᵀx = eᵀy` and `‖x‖₁ ≤ ‖y‖₁`.
///
/// Built as `M = B·A` with `A` the collapse matrix of `y` and `B` a doubly
/// stochastic product of T-transforms taking `Ay` to `x`.
pub fn transfer_matrix(x: &[f64], y: &[f64], tol: f64) -> Result<StochasticMatrix> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    let scale = y.iter().map(|a| a.abs()).sum::<f64>().max(1.0);
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    if (sx - sy).abs() > tol * scale {
        return Err(Error::PreconditionViolated(format!(
            "sums differ: eᵀx = {sx}, eᵀy = {sy}"
        )));
    }
    let (nx, ny) = (
        x.iter().map(|a| a.abs()).sum::<f64>(),
        y.iter().map(|a| a.abs()).sum::<f64>(),
    );
    if nx > ny + tol * scale {
        return Err(Error::PreconditionViolated(format!(
            "‖x‖₁ = {nx} exceeds ‖y‖₁ = {ny}"
        )));
    }
    if n == 1 {
        return Ok(StochasticMatrix::identity(1));
    }
    let a = collapse_matrix(y)?;
    let z = a.apply(y);

    let pz = descending_order(&z);
    let px = descending_order(x);
    let z_sorted: Vec<f64> = pz.iter().map(|&i| z[i]).collect();
    let x_sorted: Vec<f64> = px.iter().map(|&i| x[i]).collect();
    let chain = t_transform_chain(&z_sorted, &x_sorted)?;

    // sorted-frame product T_m ⋯ T_1
    let mut t = StochasticMatrix::identity(n);
    for step in &chain {
        t = step.matrix(n).compose(&t);
    }
    // B[px[r], pz[c]] = T[r, c]
    let mut b = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            b[px[r] * n + pz[c]] = t.get(r, c);
        }
    }
    Ok(StochasticMatrix::from_parts(n, b).compose(&a))
}
