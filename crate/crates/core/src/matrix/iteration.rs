use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::{StochasticMatrix, WeightVector};

/// Building blocks of one macro-step `x ↦ (1 − q)e + q·x` towards a vertex
/// `e = e_target`.
#[derive(Clone, Debug, Serialize)]
pub struct IterationFactors {
    /// 0-based index of the first descent `d_j > d_{j+1}` (in the reversed
    /// order when `mirrored`).
    pub j: usize,
    pub q: f64,
    /// Only ascents occur in `d`; the construction runs on the reversed vector.
    pub mirrored: bool,
    /// 0-based index of the vertex the iteration converges to.
    pub target_index: usize,
    /// d-stochastic two-coordinate transfer.
    pub t: StochasticMatrix,
    /// Cyclic shift (doubly stochastic).
    pub shift: StochasticMatrix,
    /// The full macro-step product.
    pub macro_step: StochasticMatrix,
}

fn power(m: &StochasticMatrix, k: usize) -> StochasticMatrix {
    (0..k).fold(StochasticMatrix::identity(m.dim()), |acc, _| m.compose(&acc))
}

fn reversal(n: usize) -> StochasticMatrix {
    StochasticMatrix::from_parts(
        n,
        (0..n * n).map(|k| if k / n + k % n == n - 1 { 1.0 } else { 0.0 }).collect(),
    )
}

/// Factors for a descent `d_j > d_{j+1}` (1-based `j`):
/// `M = σ^{n−j+1} · T · (σT)^{n−2} · σ^j` with `σ` the cyclic right shift and
/// `T` moving mass between coordinates `j` and `j+1`.
fn descent_factors(d: &[f64], j: usize) -> (f64, StochasticMatrix, StochasticMatrix, StochasticMatrix) {
    let n = d.len();
    let q = d[j + 1] / d[j];
    let mut t = StochasticMatrix::identity(n).entries().to_vec();
    t[j * n + j] = 1.0 - q;
    t[(j + 1) * n + j] = q;
    t[j * n + j + 1] = 1.0;
    t[(j + 1) * n + j + 1] = 0.0;
    let t = StochasticMatrix::from_parts(n, t);
    // (σx)_i = x_{i−1}
    let shift = StochasticMatrix::from_parts(
        n,
        (0..n * n).map(|k| if (k / n + n - 1) % n == k % n { 1.0 } else { 0.0 }).collect(),
    );
    let j1 = j + 1;
    let st = shift.compose(&t);
    let m = power(&shift, n - j1 + 1)
        .compose(&t)
        .compose(&power(&st, n - 2))
        .compose(&power(&shift, j1));
    (q, t, shift, m)
}

pub fn iteration_factors(d: &WeightVector) -> Result<IterationFactors> {
    let n = d.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: n });
    }
    let dv = d.as_slice();
    if let Some(j) = (0..n - 1).find(|&j| dv[j] > dv[j + 1]) {
        let (q, t, shift, macro_step) = descent_factors(dv, j);
        return Ok(IterationFactors {
            j,
            q,
            mirrored: false,
            target_index: 0,
            t,
            shift,
            macro_step,
        });
    }
    let reversed: Vec<f64> = dv.iter().rev().copied().collect();
    let j = (0..n - 1)
        .find(|&j| reversed[j] > reversed[j + 1])
        .ok_or(Error::ConstantWeights)?;
    let (q, t, shift, m) = descent_factors(&reversed, j);
    let r = reversal(n);
    let conj = |x: &StochasticMatrix| r.compose(x).compose(&r);
    Ok(IterationFactors {
        j,
        q,
        mirrored: true,
        target_index: n - 1,
        t: conj(&t),
        shift: conj(&shift),
        macro_step: conj(&m),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationStep {
    pub alpha: usize,
    pub x: Vec<f64>,
    /// `‖x^{(α)} − ((1 − q^α)e + q^α x⁽⁰⁾)‖∞`
    pub closed_form_error: f64,
    /// `‖|e⟩⟨e| − diag x^{(α)}‖₁`
    pub distance: f64,
    /// `distance_α / distance_{α−1}`
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationReport {
    pub factors: IterationFactors,
    pub steps: Vec<IterationStep>,
    pub max_closed_form_error: f64,
    /// Largest `|ratio/q − 1|` over the steps.
    pub max_ratio_error: f64,
}

/// Iterates the macro-step from `x0` and compares with the closed form
/// `(1 − q^α)e + q^α x0`.
///
/// The macro-step fixes `e`, so it is applied to the deviation `x − e`; the
/// distance to `|e⟩⟨e|` is the 1-norm of that deviation.
pub fn iterate_majorization(x0: &[f64], d: &WeightVector, steps: usize) -> Result<IterationReport> {
    let n = d.len();
    if x0.len() != n {
        return Err(Error::LengthMismatch {
            left: x0.len(),
            right: n,
        });
    }
    if d.is_constant(0.0) {
        return Err(Error::ConstantWeights);
    }
    let total: f64 = x0.iter().sum();
    if x0.iter().any(|v| !(*v > 0.0)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::PreconditionViolated(
            "x0 must be strictly positive with unit sum".into(),
        ));
    }
    let factors = iteration_factors(d)?;
    let target = factors.target_index;
    let q = factors.q;

    let mut delta: Vec<f64> = x0.to_vec();
    delta[target] -= 1.0;
    let mut prev = delta.iter().map(|v| v.abs()).sum::<f64>();
    let mut out = Vec::with_capacity(steps);
    let (mut max_cf, mut max_ratio) = (0.0_f64, 0.0_f64);
    for alpha in 1..=steps {
        delta = factors.macro_step.apply(&delta);
        // the step preserves the zero sum of the deviation; rounding in the
        // target coordinate would otherwise never decay
        delta[target] = 0.0;
        delta[target] = -delta.iter().sum::<f64>();
        let mut x = delta.clone();
        x[target] += 1.0;
        let qa = q.powi(alpha as i32);
        let closed_form_error = x
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let e = if i == target { 1.0 - qa } else { 0.0 };
                (v - (e + qa * x0[i])).abs()
            })
            .fold(0.0, f64::max);
        let distance = delta.iter().map(|v| v.abs()).sum::<f64>();
        let ratio = distance / prev;
        prev = distance;
        max_cf = max_cf.max(closed_form_error);
        max_ratio = max_ratio.max((ratio / q - 1.0).abs());
        out.push(IterationStep {
            alpha,
            x,
            closed_form_error,
            distance,
            ratio,
        });
    }
    Ok(IterationReport {
        factors,
        steps: out,
        max_closed_form_error: max_cf,
        max_ratio_error: max_ratio,
    })
}
