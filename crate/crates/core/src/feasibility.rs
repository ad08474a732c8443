//! Dykstra alternating projections between a closed convex cone and an affine
//! subspace of `Rᴺ`, shared by the vector and matrix feasibility problems.
//!
//! Alternating projections cannot certify infeasibility. A problem is
//! reported [`Verdict::InfeasibleHeuristic`] when the gap between the two sets
//! stops shrinking while still large; every report carries the residual trace.

use serde::Serialize;

/// Stopping rules for the alternating-projection solver.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolverParams {
    pub max_iter: usize,
    /// Constraint residuals below `eps_feas·scale` count as satisfied.
    pub eps_feas: f64,
    /// A plateaued gap above `eps_infeas` counts as infeasible.
    pub eps_infeas: f64,
    /// Iterations over which plateau progress is measured.
    pub plateau_window: usize,
    /// Relative gap improvement per window below which the gap has plateaued.
    pub plateau_improvement: f64,
    /// Record every `trace_every`-th iterate in the residual trace.
    pub trace_every: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            eps_feas: 1e-8,
            eps_infeas: 1e-5,
            plateau_window: 500,
            plateau_improvement: 1e-3,
            trace_every: 250,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    InfeasibleHeuristic,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintResidual {
    pub name: String,
    pub value: f64,
}

/// Outcome of a feasibility solve. `witness` is present iff the verdict is
/// [`Verdict::Feasible`].
#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport<W> {
    pub verdict: Verdict,
    pub witness: Option<W>,
    /// `(iteration, gap)` samples with `gap = ‖x − y‖ / scale`.
    pub residual_trace: Vec<(usize, f64)>,
    /// Largest violation per constraint group at the returned point.
    pub constraint_residuals: Vec<ConstraintResidual>,
    pub iterations: usize,
    pub final_gap: f64,
    pub scale: f64,
    /// The linear constraints alone are inconsistent.
    pub linear_inconsistency: bool,
    /// Name of the closed-form witness used instead of iterating, if any.
    pub shortcut: Option<String>,
}

impl<W> FeasibilityReport<W> {
    pub(crate) fn closed_form(witness: W, name: &str, residuals: Vec<ConstraintResidual>, scale: f64) -> Self {
        Self {
            verdict: Verdict::Feasible,
            witness: Some(witness),
            residual_trace: Vec::new(),
            constraint_residuals: residuals,
            iterations: 0,
            final_gap: 0.0,
            scale,
            linear_inconsistency: false,
            shortcut: Some(name.to_string()),
        }
    }
}

/// Real linear equations `⟨aᵢ, x⟩ = bᵢ`, grouped for residual reporting.
#[derive(Clone, Debug, Default)]
pub(crate) struct LinearSystem {
    dim: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    groups: Vec<(String, usize, usize)>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Self::default()
        }
    }

    pub fn begin_group(&mut self, name: &str) {
        let at = self.rows.len();
        self.groups.push((name.to_string(), at, at));
    }

    pub fn push(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.dim);
        self.rows.push(row);
        self.rhs.push(rhs);
        if let Some(g) = self.groups.last_mut() {
            g.2 = self.rows.len();
        }
    }

    /// Largest absolute violation per group.
    pub fn residuals(&self, x: &[f64]) -> Vec<ConstraintResidual> {
        self.groups
            .iter()
            .map(|(name, start, end)| {
                let value = (*start..*end)
                    .map(|i| (dot(&self.rows[i], x) - self.rhs[i]).abs())
                    .fold(0.0, f64::max);
                ConstraintResidual {
                    name: name.clone(),
                    value,
                }
            })
            .collect()
    }
}

/// Orthogonal projection onto `{x : Ax = b}` from an orthonormal basis of the
/// row space.
pub(crate) struct AffineProjector {
    basis: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl AffineProjector {
    /// Modified Gram–Schmidt on the rows. Returns `None` when a dependent row
    /// has an inconsistent right-hand side.
    pub fn new(system: &LinearSystem) -> Option<Self> {
        let row_scale = system
            .rows
            .iter()
            .map(|r| dot(r, r).sqrt())
            .fold(1.0, f64::max);
        let rhs_scale = system.rhs.iter().map(|b| b.abs()).fold(1.0, f64::max);
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut rhs: Vec<f64> = Vec::new();
        for (row, &b) in system.rows.iter().zip(&system.rhs) {
            let mut v = row.clone();
            let mut c = b;
            // two passes keep the basis orthonormal to working precision
            for _ in 0..2 {
                for (q, &bq) in basis.iter().zip(&rhs) {
                    let h = dot(q, &v);
                    axpy(&mut v, -h, q);
                    c -= h * bq;
                }
            }
            let norm = dot(&v, &v).sqrt();
            if norm <= 1e-10 * row_scale {
                if c.abs() > 1e-9 * rhs_scale {
                    return None;
                }
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
            rhs.push(c / norm);
        }
        Some(Self { basis, rhs })
    }

    pub fn project(&self, x: &mut [f64]) {
        for (q, &b) in self.basis.iter().zip(&self.rhs) {
            let h = dot(q, x) - b;
            axpy(x, -h, q);
        }
    }
}

pub(crate) struct DykstraOutcome {
    pub verdict: Verdict,
    /// The cone-side iterate (always inside the cone).
    pub point: Vec<f64>,
    pub residual_trace: Vec<(usize, f64)>,
    pub constraint_residuals: Vec<ConstraintResidual>,
    pub iterations: usize,
    pub final_gap: f64,
    pub linear_inconsistency: bool,
}

/// Dykstra iteration `y = P_K(x + p)`, `p ← x + p − y`, `x = P_aff(y)`.
///
/// Feasible once every constraint group is satisfied at `y` within
/// `eps_feas·scale`.
pub(crate) fn dykstra(
    start: Vec<f64>,
    cone: impl Fn(&[f64]) -> Vec<f64>,
    system: &LinearSystem,
    scale: f64,
    params: &SolverParams,
) -> DykstraOutcome {
    let Some(affine) = AffineProjector::new(system) else {
        return DykstraOutcome {
            verdict: Verdict::InfeasibleHeuristic,
            point: start.clone(),
            residual_trace: Vec::new(),
            constraint_residuals: system.residuals(&start),
            iterations: 0,
            final_gap: f64::INFINITY,
            linear_inconsistency: true,
        };
    };
    let tol = params.eps_feas * scale;
    let window = params.plateau_window.max(1);
    let every = params.trace_every.max(1);

    let mut x = start;
    affine.project(&mut x);
    let mut p = vec![0.0; x.len()];
    let mut y = x.clone();
    let mut trace = Vec::new();
    let mut history: Vec<f64> = Vec::new();
    let mut gap = f64::INFINITY;
    let mut verdict = Verdict::Undecided;
    let mut iterations = 0;

    for it in 1..=params.max_iter {
        iterations = it;
        let shifted: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + b).collect();
        y = cone(&shifted);
        for ((pi, si), yi) in p.iter_mut().zip(&shifted).zip(&y) {
            *pi = si - yi;
        }
        x.copy_from_slice(&y);
        affine.project(&mut x);

        gap = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            / scale;
        if it % every == 0 || it == 1 {
            trace.push((it, gap));
        }
        if system.residuals(&y).iter().all(|r| r.value < tol) {
            verdict = Verdict::Feasible;
            break;
        }
        if it % window == 0 {
            if let Some(&previous) = history.last() {
                let improvement = (previous - gap) / previous;
                if gap > params.eps_infeas && improvement < params.plateau_improvement {
                    verdict = Verdict::InfeasibleHeuristic;
                    break;
                }
            }
            history.push(gap);
        }
    }
    if trace.last().map(|t| t.0) != Some(iterations) {
        trace.push((iterations, gap));
    }
    DykstraOutcome {
        verdict,
        constraint_residuals: system.residuals(&y),
        point: y,
        residual_trace: trace,
        iterations,
        final_gap: gap,
        linear_inconsistency: false,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
