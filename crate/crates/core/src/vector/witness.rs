use super::types::{StochasticMatrix, WeightVector};
use crate::error::{Error, Result};
use crate::feasibility::{dykstra, FeasibilityReport, LinearSystem, SolverParams};

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Searches a column-stochastic `A` with `Ad = d` and `Ay = x` by alternating
/// projections between the nonnegative orthant and the affine constraints.
pub fn d_stochastic_witness(
    x: &[f64],
    y: &[f64],
    d: &WeightVector,
    params: &SolverParams,
) -> Result<FeasibilityReport<StochasticMatrix>> {
    let n = d.len();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                left: v.len(),
                right: n,
            });
        }
    }
    let dv = d.as_slice();
    let scale = norm2(x).max(norm2(y)).max(norm2(dv)).max(1.0);

    let mut system = LinearSystem::new(n * n);
    system.begin_group("column_sums");
    for j in 0..n {
        let mut row = vec![0.0; n * n];
        (0..n).for_each(|i| row[i * n + j] = 1.0);
        system.push(row, 1.0);
    }
    for (name, v, target) in [("fixed_point", dv, dv), ("image", y, x)] {
        system.begin_group(name);
        for i in 0..n {
            let mut row = vec![0.0; n * n];
            row[i * n..(i + 1) * n].copy_from_slice(v);
            system.push(row, target[i]);
        }
    }

    let sum_d = d.sum();
    let collapse: Vec<f64> = (0..n * n).map(|k| dv[k / n] / sum_d).collect();
    let tol = params.eps_feas * scale;
    let closed_forms = [
        ("identity", StochasticMatrix::identity(n).entries().to_vec()),
        ("weight_projection", collapse.clone()),
    ];
    for (name, entries) in closed_forms {
        let residuals = system.residuals(&entries);
        if residuals.iter().all(|r| r.value < tol) {
            let w = StochasticMatrix::from_parts(n, entries).with_fixed_vector(d.clone());
            return Ok(FeasibilityReport::closed_form(w, name, residuals, scale));
        }
    }

    let orthant = |v: &[f64]| v.iter().map(|a| a.max(0.0)).collect::<Vec<f64>>();
    let out = dykstra(collapse, orthant, &system, scale, params);
    let witness = (out.verdict == crate::Verdict::Feasible)
        .then(|| StochasticMatrix::from_parts(n, out.point).with_fixed_vector(d.clone()));
    Ok(FeasibilityReport {
        verdict: out.verdict,
        witness,
        residual_trace: out.residual_trace,
        constraint_residuals: out.constraint_residuals,
        iterations: out.iterations,
        final_gap: out.final_gap,
        scale,
        linear_inconsistency: out.linear_inconsistency,
        shortcut: None,
    })
}
