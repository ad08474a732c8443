use num_complex::Complex64;

use super::instance::DMajInstance;
use crate::channels::ChoiMatrix;
use crate::error::Result;
use crate::feasibility::{dykstra, FeasibilityReport, LinearSystem, SolverParams, Verdict};
use crate::linalg::{psd_project_any, ComplexMatrix};

/// Real coordinates of a complex matrix: `(re, im)` per entry, row-major.
fn to_real(m: &ComplexMatrix) -> Vec<f64> {
    m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn from_real(size: usize, v: &[f64]) -> ComplexMatrix {
    let data = v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    ComplexMatrix::try_new(size, size, data).expect("length matches size²")
}

/// Adds `Σ_p w_p z_p = c` as its real and imaginary equations.
fn push_complex(system: &mut LinearSystem, dim: usize, terms: &[(usize, Complex64)], c: Complex64) {
    let mut re = vec![0.0; dim];
    let mut im = vec![0.0; dim];
    for &(p, w) in terms {
        re[2 * p] += w.re;
        re[2 * p + 1] -= w.im;
        im[2 * p] += w.im;
        im[2 * p + 1] += w.re;
    }
    system.push(re, c.re);
    system.push(im, c.im);
}

fn constraints(inst: &DMajInstance) -> LinearSystem {
    let n = inst.dim();
    let size = n * n;
    let dim = 2 * size * size;
    let at = |r: usize, c: usize| r * size + c;
    let mut system = LinearSystem::new(dim);

    system.begin_group("trace_preservation");
    for i in 0..n {
        for j in 0..n {
            let terms: Vec<_> = (0..n)
                .map(|a| (at(i * n + a, j * n + a), Complex64::new(1.0, 0.0)))
                .collect();
            let target = if i == j { 1.0 } else { 0.0 };
            push_complex(&mut system, dim, &terms, Complex64::new(target, 0.0));
        }
    }

    let image = |system: &mut LinearSystem, input: &ComplexMatrix, output: &ComplexMatrix| {
        for r in 0..n {
            for s in 0..n {
                let mut terms = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let w = input[(i, j)];
                        if w != Complex64::new(0.0, 0.0) {
                            terms.push((at(i * n + r, j * n + s), w));
                        }
                    }
                }
                push_complex(system, dim, &terms, output[(r, s)]);
            }
        }
    };
    system.begin_group("image_of_b");
    image(&mut system, inst.b(), inst.a());
    system.begin_group("fixed_point");
    let dm = inst.d_matrix();
    image(&mut system, &dm, &dm);
    system
}

/// Searches a channel `T` with `T(B) = A` and `T(D) = D` by Dykstra
/// alternating projections on the Choi matrix.
///
/// Closed-form witnesses are tried first: the identity when `A = B`, and the
/// trace projection onto `D/tr D` when `A = tr(B)·D/tr D`. A returned witness
/// is expressed in the frame the instance was given in.
pub fn d_maj_feasibility(
    inst: &DMajInstance,
    params: &SolverParams,
) -> Result<FeasibilityReport<ChoiMatrix>> {
    let n = inst.dim();
    let size = n * n;
    let scale = inst.scale();
    let system = constraints(inst);
    let tol = params.eps_feas * scale;

    let dm = inst.d_matrix();
    let rho = dm.scale(1.0 / inst.d().sum());
    let trace_projection = ChoiMatrix::trace_projection(n, &rho);
    let candidates = [
        ("identity", ChoiMatrix::identity(n)),
        ("trace_projection", trace_projection.clone()),
    ];
    for (name, c) in candidates {
        let residuals = system.residuals(&to_real(c.matrix()));
        if residuals.iter().all(|r| r.value < tol) {
            let w = inst.to_original_frame(c);
            return Ok(FeasibilityReport::closed_form(w, name, residuals, scale));
        }
    }

    let cone = |v: &[f64]| -> Vec<f64> {
        let m = from_real(size, v);
        match psd_project_any(&m) {
            Ok((p, _)) => to_real(&p),
            Err(_) => vec![f64::NAN; v.len()],
        }
    };
    let out = dykstra(to_real(trace_projection.matrix()), cone, &system, scale, params);
    let witness = (out.verdict == Verdict::Feasible).then(|| {
        let c = ChoiMatrix::new(n, n, from_real(size, &out.point)).expect("Choi shape");
        inst.to_original_frame(c)
    });
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
