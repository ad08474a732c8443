use serde::Serialize;

use super::instance::DMajInstance;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, trace_norm, ComplexMatrix};

/// Points of the default uniform grid over `[b₁ − 1, b₂ + 1]`.
pub const DEFAULT_GRID_POINTS: usize = 41;

const GOLDEN_ITERATIONS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Breakpoint,
    Grid,
    User,
    Refined,
}

/// `margin = ‖B − tD‖₁ − ‖A − tD‖₁`
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub margin: f64,
    pub source: SampleSource,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveCheckReport {
    pub holds: bool,
    pub trace_equal: bool,
    pub worst_margin: f64,
    pub worst_t: f64,
    /// Worst margin over breakpoints, grid and user values only.
    pub sampled_worst_margin: f64,
    /// `t ↦ ‖B − tD‖₁ − ‖A − tD‖₁` is not piecewise linear, so a finite
    /// sample never proves the inequality for all `t`.
    pub decisive: bool,
    pub samples: Vec<CurveSample>,
}

/// Tests `‖A − tD‖₁ ≤ ‖B − tD‖₁` on the spectral breakpoints of
/// `D^{−1/2}AD^{−1/2}` and `D^{−1/2}BD^{−1/2}`, a uniform grid, the given
/// `t_values`, and a golden-section minimization of the margin between
/// consecutive sample points. A necessary condition for `A ≺_D B`.
pub fn trace_norm_curve_check(
    inst: &DMajInstance,
    t_values: &[f64],
    tol: f64,
) -> Result<CurveCheckReport> {
    inst.ensure_hermitian(tol)?;
    let (a, b) = (inst.a().hermitian_part(), inst.b().hermitian_part());
    let slack = tol * inst.scale();
    let margin = |t: f64| -> Result<f64> {
        Ok(trace_norm(&inst.shifted(&b, t))? - trace_norm(&inst.shifted(&a, t))?)
    };

    let spec_a = hermitian_eig(&inst.whiten(&a))?;
    let spec_b = hermitian_eig(&inst.whiten(&b))?;
    let (b1, b2) = (spec_b.min(), spec_b.max());

    let mut samples = Vec::new();
    let push = |t: f64, source, samples: &mut Vec<CurveSample>| -> Result<()> {
        samples.push(CurveSample {
            t,
            margin: margin(t)?,
            source,
        });
        Ok(())
    };
    for &t in spec_a.eigenvalues.iter().chain(&spec_b.eigenvalues) {
        push(t, SampleSource::Breakpoint, &mut samples)?;
    }
    let (lo, hi) = (b1 - 1.0, b2 + 1.0);
    for i in 0..DEFAULT_GRID_POINTS {
        let t = lo + (hi - lo) * i as f64 / (DEFAULT_GRID_POINTS - 1) as f64;
        push(t, SampleSource::Grid, &mut samples)?;
    }
    for &t in t_values {
        push(t, SampleSource::User, &mut samples)?;
    }
    let sampled_worst_margin = samples.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min);

    let mut ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for w in ts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if hi - lo < 1e-12 {
            continue;
        }
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let (mut fc, mut fd) = (margin(c)?, margin(d)?);
        for _ in 0..GOLDEN_ITERATIONS {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = margin(c)?;
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = margin(d)?;
            }
        }
        let (t, m) = if fc < fd { (c, fc) } else { (d, fd) };
        samples.push(CurveSample {
            t,
            margin: m,
            source: SampleSource::Refined,
        });
    }

    let worst = samples
        .iter()
        .min_by(|x, y| x.margin.total_cmp(&y.margin))
        .copied()
        .expect("at least one sample");
    let trace_equal = (a.trace().re - b.trace().re).abs() <= slack;
    Ok(CurveCheckReport {
        holds: trace_equal && worst.margin >= -slack,
        trace_equal,
        worst_margin: worst.margin,
        worst_t: worst.t,
        sampled_worst_margin,
        decisive: false,
        samples,
    })
}

/// Operator convex functions for [`matrix_convex_necessary_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexFunction {
    /// `x ↦ x²`
    Square,
    /// `x ↦ 1/(x + c)` on `x > −c`
    ShiftedInverse { c: f64 },
}

impl ConvexFunction {
    pub fn name(&self) -> String {
        match self {
            ConvexFunction::Square => "x^2".into(),
            ConvexFunction::ShiftedInverse { c } => format!("1/(x+{c})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexCheck {
    pub function: ConvexFunction,
    /// `tr(D ψ(D^{−1/2}AD^{−1/2}))`
    pub lhs: f64,
    /// `tr(D ψ(D^{−1/2}BD^{−1/2}))`
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

/// `tr(D ψ(D^{−1/2}AD^{−1/2})) ≤ tr(D ψ(D^{−1/2}BD^{−1/2}))` for each `ψ`.
///
/// Necessary for `A ≺_D B` but not sufficient.
pub fn matrix_convex_necessary_check(
    inst: &DMajInstance,
    family: &[ConvexFunction],
    tol: f64,
) -> Result<Vec<ConvexCheck>> {
    inst.ensure_hermitian(tol)?;
    let spec_a = hermitian_eig(&inst.whiten(&inst.a().hermitian_part()))?;
    let spec_b = hermitian_eig(&inst.whiten(&inst.b().hermitian_part()))?;
    let d = inst.d_matrix();
    let value = |e: &crate::linalg::HermitianEig, f: &dyn Fn(f64) -> f64| -> f64 {
        let fm: ComplexMatrix = e.apply_fn(f);
        (&d * &fm).trace().re
    };
    family
        .iter()
        .map(|&function| {
            let (lhs, rhs) = match function {
                ConvexFunction::Square => {
                    let sq = |x: f64| x * x;
                    (value(&spec_a, &sq), value(&spec_b, &sq))
                }
                ConvexFunction::ShiftedInverse { c } => {
                    let low = spec_a.min().min(spec_b.min());
                    if low <= -c {
                        return Err(Error::DomainViolation(format!(
                            "spectrum reaches {low}, outside x > {}",
                            -c
                        )));
                    }
                    let inv = move |x: f64| 1.0 / (x + c);
                    (value(&spec_a, &inv), value(&spec_b, &inv))
                }
            };
            let margin = rhs - lhs;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            Ok(ConvexCheck {
                function,
                lhs,
                rhs,
                margin,
                holds: margin >= -tol * scale,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::random::{random_hermitian, seeded_rng};
    use crate::vector::WeightVector;

    fn heinosaari() -> DMajInstance {
        let (a, b, d) = catalog::heinosaari_triple();
        DMajInstance::with_reference(a, b, &d, 1e-9).unwrap()
    }

    #[test]
    fn heinosaari_passes_curve_check() {
        let r = trace_norm_curve_check(&heinosaari(), &[], 1e-9).unwrap();
        assert!(r.holds);
        assert!(r.sampled_worst_margin >= -1e-10);
        assert!(!r.decisive);
    }

    #[test]
    fn heinosaari_square_is_an_equality() {
        let checks = matrix_convex_necessary_check(
            &heinosaari(),
            &[ConvexFunction::Square, ConvexFunction::ShiftedInverse { c: 1.0 }],
            1e-9,
        )
        .unwrap();
        assert!(checks[0].margin.abs() < 1e-10);
        assert!(checks.iter().all(|c| c.holds));
    }

    #[test]
    fn equal_matrices_have_zero_margins() {
        let mut rng = seeded_rng(6);
        let b = random_hermitian(3, &mut rng);
        let inst = DMajInstance::new(b.clone(), b, WeightVector::new(vec![1.0, 2.0, 3.0]).unwrap())
            .unwrap();
        let r = trace_norm_curve_check(&inst, &[0.0, 10.0], 1e-9).unwrap();
        assert!(r.holds && r.worst_margin.abs() < 1e-12);
        let c = matrix_convex_necessary_check(&inst, &[ConvexFunction::Square], 1e-9).unwrap();
        assert!(c[0].margin.abs() < 1e-12);
    }

    #[test]
    fn inverse_domain_is_enforced() {
        let inst = DMajInstance::new(
            ComplexMatrix::from_diag(&[-2.0, 1.0]),
            ComplexMatrix::from_diag(&[1.0, -2.0]),
            WeightVector::uniform(2),
        )
        .unwrap();
        assert!(matches!(
            matrix_convex_necessary_check(&inst, &[ConvexFunction::ShiftedInverse { c: 1.0 }], 1e-9),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn detects_violation() {
        let inst = DMajInstance::new(
            ComplexMatrix::from_diag(&[1.0, 0.0]),
            ComplexMatrix::from_diag(&[0.5, 0.5]),
            WeightVector::uniform(2),
        )
        .unwrap();
        let r = trace_norm_curve_check(&inst, &[], 1e-9).unwrap();
        assert!(!r.holds);
        assert!(r.worst_margin < -0.1);
    }
}
