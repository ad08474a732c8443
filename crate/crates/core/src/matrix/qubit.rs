use serde::Serialize;

use super::instance::DMajInstance;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, sqrt_clamped, trace_norm, ComplexMatrix};

/// Exact decision of `A ≺_D B` for `2×2` hermitian matrices.
#[derive(Clone, Debug, Serialize)]
pub struct QubitCheckReport {
    /// Extreme eigenvalues of `D^{−1/2} B D^{−1/2}`, `b1 ≤ b2`.
    pub b1: f64,
    pub b2: f64,
    pub trace_equal: bool,
    /// `‖A − bᵢD‖₁ ≤ ‖B − bᵢD‖₁` for `i = 1, 2`.
    pub norm_ineqs: [bool; 2],
    /// `‖√(A − b₁D)√(b₂D − A)‖₁ ≥ ‖√(B − b₁D)√(b₂D − B)‖₁`
    pub fidelity_ineq: bool,
    /// `b1 = b2`, i.e. `B ∝ D`; the fidelity condition is vacuous and ignored.
    pub degenerate: bool,
    pub verdict: bool,
    pub trace_gap: f64,
    pub norm_margins: [f64; 2],
    pub fidelity_a: f64,
    pub fidelity_b: f64,
}

fn fidelity(m: &ComplexMatrix, inst: &DMajInstance, b1: f64, b2: f64) -> Result<f64> {
    let lower = sqrt_clamped(&inst.shifted(m, b1).hermitian_part())?;
    let upper = sqrt_clamped(&inst.shifted(m, b2).scale(-1.0).hermitian_part())?;
    trace_norm(&(&lower * &upper))
}

pub fn qubit_check(inst: &DMajInstance, tol: f64) -> Result<QubitCheckReport> {
    if inst.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "qubit check needs n = 2, got n = {}",
            inst.dim()
        )));
    }
    inst.ensure_hermitian(tol)?;
    let (a, b) = (inst.a().hermitian_part(), inst.b().hermitian_part());
    let scale = inst.scale();
    let slack = tol * scale;

    let spec = hermitian_eig(&inst.whiten(&b))?;
    let (b1, b2) = (spec.min(), spec.max());

    let trace_gap = (a.trace().re - b.trace().re).abs();
    let trace_equal = trace_gap <= slack;

    let mut norm_margins = [0.0; 2];
    for (slot, t) in norm_margins.iter_mut().zip([b1, b2]) {
        *slot = trace_norm(&inst.shifted(&b, t))? - trace_norm(&inst.shifted(&a, t))?;
    }
    let norm_ineqs = norm_margins.map(|m| m >= -slack);

    let degenerate = b2 - b1 <= tol * b1.abs().max(b2.abs()).max(1.0);
    let fidelity_a = fidelity(&a, inst, b1, b2)?;
    let fidelity_b = fidelity(&b, inst, b1, b2)?;
    let fidelity_ineq = fidelity_a >= fidelity_b - slack;

    let verdict = trace_equal && norm_ineqs[0] && norm_ineqs[1] && (degenerate || fidelity_ineq);
    Ok(QubitCheckReport {
        b1,
        b2,
        trace_equal,
        norm_ineqs,
        fidelity_ineq,
        degenerate,
        verdict,
        trace_gap,
        norm_margins,
        fidelity_a,
        fidelity_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::random::{random_hermitian, seeded_rng};
    use crate::vector::{d_majorization_check, WeightVector};
    use rand::Rng;

    fn inst(a: ComplexMatrix, b: ComplexMatrix, d: &[f64]) -> DMajInstance {
        DMajInstance::new(a, b, WeightVector::new(d.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn reflexive() {
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            let b = random_hermitian(2, &mut rng);
            let r = qubit_check(&inst(b.clone(), b, &[0.7, 0.3]), 1e-9).unwrap();
            assert!(r.verdict);
            assert!((r.fidelity_a - r.fidelity_b).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_is_minimal() {
        let mut rng = seeded_rng(2);
        let d = [0.8, 0.2];
        for _ in 0..50 {
            let b = random_hermitian(2, &mut rng);
            let a = ComplexMatrix::from_diag(&d).scale(b.trace().re);
            assert!(qubit_check(&inst(a, b, &d), 1e-9).unwrap().verdict);
        }
    }

    #[test]
    fn diagonal_instances_match_vector_check() {
        let mut rng = seeded_rng(3);
        let mut seen = [0, 0];
        for _ in 0..500 {
            let d = [rng.random_range(0.1..1.0), rng.random_range(0.1..1.0)];
            let y = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let s: f64 = rng.random_range(-1.5..1.5);
            let total: f64 = y.iter().sum();
            let center = total / (d[0] + d[1]);
            // x on the line through the weight point, at a random relative offset
            let x = [
                center * d[0] + s * (y[0] - center * d[0]),
                center * d[1] + s * (y[1] - center * d[1]),
            ];
            let wv = WeightVector::new(d.to_vec()).unwrap();
            let expected = d_majorization_check(&x, &y, &wv, 1e-9).unwrap().verdict;
            let r = qubit_check(
                &inst(ComplexMatrix::from_diag(&x), ComplexMatrix::from_diag(&y), &d),
                1e-9,
            )
            .unwrap();
            assert_eq!(r.verdict, expected, "x={x:?} y={y:?} d={d:?}");
            seen[usize::from(expected)] += 1;
        }
        assert!(seen[0] > 50 && seen[1] > 50);
    }

    #[test]
    fn shift_invariance() {
        let mut rng = seeded_rng(4);
        let d = [0.6, 0.4];
        for _ in 0..50 {
            let a = random_hermitian(2, &mut rng);
            let mut b = random_hermitian(2, &mut rng);
            let shift = (a.trace().re - b.trace().re) / 2.0;
            b = &b + &ComplexMatrix::identity(2).scale(shift);
            let base = qubit_check(&inst(a.clone(), b.clone(), &d), 1e-9).unwrap();
            let t: f64 = rng.random_range(-3.0..3.0);
            let i0 = inst(a, b, &d);
            let shifted = inst(i0.shifted(i0.a(), t), i0.shifted(i0.b(), t), &d);
            let r = qubit_check(&shifted, 1e-9).unwrap();
            assert_eq!(r.verdict, base.verdict);
            assert!((r.b1 - base.b1 + t).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_wrong_shapes() {
        let d = WeightVector::uniform(3);
        let i3 = DMajInstance::new(ComplexMatrix::identity(3), ComplexMatrix::identity(3), d).unwrap();
        assert!(matches!(qubit_check(&i3, 1e-9), Err(Error::DimensionMismatch(_))));
        let nh = ComplexMatrix::from_rows(&[vec![c64(1.0, 0.0), c64(1.0, 0.0)], vec![c64(0.0, 0.0), c64(1.0, 0.0)]]);
        let i2 = inst(nh, ComplexMatrix::identity(2), &[1.0, 1.0]);
        assert!(matches!(qubit_check(&i2, 1e-9), Err(Error::NonHermitianInput { .. })));
    }
}
