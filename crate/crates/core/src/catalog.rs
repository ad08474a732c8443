//! Named maps and matrices used as worked examples and regression fixtures.

use num_complex::Complex64;

use crate::channels::ChoiMatrix;
use crate::linalg::{c64, ComplexMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// CPTP qubit map `a ↦ diag(a11 + a22/2, a22/2)`: strictly positive, but every
/// fixed point is rank one.
pub fn example_b1() -> ChoiMatrix {
    ChoiMatrix::from_map(2, 2, |a| {
        let (a11, a22) = (a[(0, 0)], a[(1, 1)]);
        ComplexMatrix::from_complex_diag(&[a11 + a22 * 0.5, a22 * 0.5])
    })
}

/// Qutrit channel `a ↦ diag(a22 + a33, a11/2, a11/2)` with fixed point
/// `diag(2,1,1)`; it raises the rank of `|e₁⟩⟨e₁|`.
pub fn example_b2() -> ChoiMatrix {
    ChoiMatrix::from_map(3, 3, |a| {
        ComplexMatrix::from_complex_diag(&[
            a[(1, 1)] + a[(2, 2)],
            a[(0, 0)] * 0.5,
            a[(0, 0)] * 0.5,
        ])
    })
}

/// Trace-preserving, non-positive perturbation `T_m` of the qubit identity.
pub fn example_b3(m: u32) -> ChoiMatrix {
    let w = 1.0 / f64::from(m);
    ChoiMatrix::from_map(2, 2, |a| {
        ComplexMatrix::from_rows(&[
            vec![a[(0, 0)] * (1.0 + w) - a[(1, 1)] * w, a[(0, 1)]],
            vec![a[(1, 0)], a[(1, 1)] * (1.0 + w) - a[(0, 0)] * w],
        ])
    })
}

/// Qutrit channel that is neither strictly positive nor a trace projection;
/// its Choi spectrum is `{2, 1, 0 (×7)}`.
pub fn example_b4() -> ChoiMatrix {
    let h = c64(0.0, std::f64::consts::FRAC_1_SQRT_2);
    ChoiMatrix::from_map(3, 3, |a| {
        ComplexMatrix::from_rows(&[
            vec![a[(0, 0)], h * (a[(0, 1)] + a[(0, 2)]), ZERO],
            vec![-h * (a[(1, 0)] + a[(2, 0)]), a[(1, 1)] + a[(2, 2)], ZERO],
            vec![ZERO, ZERO, ZERO],
        ])
    })
}

/// The dual of [`example_b4`], written out entrywise.
pub fn example_b4_dual() -> ChoiMatrix {
    let h = c64(0.0, std::f64::consts::FRAC_1_SQRT_2);
    ChoiMatrix::from_map(3, 3, |b| {
        ComplexMatrix::from_rows(&[
            vec![b[(0, 0)], -h * b[(0, 1)], -h * b[(0, 1)]],
            vec![h * b[(1, 0)], b[(1, 1)], ZERO],
            vec![h * b[(1, 0)], ZERO, b[(1, 1)]],
        ])
    })
}

/// Pauli-X unitary channel `ρ ↦ σρσ`.
pub fn example_b5() -> ChoiMatrix {
    let sigma = pauli_x();
    ChoiMatrix::from_map(2, 2, |rho| rho.conjugate_by(&sigma))
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn transposition(n: usize) -> ChoiMatrix {
    ChoiMatrix::from_map(n, n, ComplexMatrix::transpose)
}

/// Depolarizing channel `X ↦ tr(X)·𝟙/n`.
pub fn depolarizing(n: usize) -> ChoiMatrix {
    ChoiMatrix::trace_projection(n, &ComplexMatrix::identity(n).scale(1.0 / n as f64))
}

/// The qutrit triple `(A, B, D)` with `A = Bᵀ`, `D = Dᵀ > 0`: every trace-norm
/// inequality `‖A − tD‖₁ ≤ ‖B − tD‖₁` holds, yet no channel fixing `D` maps
/// `B` to `A`.
pub fn heinosaari_triple() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let r = |x: f64| c64(x, 0.0);
    let i = c64(0.0, 1.0);
    let a = ComplexMatrix::from_rows(&[
        vec![r(2.0), r(1.0), ZERO],
        vec![r(1.0), r(2.0), -i],
        vec![ZERO, i, r(2.0)],
    ]);
    let b = a.transpose();
    let d = ComplexMatrix::from_real(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
    (a, b, d)
}
