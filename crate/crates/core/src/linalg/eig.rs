//! Cyclic Jacobi eigensolver for complex hermitian matrices.
//!
//! Each rotation acts on one `(p, q)` plane. The off-diagonal entry
//! `a_pq = |a_pq| e^{iφ}` is first made real by a phase on column `q`, after
//! which the classical real rotation annihilates it. Folding the phase back
//! into the rotation gives the unitary
//!
//! ```text
//! G = [  c          s·e^{iφ} ]
//!     [ −s·e^{−iφ}  c        ]
//! ```
//!
//! on the `(p, q)` plane, and the update is `A ← G* A G`, `V ← V G`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal Frobenius mass at which the sweep stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Spectral decomposition `M = V diag(λ) V*` of a hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    /// Functional calculus `V f(Λ) V*` on the decomposition.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k])
                .sum::<Complex64>()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|l| l)
    }
}

/// Eigendecomposition of a hermitian matrix with the default hermiticity tolerance.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    hermitian_eig_tol(m, DEFAULT_TOL)
}

/// Eigendecomposition; `tol` bounds `‖M − M*‖_F` relative to `max(1, ‖M‖_F)`.
///
/// Only the hermitian part of `m` is diagonalized.
pub fn hermitian_eig_tol(m: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    let n = m.ensure_square()?;
    let scale = m.frobenius_norm().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > tol * scale {
        return Err(Error::NonHermitianInput { defect });
    }
    jacobi(m.hermitian_part(), n, scale)
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: ComplexMatrix, n: usize, scale: f64) -> Result<HermitianEig> {
    let mut a = m.into_vec();
    let mut v = ComplexMatrix::identity(n).into_vec();
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut converged = off_diagonal_mass(&a, n) < threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        converged = off_diagonal_mass(&a, n) < threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep sweep order
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Skip entries already negligible against both diagonal entries.
    if b < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = Complex64::new(0.0, 0.0);
        a[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / b;
    let theta = (aqq - app) / (2.0 * b);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pq = phase * s;
    let g_qp = -phase.conj() * s;

    // A ← A G (columns p, q)
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * c;
    }
    // A ← G* A (rows p, q)
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c + aqk * g_qp.conj();
        a[q * n + k] = apk * g_pq.conj() + aqk * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(app - t * b, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * b, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * g_qp;
        v[k * n + q] = vkp * g_pq + vkq * c;
    }
}
