//! Trace norm, positivity tests and projections onto the PSD cone.

use serde::Serialize;

use super::eig::{hermitian_eig_tol, HermitianEig};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

/// Hermiticity threshold used by the trace norm to pick the direct spectral route.
const HERMITIAN_ROUTE_TOL: f64 = 1e-13;

/// `‖M‖₁ = tr √(M*M)`, the sum of singular values.
///
/// Hermitian inputs use `Σ|λᵢ|` directly. Everything else goes through the
/// eigenvalues of `M*M`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    m.ensure_square()?;
    if m.is_hermitian(HERMITIAN_ROUTE_TOL) {
        let e = hermitian_eig_tol(m, HERMITIAN_ROUTE_TOL)?;
        return Ok(e.eigenvalues.iter().map(|l| l.abs()).sum());
    }
    let gram = &m.adjoint() * m;
    let e = hermitian_eig_tol(&gram, DEFAULT_TOL)?;
    Ok(e.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsdCheck {
    pub class: Definiteness,
    pub min_eigenvalue: f64,
    /// `max(1, ‖M‖)` with the spectral norm.
    pub scale: f64,
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        self.class != Definiteness::Indefinite
    }

    pub fn is_pd(&self) -> bool {
        self.class == Definiteness::PositiveDefinite
    }
}

/// Classifies a hermitian matrix by its smallest eigenvalue.
///
/// With `scale = max(1, ‖M‖)`: positive definite iff `λ_min > tol·scale`,
/// positive semidefinite iff `λ_min ≥ −tol·scale`.
pub fn psd_check(m: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    let e = hermitian_eig_tol(m, tol.max(DEFAULT_TOL))?;
    Ok(classify(&e, tol))
}

pub(crate) fn classify(e: &HermitianEig, tol: f64) -> PsdCheck {
    let scale = e.spectral_norm().max(1.0);
    let min_eigenvalue = e.min();
    let class = if min_eigenvalue > tol * scale {
        Definiteness::PositiveDefinite
    } else if min_eigenvalue >= -tol * scale {
        Definiteness::PositiveSemidefinite
    } else {
        Definiteness::Indefinite
    };
    PsdCheck {
        class,
        min_eigenvalue,
        scale,
    }
}

/// Frobenius-nearest PSD matrix: eigenvalues truncated at zero.
pub fn psd_project(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig_tol(m, DEFAULT_TOL)?;
    Ok(e.apply_fn(|l| l.max(0.0)))
}

/// PSD projection of the hermitian part of an arbitrary square matrix.
///
/// The hermitian and anti-hermitian parts are Frobenius-orthogonal, so this is
/// the nearest PSD matrix to `m` even when `m` is not hermitian.
pub(crate) fn psd_project_any(m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let h = m.hermitian_part();
    let e = hermitian_eig_tol(&h, DEFAULT_TOL)?;
    Ok((e.apply_fn(|l| l.max(0.0)), e.min()))
}

/// Principal square root of a PSD matrix.
///
/// Eigenvalues in `[−tol·scale, 0)` are clamped to zero; anything more
/// negative is rejected.
pub fn sqrt_psd(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let e = hermitian_eig_tol(m, tol.max(DEFAULT_TOL))?;
    let check = classify(&e, tol);
    if !check.is_psd() {
        return Err(Error::NotPsd {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    Ok(e.apply_fn(|l| l.max(0.0).sqrt()))
}

/// Square root after clamping every negative eigenvalue, however large.
pub(crate) fn sqrt_clamped(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig_tol(m, DEFAULT_TOL)?;
    Ok(e.apply_fn(|l| l.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, hermitian_eig};
    use crate::random::{random_hermitian, random_psd, seeded_rng};
    use num_complex::Complex64;

    #[test]
    fn trace_norm_examples() {
        let m = ComplexMatrix::from_diag(&[-1.0, 1.0]);
        assert!((trace_norm(&m).unwrap() - 2.0).abs() < 1e-15);
        assert!((trace_norm(&ComplexMatrix::identity(5)).unwrap() - 5.0).abs() < 1e-14);
        // nilpotent: singular values (1, 0)
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!((trace_norm(&n).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_general_matches_hermitian_route_on_unitary_multiple() {
        // ‖U‖₁ = n for unitary U
        let u = ComplexMatrix::from_rows(&[
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(-1.0, 0.0)],
        ]);
        assert!((trace_norm(&u).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_is_a_norm() {
        let mut rng = seeded_rng(11);
        for _ in 0..20 {
            let a = random_hermitian(4, &mut rng);
            let b = random_hermitian(4, &mut rng);
            let sum = trace_norm(&(&a + &b)).unwrap();
            assert!(sum <= trace_norm(&a).unwrap() + trace_norm(&b).unwrap() + 1e-12);
            let s = trace_norm(&a.scale(-2.5)).unwrap();
            assert!((s - 2.5 * trace_norm(&a).unwrap()).abs() < 1e-11);
            let p = random_psd(4, &mut rng);
            let tr = p.trace().re;
            assert!((trace_norm(&p).unwrap() - tr).abs() < 1e-12 * tr.max(1.0));
        }
    }

    #[test]
    fn psd_classes() {
        let tol = DEFAULT_TOL;
        assert_eq!(
            psd_check(&ComplexMatrix::identity(3), tol).unwrap().class,
            Definiteness::PositiveDefinite
        );
        assert_eq!(
            psd_check(&ComplexMatrix::identity(3).scale(-1.0), tol).unwrap().class,
            Definiteness::Indefinite
        );
        assert_eq!(
            psd_check(&ComplexMatrix::from_diag(&[1.0, 0.0]), tol).unwrap().class,
            Definiteness::PositiveSemidefinite
        );
    }

    #[test]
    fn weighted_reference_minus_scaled_state_is_psd() {
        // D − d_min ρ with d = (2,1,1)/4 and ρ maximally mixed
        let d = [0.5, 0.25, 0.25];
        let rho = ComplexMatrix::identity(3).scale(1.0 / 3.0);
        let m = &ComplexMatrix::from_diag(&d) - &rho.scale(0.25);
        assert!(psd_check(&m, DEFAULT_TOL).unwrap().is_psd());
    }

    #[test]
    fn projection_examples_and_idempotence() {
        let p = psd_project(&ComplexMatrix::from_diag(&[1.0, -1.0])).unwrap();
        assert!(p.distance(&ComplexMatrix::from_diag(&[1.0, 0.0])) < 1e-15);
        let mut rng = seeded_rng(3);
        let q = random_psd(4, &mut rng);
        assert!(psd_project(&q).unwrap().distance(&q) < 1e-12);
        let h = random_hermitian(4, &mut rng);
        let ph = psd_project(&h).unwrap();
        assert!(psd_check(&ph, DEFAULT_TOL).unwrap().is_psd());
        assert!(psd_project(&ph).unwrap().distance(&ph) < 1e-12);
    }

    #[test]
    fn projection_is_nearest_against_random_psd() {
        let mut rng = seeded_rng(5);
        for _ in 0..5 {
            let m = random_hermitian(3, &mut rng);
            let p = psd_project(&m).unwrap();
            let best = m.distance(&p);
            for _ in 0..100 {
                let q = random_psd(3, &mut rng);
                assert!(best <= m.distance(&q) + 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_psd(&ComplexMatrix::from_diag(&[4.0, 9.0]), DEFAULT_TOL).unwrap();
        assert!(r.distance(&ComplexMatrix::from_diag(&[2.0, 3.0])) < 1e-14);
        let i = sqrt_psd(&ComplexMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert!(i.distance(&ComplexMatrix::identity(3)) < 1e-14);
        let mut rng = seeded_rng(9);
        let m = random_psd(5, &mut rng);
        let r = sqrt_psd(&m, DEFAULT_TOL).unwrap();
        assert!((&r * &r).distance(&m) < 1e-10 * m.frobenius_norm().max(1.0));
        assert!(hermitian_eig(&r).unwrap().min() >= -1e-12);
        assert!(matches!(
            sqrt_psd(&ComplexMatrix::from_diag(&[1.0, -1.0]), DEFAULT_TOL),
            Err(Error::NotPsd { .. })
        ));
        let _: Complex64 = r.trace();
    }
}
