//! Dense complex linear algebra: the matrix type, a Jacobi eigensolver and
//! the PSD-cone primitives built on it.

mod cone;
mod eig;
mod matrix;
mod subspace;

pub use cone::{psd_check, psd_project, sqrt_psd, trace_norm, Definiteness, PsdCheck};
pub(crate) use cone::{classify, psd_project_any, sqrt_clamped};
pub use eig::{hermitian_eig, hermitian_eig_tol, HermitianEig, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{c64, normalize, vec_inner, vec_norm, ComplexMatrix};
pub use subspace::{max_principal_angle, Subspace};
