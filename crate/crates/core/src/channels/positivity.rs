use num_complex::Complex64;
use serde::Serialize;

use super::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    classify, hermitian_eig_tol, max_principal_angle, psd_check, ComplexMatrix, Subspace,
};
use crate::DEFAULT_TOL;

/// Principal angle below which two kernels count as equal.
const KERNEL_ANGLE_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SpVerdict {
    StrictlyPositive,
    /// `m = dim ker T(𝟙)`
    NotStrictlyPositive { m: usize },
}

impl SpVerdict {
    pub fn is_sp(&self) -> bool {
        matches!(self, SpVerdict::StrictlyPositive)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpCheck {
    pub verdict: SpVerdict,
    /// Smallest eigenvalue of `T(𝟙)`.
    pub min_eigenvalue: f64,
}

/// Orthonormal basis of the eigenspace of a hermitian matrix for eigenvalues
/// at most `tol·max(1, ‖M‖)`.
pub fn kernel_of(m: &ComplexMatrix, tol: f64) -> Result<Subspace> {
    let e = hermitian_eig_tol(m, tol.max(DEFAULT_TOL))?;
    let cutoff = tol * e.spectral_norm().max(1.0);
    let basis = (0..e.dim())
        .filter(|&i| e.eigenvalues[i] <= cutoff)
        .map(|i| e.vector(i))
        .collect();
    Ok(Subspace::new(m.rows(), basis))
}

/// Decides strict positivity of a positive map through `T(𝟙) > 0`.
///
/// Positivity of the map itself is a caller precondition and is not checked.
pub fn strict_positivity_check(c: &ChoiMatrix, tol: f64) -> Result<SpCheck> {
    let image = c.apply_unchecked(&ComplexMatrix::identity(c.in_dim()));
    let e = hermitian_eig_tol(&image, tol.max(DEFAULT_TOL))?;
    let check = classify(&e, tol);
    let verdict = if check.is_pd() {
        SpVerdict::StrictlyPositive
    } else {
        let cutoff = tol * check.scale;
        let m = e.eigenvalues.iter().filter(|&&l| l <= cutoff).count();
        SpVerdict::NotStrictlyPositive { m }
    };
    Ok(SpCheck {
        verdict,
        min_eigenvalue: check.min_eigenvalue,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalKernel {
    pub kernel: Subspace,
    /// Whether `ker T(X)` matches `ker T(𝟙)` for every probe.
    pub consistent: bool,
    pub max_angle: f64,
}

/// `ker T(𝟙)` together with a check that every positive definite probe has the
/// same kernel under `T`.
pub fn universal_kernel(
    c: &ChoiMatrix,
    probes: &[ComplexMatrix],
    tol: f64,
) -> Result<UniversalKernel> {
    let n = c.in_dim();
    let kernel = kernel_of(&c.apply_unchecked(&ComplexMatrix::identity(n)), tol)?;
    let mut max_angle = 0.0_f64;
    for (index, x) in probes.iter().enumerate() {
        if x.shape() != (n, n) || !psd_check(x, tol).map(|p| p.is_pd()).unwrap_or(false) {
            return Err(Error::ProbeNotPd { index });
        }
        let k = kernel_of(&c.apply_unchecked(x), tol)?;
        max_angle = max_angle.max(max_principal_angle(&kernel, &k));
    }
    Ok(UniversalKernel {
        kernel,
        consistent: max_angle < KERNEL_ANGLE_TOL,
        max_angle,
    })
}

/// Unitary compression of a non-strictly-positive map.
#[derive(Clone, Debug, Serialize)]
pub struct BlockFormReport {
    pub m: usize,
    /// Columns `0..k−m` span the range of `T(𝟙)`; column `k−1−j` is `ψ_j`.
    #[serde(skip)]
    pub u: ComplexMatrix,
    /// Projection onto the range of `T(𝟙)`, of rank `k − m`.
    #[serde(skip)]
    pub pi: ComplexMatrix,
    pub kernel_basis: Subspace,
    /// Largest entry of the last `m` rows and columns of `U*T(E_ij)U` over
    /// all matrix units.
    pub block_residual: f64,
    /// `max_ij ‖πT(E_ij)π − T(E_ij)‖_F`
    pub compression_residual: f64,
}

impl BlockFormReport {
    /// Whether the image of every matrix unit lies in the `π` corner within
    /// `tol·max(1, ‖C‖_F)`.
    pub fn holds(&self, c: &ChoiMatrix, tol: f64) -> bool {
        let scale = c.matrix().frobenius_norm().max(1.0);
        self.block_residual <= tol * scale && self.compression_residual <= tol * scale
    }
}

/// Builds `U` with `U e_{k−1−j} = ψ_j` for an orthonormal basis `ψ` of
/// `ker T(𝟙)`, and the projection `π` onto its orthogonal complement.
pub fn block_form_decomposition(c: &ChoiMatrix, tol: f64) -> Result<BlockFormReport> {
    let (n, k) = (c.in_dim(), c.out_dim());
    let image = c.apply_unchecked(&ComplexMatrix::identity(n));
    let e = hermitian_eig_tol(&image, tol.max(DEFAULT_TOL))?;
    let cutoff = tol * e.spectral_norm().max(1.0);
    let kernel: Vec<Vec<Complex64>> = (0..k)
        .filter(|&i| e.eigenvalues[i] <= cutoff)
        .map(|i| e.vector(i))
        .collect();
    let m = kernel.len();
    if m == 0 {
        return Err(Error::IsStrictlyPositive);
    }
    let range: Vec<Vec<Complex64>> = (0..k)
        .filter(|&i| e.eigenvalues[i] > cutoff)
        .map(|i| e.vector(i))
        .collect();
    let mut columns = range.clone();
    columns.extend(kernel.iter().rev().cloned());
    let u = ComplexMatrix::from_columns(k, &columns);
    let pi = Subspace::new(k, range).projector();

    let u_adj = u.adjoint();
    let mut block_residual = 0.0_f64;
    let mut compression_residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let t = c.block(i, j);
            let rotated = &(&u_adj * &t) * &u;
            for r in 0..k {
                for s in 0..k {
                    if r >= k - m || s >= k - m {
                        block_residual = block_residual.max(rotated[(r, s)].norm());
                    }
                }
            }
            let compressed = &(&pi * &t) * &pi;
            compression_residual = compression_residual.max(compressed.distance(&t));
        }
    }
    Ok(BlockFormReport {
        m,
        u,
        pi,
        kernel_basis: Subspace::new(k, kernel),
        block_residual,
        compression_residual,
    })
}

/// `(1 − 1/m)·T + (1/m)·id`, a strictly positive map whenever `T` is positive.
pub fn sp_density_sequence(c: &ChoiMatrix, m: u32) -> Result<ChoiMatrix> {
    if c.in_dim() != c.out_dim() {
        return Err(Error::DimensionMismatch(format!(
            "mixing with the identity needs n = k, got n={} k={}",
            c.in_dim(),
            c.out_dim()
        )));
    }
    if m == 0 {
        return Err(Error::PreconditionViolated("sequence index must be ≥ 1".into()));
    }
    c.mix(&ChoiMatrix::identity(c.in_dim()), 1.0 / f64::from(m))
}
