use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{psd_check, ComplexMatrix, Definiteness};

/// Choi matrix of a linear map `T: C^{n×n} → C^{k×k}`.
///
/// Stored as an `n×n` grid of `k×k` blocks with block `(i, j)` equal to
/// `T(|e_i⟩⟨e_j|)`, so `T(A) = Σ_{ij} A_ij · block(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    in_dim: usize,
    out_dim: usize,
    matrix: ComplexMatrix,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CpDiagnostics {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
    pub class: Definiteness,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TpDiagnostics {
    pub is_tp: bool,
    /// `max_{ij} |tr T(|e_i⟩⟨e_j|) − δ_ij|`
    pub max_deviation: f64,
}

impl ChoiMatrix {
    pub fn new(in_dim: usize, out_dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let size = in_dim * out_dim;
        if matrix.shape() != (size, size) {
            return Err(Error::ShapeMismatch {
                expected: format!("{size}x{size} Choi matrix for n={in_dim}, k={out_dim}"),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Self {
            in_dim,
            out_dim,
            matrix,
        })
    }

    /// Square Choi matrix with `n = k = √size`.
    pub fn square(matrix: ComplexMatrix) -> Result<Self> {
        let size = matrix.ensure_square()?;
        let n = (size as f64).sqrt().round() as usize;
        if n * n != size {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix of size {size} is not n²·n² for any n"
            )));
        }
        Self::new(n, n, matrix)
    }

    /// Tabulates `apply` on the matrix units. The caller guarantees linearity.
    pub fn from_map(n: usize, k: usize, apply: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let mut matrix = ComplexMatrix::zeros(n * k, n * k);
        for i in 0..n {
            for j in 0..n {
                let block = apply(&ComplexMatrix::unit(n, i, j));
                assert_eq!(block.shape(), (k, k), "map output has the wrong shape");
                matrix.set_submatrix(i * k, j * k, &block);
            }
        }
        Self {
            in_dim: n,
            out_dim: k,
            matrix,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_map(n, n, ComplexMatrix::clone)
    }

    /// `X ↦ tr(X)·ρ`
    pub fn trace_projection(n: usize, rho: &ComplexMatrix) -> Self {
        let k = rho.rows();
        Self::from_map(n, k, |x| rho.scale_complex(x.trace()))
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `T(|e_i⟩⟨e_j|)`
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let k = self.out_dim;
        self.matrix.submatrix(i * k, j * k, k, k)
    }

    /// `T(A) = Σ_{ij} A_ij · block(i, j)`.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0} input", self.in_dim),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        Ok(self.apply_unchecked(a))
    }

    pub(crate) fn apply_unchecked(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let (n, k) = (self.in_dim, self.out_dim);
        let size = n * k;
        let c = self.matrix.as_slice();
        let mut out = ComplexMatrix::zeros(k, k);
        let dst = out.as_mut_slice();
        for i in 0..n {
            for j in 0..n {
                let aij = a[(i, j)];
                if aij == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..k {
                    let row = &c[(i * k + r) * size + j * k..(i * k + r) * size + j * k + k];
                    for (d, z) in dst[r * k..(r + 1) * k].iter_mut().zip(row) {
                        *d += aij * z;
                    }
                }
            }
        }
        out
    }

    /// Complete positivity via the Choi spectrum.
    pub fn is_cp(&self, tol: f64) -> Result<CpDiagnostics> {
        let check = psd_check(&self.matrix, tol)?;
        Ok(CpDiagnostics {
            is_cp: check.is_psd(),
            min_eigenvalue: check.min_eigenvalue,
            class: check.class,
        })
    }

    /// Trace preservation via `tr T(|e_i⟩⟨e_j|) = δ_ij`, compared absolutely.
    pub fn is_tp(&self, tol: f64) -> TpDiagnostics {
        let max_deviation = self.tp_deviation();
        TpDiagnostics {
            is_tp: max_deviation <= tol,
            max_deviation,
        }
    }

    pub fn tp_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.in_dim {
            for j in 0..self.in_dim {
                let t = self.block(i, j).trace();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((t - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Choi matrix of the dual map `T*`, defined by `tr(T(A)B) = tr(A T*(B))`.
    pub fn dual(&self) -> ChoiMatrix {
        let (n, k) = (self.in_dim, self.out_dim);
        // T*(|e_a⟩⟨e_b|)_{ji} = T(|e_i⟩⟨e_j|)_{ba}
        let m = ComplexMatrix::from_fn(n * k, n * k, |r, c| {
            let (a, j) = (r / n, r % n);
            let (b, i) = (c / n, c % n);
            self.matrix[(i * k + b, j * k + a)]
        });
        ChoiMatrix {
            in_dim: k,
            out_dim: n,
            matrix: m,
        }
    }

    /// Choi matrix of `other ∘ self`.
    pub fn then(&self, other: &ChoiMatrix) -> Result<ChoiMatrix> {
        if other.in_dim != self.out_dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose maps with output {} and input {}",
                self.out_dim, other.in_dim
            )));
        }
        Ok(Self::from_map(self.in_dim, other.out_dim, |x| {
            other.apply_unchecked(&self.apply_unchecked(x))
        }))
    }

    /// Choi matrix of `X ↦ U_out · T(U_in* X U_in) · U_out*`.
    pub fn conjugated(&self, u_in: &ComplexMatrix, u_out: &ComplexMatrix) -> ChoiMatrix {
        let u_in_adj = u_in.adjoint();
        Self::from_map(self.in_dim, self.out_dim, |x| {
            self.apply_unchecked(&(&(&u_in_adj * x) * u_in))
                .conjugate_by(u_out)
        })
    }

    /// `(1 − w)·self + w·other`
    pub fn mix(&self, other: &ChoiMatrix, w: f64) -> Result<ChoiMatrix> {
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim) {
            return Err(Error::DimensionMismatch("maps of different shape".into()));
        }
        Ok(ChoiMatrix {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            matrix: &self.matrix.scale(1.0 - w) + &other.matrix.scale(w),
        })
    }
}

/// Tabulates `apply` into a Choi matrix.
pub fn choi_from_map(
    apply: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    n: usize,
    k: usize,
) -> ChoiMatrix {
    ChoiMatrix::from_map(n, k, apply)
}

pub fn apply_choi(c: &ChoiMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    c.apply(a)
}

pub fn dual_map(c: &ChoiMatrix) -> ChoiMatrix {
    c.dual()
}
