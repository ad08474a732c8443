use crate::channels::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_tol, ComplexMatrix};
use crate::vector::WeightVector;

/// The triple `(A, B, D)` with `D = diag(d)` in the working frame.
///
/// A non-diagonal reference `D = W diag(d) W*` is handled by storing `W` and
/// the conjugated matrices `W*AW`, `W*BW`; witnesses are mapped back with
/// [`DMajInstance::to_original_frame`].
#[derive(Clone, Debug)]
pub struct DMajInstance {
    a: ComplexMatrix,
    b: ComplexMatrix,
    d: WeightVector,
    frame: Option<ComplexMatrix>,
}

impl DMajInstance {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, d: WeightVector) -> Result<Self> {
        let n = d.len();
        for (name, m) in [("A", &a), ("B", &b)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{} but d has length {n}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            a,
            b,
            d,
            frame: None,
        })
    }

    /// Instance with an arbitrary positive definite reference `D`.
    pub fn with_reference(
        a: ComplexMatrix,
        b: ComplexMatrix,
        reference: &ComplexMatrix,
        tol: f64,
    ) -> Result<Self> {
        let e = hermitian_eig_tol(reference, tol)?;
        let d = WeightVector::new(e.eigenvalues.clone()).map_err(|_| Error::NotPsd {
            min_eigenvalue: e.min(),
        })?;
        let w = e.eigenvectors;
        let w_adj = w.adjoint();
        let rotate = |m: &ComplexMatrix| &(&w_adj * m) * &w;
        if a.shape() != reference.shape() || b.shape() != reference.shape() {
            return Err(Error::DimensionMismatch("A, B and D must have equal size".into()));
        }
        let mut inst = Self::new(rotate(&a), rotate(&b), d)?;
        inst.frame = Some(w);
        Ok(inst)
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn d(&self) -> &WeightVector {
        &self.d
    }

    pub fn d_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(self.d.as_slice())
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Unitary `W` of the diagonalizing frame, if the reference was not diagonal.
    pub fn frame(&self) -> Option<&ComplexMatrix> {
        self.frame.as_ref()
    }

    /// `max(1, ‖A‖_F, ‖B‖_F, ‖D‖_F)`
    pub fn scale(&self) -> f64 {
        let dn = self.d.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
        self.a
            .frobenius_norm()
            .max(self.b.frobenius_norm())
            .max(dn)
            .max(1.0)
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        for m in [&self.a, &self.b] {
            let defect = m.hermiticity_defect();
            if defect > tol * m.frobenius_norm().max(1.0) {
                return Err(Error::NonHermitianInput { defect });
            }
        }
        Ok(())
    }

    /// `D^{−1/2} M D^{−1/2}`
    pub fn whiten(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d = self.d.as_slice();
        ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] / (d[i] * d[j]).sqrt())
    }

    /// `M − t·D`
    pub fn shifted(&self, m: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let mut out = m.clone();
        for (i, &di) in self.d.as_slice().iter().enumerate() {
            out[(i, i)] -= t * di;
        }
        out
    }

    /// Maps a working-frame channel back to the frame the instance was given in.
    pub fn to_original_frame(&self, c: ChoiMatrix) -> ChoiMatrix {
        match &self.frame {
            Some(w) => c.conjugated(w, w),
            None => c,
        }
    }
}
