use num_complex::Complex64;
use serde::Serialize;

use super::eig::hermitian_eig;
use super::matrix::{vec_inner, ComplexMatrix};

/// Subspace of `C^dim` given by an orthonormal basis.
#[derive(Clone, Debug, Serialize)]
pub struct Subspace {
    pub dim: usize,
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Vec<Vec<Complex64>>,
}

fn serialize_basis<S: serde::Serializer>(
    basis: &[Vec<Complex64>],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(basis.len()))?;
    for v in basis {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        seq.serialize_element(&pairs)?;
    }
    seq.end()
}

impl Subspace {
    pub fn new(dim: usize, basis: Vec<Vec<Complex64>>) -> Self {
        Self { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.dim, self.dim);
        for v in &self.basis {
            p = &p + &ComplexMatrix::ket_bra(v, v);
        }
        p
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &[Complex64]) -> f64 {
        let mut r = v.to_vec();
        for b in &self.basis {
            let c = vec_inner(b, v);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Largest principal angle between two subspaces of equal rank, in radians.
///
/// Returns `π/2` when the ranks differ.
pub fn max_principal_angle(a: &Subspace, b: &Subspace) -> f64 {
    if a.rank() != b.rank() || a.dim != b.dim {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.is_zero() {
        return 0.0;
    }
    // Columns of R = (I − P_a) B; sin θ_max = ‖R‖₂.
    let pa = a.projector();
    let bm = ComplexMatrix::from_columns(b.dim, &b.basis);
    let r = &bm - &(&pa * &bm);
    let gram = &r.adjoint() * &r;
    let s2 = hermitian_eig(&gram).map(|e| e.max()).unwrap_or(1.0);
    s2.max(0.0).sqrt().min(1.0).asin()
}
