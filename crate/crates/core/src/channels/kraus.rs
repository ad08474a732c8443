use num_complex::Complex64;

use super::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{classify, hermitian_eig_tol, ComplexMatrix, Subspace};
use crate::DEFAULT_TOL;

/// Kraus operators `Kᵢ ∈ C^{n×k}` of a completely positive map.
///
/// Convention: `T(A) = Σᵢ Kᵢ* A Kᵢ`. Hence `T(𝟙) = Σᵢ Kᵢ*Kᵢ` and the map is
/// trace-preserving iff `Σᵢ KᵢKᵢ* = 𝟙ₙ`. Most references use the adjoint
/// convention `Σ KᵢAKᵢ*`; convert with [`KrausSet::adjoints`].
#[derive(Clone, Debug)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyKrausSet)?;
        let shape = first.shape();
        if let Some(bad) = operators.iter().find(|k| k.shape() != shape) {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", shape.0, shape.1),
                found: format!("{}x{}", bad.rows(), bad.cols()),
            });
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn in_dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn out_dim(&self) -> usize {
        self.operators[0].cols()
    }

    /// Operators for the `Σ LᵢAL ᵢ*` convention (`Lᵢ = Kᵢ*`).
    pub fn adjoints(&self) -> Vec<ComplexMatrix> {
        self.operators.iter().map(ComplexMatrix::adjoint).collect()
    }

    pub fn apply(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let k = self.out_dim();
        self.operators.iter().fold(ComplexMatrix::zeros(k, k), |acc, op| {
            &acc + &(&(&op.adjoint() * a) * op)
        })
    }

    /// `Σᵢ Kᵢ*Kᵢ = T(𝟙)`
    pub fn image_of_identity(&self) -> ComplexMatrix {
        let k = self.out_dim();
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(k, k), |acc, op| &acc + &(&op.adjoint() * op))
    }

    /// `Σᵢ KᵢKᵢ*`, which equals `𝟙ₙ` iff the map is trace-preserving.
    pub fn trace_gram(&self) -> ComplexMatrix {
        let n = self.in_dim();
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, op| &acc + &(op * &op.adjoint()))
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        let (n, k) = (self.in_dim(), self.out_dim());
        let size = n * k;
        let mut m = ComplexMatrix::zeros(size, size);
        // C[(i,a),(j,b)] = Σ conj(K_ia) K_jb
        for op in &self.operators {
            let v: Vec<Complex64> = op.as_slice().iter().map(|z| z.conj()).collect();
            for r in 0..size {
                for c in 0..size {
                    m[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        ChoiMatrix::new(n, k, m).expect("Choi shape from Kraus shape")
    }
}

/// Kraus operators from the Choi spectrum: one operator per eigenvalue above
/// `tol·scale`, each the reshaped scaled eigenvector.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: f64) -> Result<KrausSet> {
    let e = hermitian_eig_tol(c.matrix(), tol.max(DEFAULT_TOL))?;
    let check = classify(&e, tol);
    if !check.is_psd() {
        return Err(Error::NotCp {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    let (n, k) = (c.in_dim(), c.out_dim());
    let cutoff = tol * check.scale;
    let mut ops = Vec::new();
    for (idx, &lambda) in e.eigenvalues.iter().enumerate().rev() {
        if lambda <= cutoff {
            continue;
        }
        let s = lambda.sqrt();
        let v = e.vector(idx);
        // K_ia = conj(√λ · v_(i,a))
        ops.push(ComplexMatrix::from_fn(n, k, |i, a| (v[i * k + a] * s).conj()));
    }
    if ops.is_empty() {
        // the zero map
        ops.push(ComplexMatrix::zeros(n, k));
    }
    KrausSet::new(ops)
}

/// `∩ᵢ ker Kᵢ`, computed as the kernel of `T(𝟙) = Σ Kᵢ*Kᵢ`.
pub fn kraus_kernel_intersection(kraus: &KrausSet, tol: f64) -> Result<Subspace> {
    if kraus.is_empty() {
        return Err(Error::EmptyKrausSet);
    }
    super::positivity::kernel_of(&kraus.image_of_identity(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::random::{random_cp, random_cptp, seeded_rng};

    #[test]
    fn identity_has_single_kraus_operator() {
        let k = kraus_from_choi(&ChoiMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(k.len(), 1);
        // K = e^{iθ}𝟙
        let op = &k.operators()[0];
        let phase = op[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(op.distance(&ComplexMatrix::identity(3).scale_complex(phase)) < 1e-12);
    }

    #[test]
    fn trace_projection_kraus_operators_are_rank_one() {
        let c = ChoiMatrix::trace_projection(2, &ComplexMatrix::unit(2, 0, 0));
        let k = kraus_from_choi(&c, DEFAULT_TOL).unwrap();
        assert_eq!(k.len(), 2);
        for op in k.operators() {
            let e = crate::linalg::hermitian_eig(&(&op.adjoint() * op)).unwrap();
            assert_eq!(e.eigenvalues.iter().filter(|l| **l > 1e-12).count(), 1);
        }
    }

    #[test]
    fn b4_has_two_kraus_operators() {
        let k = kraus_from_choi(&catalog::example_b4(), DEFAULT_TOL).unwrap();
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn round_trip_random_cp_maps() {
        let mut rng = seeded_rng(21);
        for n in 1..=4 {
            for k in 1..=4 {
                let c = random_cp(n, k, 3, &mut rng);
                let ks = kraus_from_choi(&c, DEFAULT_TOL).unwrap();
                let back = ChoiMatrix::from_map(n, k, |a| ks.apply(a));
                let scale = c.matrix().frobenius_norm().max(1.0);
                assert!(back.matrix().distance(c.matrix()) <= 1e-9 * scale);
                assert!(ks.to_choi().matrix().distance(c.matrix()) <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn tp_convention() {
        let mut rng = seeded_rng(8);
        let c = random_cptp(3, 2, 4, &mut rng);
        let ks = kraus_from_choi(&c, DEFAULT_TOL).unwrap();
        assert!(ks.trace_gram().distance(&ComplexMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn not_cp_is_rejected() {
        assert!(matches!(
            kraus_from_choi(&catalog::transposition(2), DEFAULT_TOL),
            Err(Error::NotCp { .. })
        ));
        assert!(matches!(KrausSet::new(vec![]), Err(Error::EmptyKrausSet)));
    }
}
