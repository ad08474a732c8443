use serde::Serialize;

use crate::channels::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_tol, psd_check, ComplexMatrix};
use crate::vector::{transfer_matrix, StochasticMatrix, WeightVector};

/// Channel acting on diagonals by a column-stochastic matrix:
/// `|e_i⟩⟨e_j| ↦ δ_ij Σ_k M_ki |e_k⟩⟨e_k|`.
fn lift_stochastic(m: &StochasticMatrix) -> ChoiMatrix {
    let n = m.dim();
    ChoiMatrix::from_map(n, n, |x| {
        let diag: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|i| m.get(k, i) * x[(i, i)].re).sum())
            .collect();
        let imag: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|i| m.get(k, i) * x[(i, i)].im).sum())
            .collect();
        let entries: Vec<_> = diag
            .iter()
            .zip(&imag)
            .map(|(&re, &im)| num_complex::Complex64::new(re, im))
            .collect();
        ComplexMatrix::from_complex_diag(&entries)
    })
}

/// Lifts a d-stochastic matrix to a channel with `T(diag y) = diag(My)` and
/// `T(D) = D`. Off-diagonal entries are discarded.
pub fn lift_diagonal_channel(m: &StochasticMatrix, d: &WeightVector, tol: f64) -> Result<ChoiMatrix> {
    if m.dim() != d.len() {
        return Err(Error::LengthMismatch {
            left: m.dim(),
            right: d.len(),
        });
    }
    if m.min_entry() < -tol || m.column_sum_deviation() > tol {
        return Err(Error::NotDStochastic(format!(
            "min entry {:.3e}, column-sum deviation {:.3e}",
            m.min_entry(),
            m.column_sum_deviation()
        )));
    }
    let r = m.fixed_point_residual(d);
    if r > tol * d.sum().max(1.0) {
        return Err(Error::NotDStochastic(format!("‖Md − d‖∞ = {r:.3e}")));
    }
    Ok(lift_stochastic(m))
}

#[derive(Clone, Debug)]
pub struct ChannelConstruction {
    pub channel: ChoiMatrix,
    /// Column-stochastic `M` with `M·λ(B) = λ(A)` in the eigenbases.
    pub transfer: StochasticMatrix,
    /// Eigen-index of `B` whose eigenvector is routed to `ω`.
    pub omega_index: Option<usize>,
}

/// Channel `T` with `T(B) = A` for hermitian `A, B` with `tr A = tr B` and
/// `‖A‖₁ ≤ ‖B‖₁`.
///
/// With `A = U diag(x) U*`, `B = V diag(y) V*` and `My = x`, the channel is
/// `X ↦ U T̃(V*XV) U*` where `T̃` lifts `M`. If `B` is singular, `omega`
/// prescribes the image of the first kernel eigenvector of `B`.
pub fn construct_channel_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    omega: Option<&ComplexMatrix>,
    tol: f64,
) -> Result<ChannelConstruction> {
    let n = a.ensure_square()?;
    if b.shape() != (n, n) {
        return Err(Error::DimensionMismatch("A and B must have equal size".into()));
    }
    let ea = hermitian_eig_tol(a, tol)?;
    let eb = hermitian_eig_tol(b, tol)?;
    let m = transfer_matrix(&ea.eigenvalues, &eb.eigenvalues, tol)?;
    let mut tilde = lift_stochastic(&m);
    let (u, v) = (&ea.eigenvectors, &eb.eigenvectors);

    let mut omega_index = None;
    if let Some(w) = omega {
        if w.shape() != (n, n) {
            return Err(Error::DimensionMismatch("ω must match A".into()));
        }
        ensure_state(w, tol)?;
        let scale = eb.spectral_norm().max(1.0);
        let j = eb
            .eigenvalues
            .iter()
            .position(|y| y.abs() <= tol * scale)
            .ok_or_else(|| Error::PreconditionViolated("ω given but B is nonsingular".into()))?;
        // block (j, j) of T̃ is the image of |e_j⟩⟨e_j|; route it to U*ωU
        let mut cm = tilde.into_matrix();
        cm.set_submatrix(j * n, j * n, &(&(&u.adjoint() * w) * u));
        tilde = ChoiMatrix::new(n, n, cm)?;
        omega_index = Some(j);
    }

    Ok(ChannelConstruction {
        channel: tilde.conjugated(v, u),
        transfer: m,
        omega_index,
    })
}

fn ensure_state(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if rho.hermiticity_defect() > tol * rho.frobenius_norm().max(1.0) {
        return Err(Error::NotAState("not hermitian".into()));
    }
    let check = psd_check(&rho.hermitian_part(), tol)?;
    if !check.is_psd() {
        return Err(Error::NotAState(format!(
            "negative eigenvalue {:.3e}",
            check.min_eigenvalue
        )));
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > tol {
        return Err(Error::NotAState(format!("trace {tr}")));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct PureStateReport {
    /// `ρ ≺_D (eᵀd)|e_j⟩⟨e_j|`
    pub verdict: bool,
    /// Smallest eigenvalue of `D − d_j ρ`.
    pub min_eigenvalue: f64,
    #[serde(skip)]
    pub witness: Option<ChoiMatrix>,
}

/// Decides `ρ ≺_D (eᵀd)|e_j⟩⟨e_j|` through `D − d_j ρ ≥ 0` (`j` is 0-based).
///
/// The witness has block-diagonal Choi matrix with `ρ` in block `j` and
/// `ω = (D − d_j ρ)/(eᵀd − d_j)` in every other diagonal block.
pub fn pure_state_majorization(
    rho: &ComplexMatrix,
    j: usize,
    d: &WeightVector,
    tol: f64,
) -> Result<PureStateReport> {
    let n = d.len();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, dim: n });
    }
    if rho.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("ρ must be {n}x{n}")));
    }
    ensure_state(rho, tol)?;
    let rho = rho.hermitian_part();
    let dm = ComplexMatrix::from_diag(d.as_slice());
    let gap = &dm - &rho.scale(d[j]);
    let check = psd_check(&gap, tol)?;
    let witness = (check.is_psd()).then(|| {
        let rest = d.sum() - d[j];
        let omega = if rest > 0.0 { gap.scale(1.0 / rest) } else { rho.clone() };
        let mut c = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            let block = if i == j { &rho } else { &omega };
            c.set_submatrix(i * n, i * n, block);
        }
        ChoiMatrix::new(n, n, c).expect("Choi shape")
    });
    Ok(PureStateReport {
        verdict: check.is_psd(),
        min_eigenvalue: check.min_eigenvalue,
        witness,
    })
}

#[derive(Clone, Debug)]
pub struct MinMaxElements {
    /// `D`, the unique minimal element of its trace class.
    pub minimal: ComplexMatrix,
    /// `(eᵀd)|e_k⟩⟨e_k|` for every `k` with `d_k = min d`.
    pub maximal: Vec<ComplexMatrix>,
    pub maximal_indices: Vec<usize>,
    pub unique_max: bool,
}

/// Minimal and maximal elements of the D-majorization preorder among
/// positive matrices of trace `eᵀd`. Ties in `min d` are detected within
/// `tol·max d`.
pub fn minmax_elements(d: &WeightVector, tol: f64) -> MinMaxElements {
    let n = d.len();
    let lo = d.min();
    let hi = d.as_slice().iter().copied().fold(0.0, f64::max);
    let maximal_indices: Vec<usize> = (0..n).filter(|&k| d[k] - lo <= tol * hi).collect();
    let total = d.sum();
    let maximal = maximal_indices
        .iter()
        .map(|&k| ComplexMatrix::unit(n, k, k).scale(total))
        .collect();
    MinMaxElements {
        minimal: ComplexMatrix::from_diag(d.as_slice()),
        maximal,
        unique_max: maximal_indices.len() == 1,
        maximal_indices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_state, seeded_rng};

    fn verify_channel(c: &ChoiMatrix, b: &ComplexMatrix, a: &ComplexMatrix) {
        let scale = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
        assert!(c.is_cp(1e-9).unwrap().is_cp);
        assert!(c.tp_deviation() < 1e-10);
        assert!(c.apply(b).unwrap().distance(a) < 1e-9 * scale);
    }

    #[test]
    fn lift_identity_is_dephasing() {
        let d = WeightVector::new(vec![0.2, 0.8]).unwrap();
        let c = lift_diagonal_channel(&StochasticMatrix::identity(2), &d, 1e-12).unwrap();
        let x = ComplexMatrix::from_real(2, 2, &[0.3, 0.4, 0.4, 0.7]);
        assert!(c.apply(&x).unwrap().distance(&ComplexMatrix::from_diag(&[0.3, 0.7])) < 1e-15);
        let dm = ComplexMatrix::from_diag(d.as_slice());
        assert!(c.apply(&dm).unwrap().distance(&dm) < 1e-15);
    }

    #[test]
    fn lift_weight_projection() {
        let d = WeightVector::new(vec![1.0, 2.0, 1.0]).unwrap();
        let s = d.sum();
        let entries: Vec<f64> = (0..9).map(|k| d[k / 3] / s).collect();
        let m = StochasticMatrix::new(3, entries, Some(d.clone()), 1e-12).unwrap();
        let c = lift_diagonal_channel(&m, &d, 1e-12).unwrap();
        let x = ComplexMatrix::from_diag(&[0.5, -1.0, 3.0]);
        let expected = ComplexMatrix::from_diag(d.as_slice()).scale(2.5 / s);
        assert!(c.apply(&x).unwrap().distance(&expected) < 1e-14);
        assert!(c.is_cp(1e-12).unwrap().is_cp && c.is_tp(1e-12).is_tp);
        let swap = StochasticMatrix::new(3, vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0], None, 1e-12).unwrap();
        assert!(matches!(lift_diagonal_channel(&swap, &d, 1e-12), Err(Error::NotDStochastic(_))));
    }

    #[test]
    fn construction_examples() {
        let b = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let a = ComplexMatrix::from_diag(&[0.5, 0.5]);
        verify_channel(&construct_channel_pair(&a, &b, None, 1e-12).unwrap().channel, &b, &a);
        verify_channel(&construct_channel_pair(&b, &b, None, 1e-12).unwrap().channel, &b, &b);
    }

    #[test]
    fn construction_with_omega() {
        let b = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let a = ComplexMatrix::from_diag(&[0.5, 0.5]);
        let omega = ComplexMatrix::unit(2, 0, 0);
        let r = construct_channel_pair(&a, &b, Some(&omega), 1e-12).unwrap();
        verify_channel(&r.channel, &b, &a);
        let j = r.omega_index.unwrap();
        let psi = hermitian_eig_tol(&b, 1e-12).unwrap().vector(j);
        let out = r.channel.apply(&ComplexMatrix::ket_bra(&psi, &psi)).unwrap();
        assert!(out.distance(&omega) < 1e-12);
        assert!(matches!(
            construct_channel_pair(&a, &a, Some(&omega), 1e-12),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn random_constructions() {
        let mut rng = seeded_rng(40);
        for n in 2..=4 {
            for _ in 0..20 {
                let b = random_hermitian(n, &mut rng);
                // a pinched, rotated copy keeps trace and cannot grow the trace norm
                let u = crate::random::random_unitary(n, &mut rng);
                let pinch = ComplexMatrix::from_complex_diag(&b.diagonal());
                let a = pinch.conjugate_by(&u);
                verify_channel(&construct_channel_pair(&a, &b, None, 1e-9).unwrap().channel, &b, &a);
            }
        }
    }

    #[test]
    fn construction_preconditions() {
        let a = ComplexMatrix::from_diag(&[1.0, -1.0]);
        let b = ComplexMatrix::from_diag(&[0.5, -0.5]);
        assert!(matches!(construct_channel_pair(&a, &b, None, 1e-12), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn pure_state_examples() {
        let mut rng = seeded_rng(9);
        let uniform = WeightVector::uniform(3);
        for j in 0..3 {
            let rho = random_state(3, &mut rng);
            assert!(pure_state_majorization(&rho, j, &uniform, 1e-9).unwrap().verdict);
        }
        let d = WeightVector::new(vec![0.75, 0.25]).unwrap();
        let rho = ComplexMatrix::unit(2, 1, 1);
        let r = pure_state_majorization(&rho, 0, &d, 1e-9).unwrap();
        assert!(!r.verdict && r.witness.is_none());
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(matches!(
            pure_state_majorization(&rho, 2, &d, 1e-9),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert!(matches!(
            pure_state_majorization(&ComplexMatrix::identity(2), 0, &d, 1e-9),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn pure_state_witness_is_a_channel() {
        let mut rng = seeded_rng(10);
        let d = WeightVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let dm = ComplexMatrix::from_diag(d.as_slice());
        for _ in 0..20 {
            let rho = random_state(3, &mut rng);
            let r = pure_state_majorization(&rho, 2, &d, 1e-9).unwrap();
            assert!(r.verdict);
            let w = r.witness.unwrap();
            verify_channel(&w, &ComplexMatrix::unit(3, 2, 2), &rho);
            assert!(w.apply(&dm).unwrap().distance(&dm) < 1e-12);
        }
    }

    #[test]
    fn minmax_examples() {
        let r = minmax_elements(&WeightVector::new(vec![2.0, 1.0, 1.0]).unwrap(), 1e-12);
        assert_eq!(r.maximal_indices, vec![1, 2]);
        assert!(!r.unique_max);
        let r = minmax_elements(&WeightVector::new(vec![3.0, 2.0, 1.0]).unwrap(), 1e-12);
        assert!(r.unique_max);
        assert!(r.maximal[0].distance(&ComplexMatrix::unit(3, 2, 2).scale(6.0)) < 1e-15);
        assert!(r.minimal.distance(&ComplexMatrix::from_diag(&[3.0, 2.0, 1.0])) < 1e-15);
    }
}
