//! Seeded samplers for matrices, states and channels.
//!
//! Every sampler takes the RNG explicitly; [`seeded_rng`] gives the
//! deterministic ChaCha stream used throughout the crate.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{ChoiMatrix, KrausSet};
use crate::linalg::{hermitian_eig, normalize, vec_inner, ComplexMatrix};
use crate::matrix::lift_diagonal_channel;
use crate::vector::{StochasticMatrix, WeightVector};

pub type DetRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(n, n, rng).hermitian_part()
}

pub fn random_psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    &g * &g.adjoint()
}

/// Positive definite with spectrum bounded below by `floor`.
pub fn random_pd<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> ComplexMatrix {
    let p = random_psd(n, rng);
    &p + &ComplexMatrix::identity(n).scale(floor)
}

/// Full-rank density matrix (almost surely).
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let p = random_psd(n, rng);
    let t = p.trace().re;
    p.scale(1.0 / t)
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    normalize(&mut v);
    v
}

pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let v = random_unit_vector(n, rng);
    ComplexMatrix::ket_bra(&v, &v)
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = vec_inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        normalize(&mut v);
        cols.push(v);
    }
    ComplexMatrix::from_columns(n, &cols)
}

pub fn random_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.1..1.0)).collect()
}

/// Rescales Kraus operators so that `Σ KᵢKᵢ* = 𝟙ₙ`.
///
/// Panics if `Σ KᵢKᵢ*` is singular.
pub fn normalize_kraus_tp(ops: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    let n = ops[0].rows();
    let mut s = ComplexMatrix::zeros(n, n);
    for k in &ops {
        s = &s + &(k * &k.adjoint());
    }
    let e = hermitian_eig(&s).expect("Σ KK* is hermitian");
    assert!(e.min() > 0.0, "Σ KK* is singular");
    let inv_sqrt = e.apply_fn(|l| 1.0 / l.sqrt());
    ops.iter().map(|k| &inv_sqrt * k).collect()
}

/// Random channel `C^{n×n} → C^{k×k}` with `r` Kraus operators.
pub fn random_cptp<R: Rng + ?Sized>(n: usize, k: usize, r: usize, rng: &mut R) -> ChoiMatrix {
    let ops = (0..r).map(|_| ginibre(n, k, rng)).collect();
    KrausSet::new(normalize_kraus_tp(ops))
        .expect("non-empty Kraus set")
        .to_choi()
}

/// Random channel whose Kraus operators all annihilate an `m`-dimensional
/// random subspace of `C^k`, so that `T(𝟙)` has an `m`-dimensional kernel.
///
/// Needs `r·(k − m) ≥ n` for the trace-preserving normalization to exist.
pub fn random_non_sp_cptp<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    r: usize,
    rng: &mut R,
) -> (ChoiMatrix, ComplexMatrix) {
    assert!(m >= 1 && m < k, "need 1 ≤ m < k");
    let u = random_unitary(k, rng);
    let kernel: Vec<Vec<Complex64>> = (0..m).map(|j| u.column(j)).collect();
    let mut proj_kernel = ComplexMatrix::zeros(k, k);
    for v in &kernel {
        proj_kernel = &proj_kernel + &ComplexMatrix::ket_bra(v, v);
    }
    let q = &ComplexMatrix::identity(k) - &proj_kernel;
    let ops = (0..r).map(|_| &ginibre(n, k, rng) * &q).collect();
    let choi = KrausSet::new(normalize_kraus_tp(ops))
        .expect("non-empty Kraus set")
        .to_choi();
    (choi, proj_kernel)
}

/// Random completely positive (not trace-preserving) map.
pub fn random_cp<R: Rng + ?Sized>(n: usize, k: usize, r: usize, rng: &mut R) -> ChoiMatrix {
    let ops = (0..r).map(|_| ginibre(n, k, rng)).collect();
    KrausSet::new(ops).expect("non-empty Kraus set").to_choi()
}

/// Random PD matrix whose eigenvalues are at least `floor`, rescaled to unit trace.
pub fn random_pd_state<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> ComplexMatrix {
    let p = random_pd(n, floor, rng);
    let t = p.trace().re;
    p.scale(1.0 / t)
}

/// Random d-stochastic matrix: a Sinkhorn-balanced coupling `P` of `d` with
/// itself, returned as `A_ij = P_ij / d_j`.
pub fn random_d_stochastic<R: Rng + ?Sized>(d: &WeightVector, rng: &mut R) -> StochasticMatrix {
    let n = d.len();
    let dv = d.as_slice();
    let mut p: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.05..1.0)).collect();
    for _ in 0..10_000 {
        for i in 0..n {
            let s: f64 = p[i * n..(i + 1) * n].iter().sum();
            p[i * n..(i + 1) * n].iter_mut().for_each(|v| *v *= dv[i] / s);
        }
        for j in 0..n {
            let s: f64 = (0..n).map(|i| p[i * n + j]).sum();
            (0..n).for_each(|i| p[i * n + j] *= dv[j] / s);
        }
        let worst = (0..n)
            .map(|i| (p[i * n..(i + 1) * n].iter().sum::<f64>() - dv[i]).abs())
            .fold(0.0, f64::max);
        if worst < 1e-15 * d.sum() {
            break;
        }
    }
    let a = (0..n * n).map(|k| p[k] / dv[k % n]).collect();
    StochasticMatrix::from_parts(n, a).with_fixed_vector(d.clone())
}

/// Random channel fixing `diag(d)`: a convex mixture of a diagonal phase
/// rotation, the lift of a random d-stochastic matrix and the trace
/// projection onto `diag(d)/eᵀd`. The last weight is at least `min_collapse`.
pub fn random_d_channel<R: Rng + ?Sized>(d: &WeightVector, min_collapse: f64, rng: &mut R) -> ChoiMatrix {
    let n = d.len();
    let phases: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    let u = ComplexMatrix::from_complex_diag(&phases);
    let rotation = ChoiMatrix::identity(n).conjugated(&u, &ComplexMatrix::identity(n));
    let lift = lift_diagonal_channel(&random_d_stochastic(d, rng), d, 1e-9)
        .expect("Sinkhorn output is d-stochastic");
    let rho = ComplexMatrix::from_diag(d.as_slice()).scale(1.0 / d.sum());
    let collapse = ChoiMatrix::trace_projection(n, &rho);
    let w_lift: f64 = rng.random_range(0.0..1.0);
    let w_collapse = min_collapse + (1.0 - min_collapse) * rng.random_range(0.0..0.5);
    rotation
        .mix(&lift, w_lift)
        .and_then(|c| c.mix(&collapse, w_collapse))
        .expect("equal shapes")
}
