use num_complex::Complex64;
use serde::Serialize;

use super::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, normalize, trace_norm, vec_norm, ComplexMatrix};
use crate::random::{random_unit_vector, seeded_rng};

/// Pure-state search effort for [`distance_to_identity`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchBudget {
    pub samples: usize,
    pub starts: usize,
    pub steps: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            samples: 2000,
            starts: 10,
            steps: 50,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceEstimate {
    /// `max_ψ ‖T(|ψ⟩⟨ψ|) − |ψ⟩⟨ψ|‖₁` over the searched states.
    pub lower: f64,
    /// `‖T‖₁→₁ + 1` with a rigorous bound on the induced norm of `T`.
    pub upper: f64,
    #[serde(serialize_with = "serialize_vec")]
    pub best_state: Vec<Complex64>,
}

fn serialize_vec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

struct Objective<'a> {
    map: &'a ChoiMatrix,
    dual: ChoiMatrix,
}

impl Objective<'_> {
    fn delta(&self, psi: &[Complex64]) -> ComplexMatrix {
        let p = ComplexMatrix::ket_bra(psi, psi);
        &self.map.apply_unchecked(&p) - &p
    }

    fn value(&self, psi: &[Complex64]) -> f64 {
        trace_norm(&self.delta(psi).hermitian_part()).unwrap_or(0.0)
    }

    /// Value and ascent direction `(T*(S) − S)ψ` with `S = sign(Δ)`.
    fn value_and_gradient(&self, psi: &[Complex64]) -> (f64, Vec<Complex64>) {
        let delta = self.delta(psi).hermitian_part();
        let Ok(e) = hermitian_eig(&delta) else {
            return (0.0, vec![Complex64::new(0.0, 0.0); psi.len()]);
        };
        let value = e.eigenvalues.iter().map(|l| l.abs()).sum();
        let sign = e.apply_fn(f64::signum);
        let g = &self.dual.apply_unchecked(&sign) - &sign;
        (value, g.matvec(psi))
    }
}

/// Estimates the induced trace-norm distance `‖T − id‖` between a
/// hermiticity-preserving map on `n×n` matrices and the identity.
///
/// The lower estimate maximizes over pure inputs: basis vectors, eigenvectors
/// of `T(𝟙)` and seeded random states seed a projected gradient ascent.
pub fn distance_to_identity(c: &ChoiMatrix, budget: SearchBudget) -> Result<DistanceEstimate> {
    let n = c.in_dim();
    if c.out_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "distance to the identity needs n = k, got n={n} k={}",
            c.out_dim()
        )));
    }
    let f = Objective {
        map: c,
        dual: c.dual(),
    };

    let mut candidates: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    let image = c.apply_unchecked(&ComplexMatrix::identity(n)).hermitian_part();
    if let Ok(e) = hermitian_eig(&image) {
        candidates.extend((0..n).map(|i| e.vector(i)));
    }
    let mut rng = seeded_rng(budget.seed);
    candidates.extend((0..budget.samples).map(|_| random_unit_vector(n, &mut rng)));

    let mut scored: Vec<(f64, Vec<Complex64>)> =
        candidates.into_iter().map(|v| (f.value(&v), v)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(budget.starts.max(1));

    let mut best = scored[0].clone();
    for (mut value, mut psi) in scored {
        let mut step = 0.5;
        for _ in 0..budget.steps {
            let (_, grad) = f.value_and_gradient(&psi);
            if vec_norm(&grad) < 1e-14 {
                break;
            }
            let mut improved = false;
            while step > 1e-10 {
                let mut trial: Vec<Complex64> =
                    psi.iter().zip(&grad).map(|(p, g)| p + g * step).collect();
                normalize(&mut trial);
                let v = f.value(&trial);
                if v > value {
                    value = v;
                    psi = trial;
                    step *= 2.0;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if value > best.0 {
            best = (value, psi);
        }
    }

    Ok(DistanceEstimate {
        lower: best.0,
        // relative allowance for rounding in the eigenvalue bound
        upper: (induced_norm_bound(c) + 1.0) * (1.0 + 1e-12),
        best_state: best.1,
    })
}

/// Upper bound on `sup ‖T(X)‖₁/‖X‖₁`.
///
/// For completely positive maps this is `‖T*(𝟙)‖∞`. Otherwise it falls back
/// to `Σ_ij ‖T(E_ij)‖₁`, valid because `|X_ij| ≤ ‖X‖₁`.
fn induced_norm_bound(c: &ChoiMatrix) -> f64 {
    let cp = c.is_cp(crate::DEFAULT_TOL).map(|d| d.is_cp).unwrap_or(false);
    if cp {
        let unit = c.dual().apply_unchecked(&ComplexMatrix::identity(c.out_dim()));
        if let Ok(e) = hermitian_eig(&unit.hermitian_part()) {
            return e.max().max(0.0);
        }
    }
    let n = c.in_dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += trace_norm(&c.block(i, j)).unwrap_or(f64::INFINITY);
        }
    }
    total
}
