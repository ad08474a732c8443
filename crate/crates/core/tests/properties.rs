use dmaj_core::channels::{kernel_of, SpCheck};
use dmaj_core::linalg::{max_principal_angle, psd_project, trace_norm};
use dmaj_core::random::*;
use dmaj_core::vector::d_majorization_check;
use dmaj_core::*;
use proptest::prelude::*;
use rand::Rng;

fn sp(c: &ChoiMatrix) -> SpCheck {
    strict_positivity_check(c, 1e-9).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), n in 1usize..=16) {
        let mut rng = seeded_rng(seed);
        let m = random_hermitian(n, &mut rng).scale(rng.random_range(0.01..100.0));
        let e = hermitian_eig(&m).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(e.reconstruct().distance(&m) <= 1e-10 * scale);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn trace_norm_is_a_norm(seed in any::<u64>(), n in 1usize..=6, s in -5.0f64..5.0) {
        let mut rng = seeded_rng(seed);
        let a = ginibre(n, n, &mut rng);
        let b = ginibre(n, n, &mut rng);
        let (na, nb) = (trace_norm(&a).unwrap(), trace_norm(&b).unwrap());
        prop_assert!(trace_norm(&(&a + &b)).unwrap() <= na + nb + 1e-10 * (na + nb));
        prop_assert!((trace_norm(&a.scale(s)).unwrap() - s.abs() * na).abs() <= 1e-10 * na.max(1.0));
        let p = random_psd(n, &mut rng);
        let scale = p.frobenius_norm().max(1.0);
        prop_assert!((trace_norm(&p).unwrap() - p.trace().re).abs() <= 1e-12 * scale * n as f64);
    }

    #[test]
    fn psd_projection_is_idempotent(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = seeded_rng(seed);
        let m = random_hermitian(n, &mut rng);
        let p = psd_project(&m).unwrap();
        let pp = psd_project(&p).unwrap();
        prop_assert!(pp.distance(&p) <= 1e-10 * p.frobenius_norm().max(1.0));
        prop_assert!(psd_check(&p, 1e-9).unwrap().is_psd());
    }

    #[test]
    fn choi_kraus_round_trip(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=4, r in 1usize..=5) {
        let mut rng = seeded_rng(seed);
        let c = random_cp(n, k, r, &mut rng);
        let kraus = kraus_from_choi(&c, 1e-12).unwrap();
        let back = choi_from_map(|x| kraus.apply(x), n, k);
        let scale = c.matrix().frobenius_norm().max(1.0);
        prop_assert!(back.matrix().distance(c.matrix()) <= 1e-9 * scale);
    }

    #[test]
    fn kernel_is_universal(seed in any::<u64>(), k in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let m = rng.random_range(1..k);
        let (c, _) = random_non_sp_cptp(k, k, m, k, &mut rng);
        let probes: Vec<_> = (0..20).map(|_| random_pd(k, 0.05, &mut rng)).collect();
        let u = universal_kernel(&c, &probes, 1e-9).unwrap();
        prop_assert_eq!(u.kernel.rank(), m);
        prop_assert!(u.max_angle < 1e-7, "angle {}", u.max_angle);
    }

    #[test]
    fn channels_contract_trace_norm(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let c = random_cptp(n, k, n, &mut rng);
        let a = random_hermitian(n, &mut rng);
        let na = trace_norm(&a).unwrap();
        prop_assert!(trace_norm(&c.apply(&a).unwrap()).unwrap() <= na + 1e-9);
        let p = random_psd(n, &mut rng);
        let np = trace_norm(&p).unwrap();
        prop_assert!((trace_norm(&c.apply(&p).unwrap()).unwrap() - np).abs() <= 1e-9 * np.max(1.0));
    }

    #[test]
    fn strictly_positive_maps_compose(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let s = random_cptp(n, n, 2, &mut rng);
        let t = random_cptp(n, n, 2, &mut rng);
        prop_assume!(sp(&s).verdict.is_sp() && sp(&t).verdict.is_sp());
        prop_assert!(sp(&s.then(&t).unwrap()).verdict.is_sp());
    }

    #[test]
    fn non_sp_qubit_targets_are_pure(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let (c, _) = random_non_sp_cptp(n, 2, 1, n + 1, &mut rng);
        let block = block_form_decomposition(&c, 1e-9).unwrap();
        prop_assert_eq!(block.m, 1);
        let psi = block.u.column(0);
        let target = ComplexMatrix::ket_bra(&psi, &psi);
        let a = random_hermitian(n, &mut rng);
        let expected = target.scale(a.trace().re);
        prop_assert!(c.apply(&a).unwrap().distance(&expected) < 1e-8);
    }

    #[test]
    fn dual_ignores_the_kernel_corner(seed in any::<u64>(), n in 1usize..=3, k in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let m = rng.random_range(1..k);
        let (c, _) = random_non_sp_cptp(n, k, m, 2 * k, &mut rng);
        let block = block_form_decomposition(&c, 1e-9).unwrap();
        let b = random_hermitian(k, &mut rng);
        let dual = dual_map(&c);
        let compressed = &(&block.pi * &b) * &block.pi;
        prop_assert!(dual.apply(&compressed).unwrap().distance(&dual.apply(&b).unwrap()) < 1e-9);
    }

    #[test]
    fn non_sp_maps_are_far_from_identity(seed in any::<u64>(), k in 2usize..=4, factor in 0.2f64..3.0) {
        let mut rng = seeded_rng(seed);
        let m = rng.random_range(1..k);
        let (c, _) = random_non_sp_cptp(k, k, m, k, &mut rng);
        let budget = SearchBudget { samples: 200, seed, ..SearchBudget::default() };
        let d = distance_to_identity(&c, budget).unwrap();
        prop_assert!(d.lower >= 2.0 - 1e-6, "lower {}", d.lower);
        let scaled = ChoiMatrix::new(k, k, c.matrix().scale(factor)).unwrap();
        let d = distance_to_identity(&scaled, budget).unwrap();
        prop_assert!(d.lower >= 1.0 - 1e-6, "lower {}", d.lower);
        prop_assert!(d.upper >= d.lower);
    }
}

fn unit_sum(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|a| a / s).collect()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn finite_criteria_agree(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = seeded_rng(seed);
        let d = WeightVector::new(random_weights(n, &mut rng)).unwrap();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = if rng.random_bool(0.5) {
            random_d_stochastic(&d, &mut rng).apply(&y)
        } else {
            let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let shift = (y.iter().sum::<f64>() - x.iter().sum::<f64>()) / n as f64;
            x.iter_mut().for_each(|v| *v += shift);
            x
        };
        let r = d_majorization_check(&x, &y, &d, 1e-9).unwrap();
        prop_assert!(r.criteria_agree);
    }

    #[test]
    fn uniform_weights_reduce_to_classical(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = seeded_rng(seed);
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = if rng.random_bool(0.5) {
            random_d_stochastic(&WeightVector::uniform(n), &mut rng).apply(&y)
        } else {
            let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let shift = (y.iter().sum::<f64>() - x.iter().sum::<f64>()) / n as f64;
            x.iter_mut().for_each(|v| *v += shift);
            x
        };
        let classical = classical_majorization_check(&x, &y, 1e-9).unwrap();
        let weighted = d_majorization_check(&x, &y, &WeightVector::uniform(n), 1e-9).unwrap();
        prop_assert_eq!(classical, weighted.verdict);
    }

    #[test]
    fn transfer_matrix_is_a_witness(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = seeded_rng(seed);
        let y = unit_sum((0..n).map(|_| rng.random_range(0.0..1.0)).collect());
        let x = random_d_stochastic(&WeightVector::uniform(n), &mut rng).apply(&y);
        let m = transfer_matrix(&x, &y, 1e-9).unwrap();
        let image = m.apply(&y);
        let err = image.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
        prop_assert!(m.column_sum_deviation() <= 1e-12);
        prop_assert!(m.min_entry() >= -1e-12);
    }

    #[test]
    fn d_majorization_is_a_preorder(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = seeded_rng(seed);
        let d = WeightVector::new(random_weights(n, &mut rng)).unwrap();
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        prop_assert!(d_majorization_check(&z, &z, &d, 1e-9).unwrap().verdict);
        let (a1, a2) = (random_d_stochastic(&d, &mut rng), random_d_stochastic(&d, &mut rng));
        let y = a1.apply(&z);
        let x = a2.apply(&y);
        prop_assert!(d_majorization_check(&y, &z, &d, 1e-9).unwrap().verdict);
        prop_assert!(d_majorization_check(&x, &y, &d, 1e-9).unwrap().verdict);
        prop_assert!(d_majorization_check(&x, &z, &d, 1e-9).unwrap().verdict);
        let composed = a2.compose(&a1);
        prop_assert!(composed.min_entry() >= 0.0);
        prop_assert!(composed.column_sum_deviation() < 1e-12);
        prop_assert!(composed.fixed_point_residual(&d) < 1e-12);
        let image = composed.apply(&z);
        prop_assert!(image.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

fn feasible(a: &ComplexMatrix, b: &ComplexMatrix, d: &WeightVector) -> FeasibilityReport<ChoiMatrix> {
    let inst = DMajInstance::new(a.clone(), b.clone(), d.clone()).unwrap();
    d_maj_feasibility(&inst, &SolverParams::default()).unwrap()
}

fn in_class(t: &ChoiMatrix, d: &WeightVector, tol: f64) -> bool {
    let dm = ComplexMatrix::from_diag(d.as_slice());
    t.is_cp(tol).unwrap().is_cp
        && t.tp_deviation() < tol
        && t.apply(&dm).unwrap().distance(&dm) < tol * d.sum().max(1.0)
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn majorized_set_is_convex(seed in any::<u64>(), n in 2usize..=3, lambda in 0.0f64..1.0) {
        let mut rng = seeded_rng(seed);
        let d = WeightVector::new(random_weights(n, &mut rng)).unwrap();
        let c = random_hermitian(n, &mut rng);
        let a = random_d_channel(&d, 0.1, &mut rng).apply(&c).unwrap();
        let b = random_d_channel(&d, 0.1, &mut rng).apply(&c).unwrap();
        prop_assert_eq!(feasible(&a, &c, &d).verdict, Verdict::Feasible);
        prop_assert_eq!(feasible(&b, &c, &d).verdict, Verdict::Feasible);
        let mid = &a.scale(lambda) + &b.scale(1.0 - lambda);
        prop_assert_eq!(feasible(&mid, &c, &d).verdict, Verdict::Feasible);
    }

    #[test]
    fn witnesses_preserve_full_rank(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let d = WeightVector::new(random_weights(n, &mut rng)).unwrap();
        let rho = random_pd_state(n, 0.05, &mut rng);
        let a = random_d_channel(&d, 0.1, &mut rng).apply(&rho).unwrap();
        let r = feasible(&a, &rho, &d);
        prop_assert_eq!(r.verdict, Verdict::Feasible);
        let image = r.witness.unwrap().apply(&rho).unwrap();
        prop_assert!(psd_check(&image, 1e-9).unwrap().is_pd());
    }

    #[test]
    fn verdicts_are_unitarily_covariant(seed in any::<u64>(), contract in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let d = WeightVector::new(random_weights(2, &mut rng)).unwrap();
        let b0 = random_hermitian(2, &mut rng);
        let t = random_d_channel(&d, 0.2, &mut rng);
        let (a, b) = if contract { (t.apply(&b0).unwrap(), b0) } else { (b0.clone(), t.apply(&b0).unwrap()) };
        let base = qubit_check(&DMajInstance::new(a.clone(), b.clone(), d.clone()).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(base.verdict, contract);
        let u = random_unitary(2, &mut rng);
        let dm = ComplexMatrix::from_diag(d.as_slice());
        let rotated = DMajInstance::with_reference(
            a.conjugate_by(&u),
            b.conjugate_by(&u),
            &dm.conjugate_by(&u),
            1e-9,
        )
        .unwrap();
        prop_assert_eq!(qubit_check(&rotated, 1e-9).unwrap().verdict, base.verdict);
        let r = d_maj_feasibility(&rotated, &SolverParams::default()).unwrap();
        prop_assert_eq!(r.verdict == Verdict::Feasible, base.verdict);
    }

    #[test]
    fn closure_laws(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let d = WeightVector::new(random_weights(n, &mut rng)).unwrap();
        let c = random_hermitian(n, &mut rng);
        prop_assert_eq!(feasible(&c, &c, &d).verdict, Verdict::Feasible);
        let b = random_d_channel(&d, 0.1, &mut rng).apply(&c).unwrap();
        let a = random_d_channel(&d, 0.1, &mut rng).apply(&b).unwrap();
        let t1 = feasible(&b, &c, &d).witness.expect("B ≺ C");
        let t2 = feasible(&a, &b, &d).witness.expect("A ≺ B");
        let composed = t1.then(&t2).unwrap();
        prop_assert!(in_class(&composed, &d, 1e-7));
        let scale = c.frobenius_norm().max(1.0);
        prop_assert!(composed.apply(&c).unwrap().distance(&a) < 1e-7 * scale);
    }
}

#[test]
fn kernel_of_a_psd_matrix_matches_eigenvectors() {
    let mut rng = seeded_rng(99);
    let (c, proj) = random_non_sp_cptp(3, 3, 1, 3, &mut rng);
    let image = c.apply(&ComplexMatrix::identity(3)).unwrap();
    let k = kernel_of(&image, 1e-9).unwrap();
    let expected = dmaj_core::linalg::Subspace::new(3, vec![hermitian_eig(&proj).unwrap().vector(2)]);
    assert!(max_principal_angle(&k, &expected) < 1e-8);
}
