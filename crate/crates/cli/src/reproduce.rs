//! Regenerates the worked examples as named reports.

use std::thread;

use dmaj_core::catalog;
use dmaj_core::channels::kernel_of;
use dmaj_core::random::{random_hermitian, seeded_rng};
use dmaj_core::{
    block_form_decomposition, d_maj_feasibility, distance_to_identity, dual_map, hermitian_eig,
    iterate_majorization, matrix_convex_necessary_check, strict_positivity_check,
    trace_norm_curve_check, ChoiMatrix, ComplexMatrix, DMajInstance, SearchBudget, SpVerdict,
    Verdict, WeightVector,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{Settings, ITERATION_CLOSED_FORM_TOL, ITERATION_RATIO_TOL};
use crate::io::{CliError, CliResult};

pub const CASES: [&str; 7] = [
    "example-b1",
    "example-b2",
    "example-b3",
    "example-b4",
    "example-b5",
    "heinosaari",
    "iteration",
];

/// Tolerances of the regression checks.
const SPECTRUM_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-12;
const DISTANCE_TOL: f64 = 1e-6;
const CURVE_MARGIN_TOL: f64 = 1e-10;
const PLATEAU_MIN: f64 = 1e-4;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub settings: Settings,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, value: Value) {
        self.0.push(Check {
            name: name.into(),
            passed,
            value,
        });
    }
}

fn rank(m: &ComplexMatrix, tol: f64) -> CliResult<usize> {
    let e = hermitian_eig(&m.hermitian_part())?;
    let cutoff = tol * e.spectral_norm().max(1.0);
    Ok(e.eigenvalues.iter().filter(|l| l.abs() > cutoff).count())
}

/// Matrix of `T` acting on row-major vectorized inputs.
fn superoperator(c: &ChoiMatrix) -> ComplexMatrix {
    let (n, k) = (c.in_dim(), c.out_dim());
    ComplexMatrix::from_fn(k * k, n * n, |row, col| c.block(col / n, col % n)[(row / k, row % k)])
}

/// Orthonormal basis of `{X : T(X) = X}` for a map with `n = k`.
fn fixed_space(c: &ChoiMatrix, tol: f64) -> CliResult<Vec<ComplexMatrix>> {
    let n = c.in_dim();
    let l = &superoperator(c) - &ComplexMatrix::identity(n * n);
    let gram = &l.adjoint() * &l;
    let kernel = kernel_of(&gram, tol)?;
    Ok(kernel
        .basis
        .iter()
        .map(|v| ComplexMatrix::try_new(n, n, v.clone()).expect("n² entries"))
        .collect())
}

fn cptp_checks(checks: &mut Checks, c: &ChoiMatrix, tol: f64) -> CliResult<()> {
    let cp = c.is_cp(tol)?;
    checks.push("completely_positive", cp.is_cp, json!(cp.min_eigenvalue));
    let tp = c.tp_deviation();
    checks.push("trace_preserving", tp <= tol, json!(tp));
    Ok(())
}

fn sp_check(checks: &mut Checks, c: &ChoiMatrix, expected: SpVerdict, tol: f64) -> CliResult<()> {
    let sp = strict_positivity_check(c, tol)?;
    checks.push(
        "strict_positivity",
        sp.verdict == expected,
        json!({ "verdict": sp.verdict, "min_eigenvalue": sp.min_eigenvalue }),
    );
    Ok(())
}

fn example_b1(checks: &mut Checks, s: &Settings) -> CliResult<()> {
    let c = catalog::example_b1();
    cptp_checks(checks, &c, s.tol)?;
    sp_check(checks, &c, SpVerdict::StrictlyPositive, s.tol)?;
    let fixed = fixed_space(&c, s.tol)?;
    let ranks: Vec<usize> = fixed.iter().map(|f| rank(f, s.tol)).collect::<CliResult<_>>()?;
    let e11 = ComplexMatrix::unit(2, 0, 0);
    let aligned = fixed.len() == 1 && (fixed[0][(0, 0)].norm() - 1.0).abs() <= EXACT_TOL;
    checks.push(
        "fixed_points_rank_one",
        aligned && ranks == [1],
        json!({ "dimension": fixed.len(), "ranks": ranks }),
    );
    let image = c.apply(&e11)?;
    checks.push("e11_is_fixed", image.distance(&e11) <= EXACT_TOL, json!(image.distance(&e11)));
    Ok(())
}

fn example_b2(checks: &mut Checks, s: &Settings) -> CliResult<()> {
    let c = catalog::example_b2();
    cptp_checks(checks, &c, s.tol)?;
    sp_check(checks, &c, SpVerdict::StrictlyPositive, s.tol)?;
    let d = ComplexMatrix::from_diag(&[2.0, 1.0, 1.0]);
    let err = c.apply(&d)?.distance(&d);
    checks.push("fixed_point_diag_2_1_1", err <= EXACT_TOL, json!(err));
    let r1 = rank(&c.apply(&ComplexMatrix::unit(3, 0, 0))?, s.tol)?;
    checks.push("rank_raised_1_to_2", r1 == 2, json!(r1));
    let p23 = &ComplexMatrix::unit(3, 1, 1) + &ComplexMatrix::unit(3, 2, 2);
    let r23 = rank(&c.apply(&p23)?, s.tol)?;
    checks.push("rank_lowered_2_to_1", r23 == 1, json!(r23));
    Ok(())
}

fn example_b3(checks: &mut Checks, s: &Settings) -> CliResult<()> {
    let e11 = ComplexMatrix::unit(2, 0, 0);
    let mut rows = Vec::new();
    let mut all = true;
    for m in 1..=10u32 {
        let c = catalog::example_b3(m);
        let tp = c.tp_deviation();
        let min_eig = hermitian_eig(&c.apply(&e11)?)?.min();
        let expected = -1.0 / f64::from(m);
        let ok = tp <= s.tol && min_eig < 0.0 && (min_eig - expected).abs() <= EXACT_TOL;
        all &= ok;
        let dist = c.matrix().distance(ChoiMatrix::identity(2).matrix());
        rows.push(json!({
            "m": m,
            "tp_deviation": tp,
            "min_eigenvalue_of_image_of_e11": min_eig,
            "choi_distance_to_identity": dist,
        }));
    }
    checks.push("trace_preserving_not_positive", all, Value::Array(rows));
    Ok(())
}

fn example_b4(checks: &mut Checks, s: &Settings) -> CliResult<()> {
    let c = catalog::example_b4();
    cptp_checks(checks, &c, s.tol)?;
    sp_check(checks, &c, SpVerdict::NotStrictlyPositive { m: 1 }, s.tol)?;
    let spectrum = hermitian_eig(c.matrix())?.eigenvalues;
    let mut expected = vec![0.0; 7];
    expected.extend([1.0, 2.0]);
    let err = spectrum
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push(
        "choi_spectrum_2_1_0x7",
        err <= SPECTRUM_TOL,
        json!({ "spectrum": spectrum, "max_error": err }),
    );
    let images: Vec<ComplexMatrix> = (0..3)
        .map(|i| c.apply(&ComplexMatrix::unit(3, i, i)))
        .collect::<Result<_, _>>()?;
    let spread = images[0].distance(&images[1]).max(images[0].distance(&images[2]));
    checks.push("not_a_trace_projection", spread > s.tol, json!(spread));

    let dual = dual_map(&c);
    let dual_err = dual.matrix().distance(catalog::example_b4_dual().matrix());
    checks.push("dual_map_matches", dual_err <= EXACT_TOL, json!(dual_err));

    let block = block_form_decomposition(&c, s.tol)?;
    checks.push(
        "block_form",
        block.m == 1 && block.holds(&c, s.tol),
        json!({ "m": block.m, "block_residual": block.block_residual }),
    );
    let mut rng = seeded_rng(s.seed);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let b = random_hermitian(3, &mut rng);
        let compressed = &(&block.pi * &b) * &block.pi;
        worst = worst.max(dual.apply(&b)?.distance(&dual.apply(&compressed)?));
    }
    checks.push("dual_determined_by_corner", worst <= EXACT_TOL, json!(worst));
    Ok(())
}

fn example_b5(checks: &mut Checks, s: &Settings) -> CliResult<()> {
    let c = catalog::example_b5();
    cptp_checks(checks, &c, s.tol)?;
    sp_check(checks, &c, SpVerdict::StrictlyPositive, s.tol)?;
    let budget = SearchBudget {
        seed: s.seed,
        ..SearchBudget::default()
    };
    let d = distance_to_identity(&c, budget)?;
    checks.push(
        "distance_to_identity_is_two",
        (d.lower - 2.0).abs() <= DISTANCE_TOL && d.upper >= d.lower,
        json!({ "lower": d.lower, "upper": d.upper }),
    );
    Ok(())
}

fn heinosaari(checks: &mut Checks, s: &Settings) -> CliResult<()> {
    let (a, b, d) = catalog::heinosaari_triple();
    let inst = DMajInstance::with_reference(a, b, &d, s.tol)?;
    let curve = trace_norm_curve_check(&inst, &[], s.tol)?;
    checks.push(
        "trace_norm_inequalities_hold",
        curve.holds && curve.sampled_worst_margin >= -CURVE_MARGIN_TOL,
        json!({
            "worst_margin": curve.worst_margin,
            "sampled_worst_margin": curve.sampled_worst_margin,
            "samples": curve.samples.len(),
        }),
    );
    let square = matrix_convex_necessary_check(&inst, &[dmaj_core::matrix::ConvexFunction::Square], s.tol)?;
    checks.push(
        "square_trace_equality",
        square[0].margin.abs() <= CURVE_MARGIN_TOL,
        json!(square[0].margin),
    );
    let r = d_maj_feasibility(&inst, &s.solver())?;
    checks.push(
        "no_channel_exists",
        r.verdict == Verdict::InfeasibleHeuristic && r.final_gap > PLATEAU_MIN,
        json!({
            "verdict": r.verdict,
            "final_gap": r.final_gap,
            "iterations": r.iterations,
            "residual_trace": r.residual_trace,
        }),
    );
    Ok(())
}

fn iteration(checks: &mut Checks, _s: &Settings) -> CliResult<()> {
    let d = WeightVector::new(vec![0.5, 0.3, 0.2])?;
    let x0 = [0.2, 0.3, 0.5];
    let r = iterate_majorization(&x0, &d, 30)?;
    let table: Vec<Value> = r
        .steps
        .iter()
        .map(|st| json!({ "alpha": st.alpha, "distance": st.distance, "ratio": st.ratio }))
        .collect();
    checks.push(
        "closed_form",
        r.max_closed_form_error < ITERATION_CLOSED_FORM_TOL,
        json!(r.max_closed_form_error),
    );
    checks.push(
        "geometric_rate_q",
        r.max_ratio_error < ITERATION_RATIO_TOL,
        json!({ "q": r.factors.q, "max_ratio_error": r.max_ratio_error, "table": table }),
    );
    Ok(())
}

pub fn run_case(name: &str, settings: &Settings) -> CliResult<CaseReport> {
    let mut checks = Checks(Vec::new());
    let s = settings;
    match name {
        "example-b1" => example_b1(&mut checks, s)?,
        "example-b2" => example_b2(&mut checks, s)?,
        "example-b3" => example_b3(&mut checks, s)?,
        "example-b4" => example_b4(&mut checks, s)?,
        "example-b5" => example_b5(&mut checks, s)?,
        "heinosaari" => heinosaari(&mut checks, s)?,
        "iteration" => iteration(&mut checks, s)?,
        other => {
            return Err(CliError(format!(
                "unknown case {other:?}; known cases: {}",
                CASES.join(", ")
            )))
        }
    }
    Ok(CaseReport {
        case: name.into(),
        passed: checks.0.iter().all(|c| c.passed),
        checks: checks.0,
        settings: *settings,
    })
}

/// Runs every case concurrently; reports come back in [`CASES`] order.
pub fn run_all(settings: &Settings) -> Vec<CliResult<CaseReport>> {
    thread::scope(|scope| {
        let handles: Vec<_> = CASES
            .iter()
            .map(|name| scope.spawn(move || run_case(name, settings)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError("case panicked".into()))))
            .collect()
    })
}
