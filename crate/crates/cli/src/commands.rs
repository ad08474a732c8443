//! One function per subcommand. Each takes parsed inputs and returns a
//! [`Report`]: an outcome for the exit code and a JSON body.

use dmaj_core::channels::{kraus_from_choi, universal_kernel};
use dmaj_core::matrix::{iteration_factors, ConvexFunction};
use dmaj_core::random::{random_pd, random_pure_state, seeded_rng};
use dmaj_core::vector::{d_stochastic_witness, StochasticMatrix};
use dmaj_core::{
    block_form_decomposition, construct_channel_pair, d_maj_feasibility, d_majorization_check,
    iterate_majorization, lift_diagonal_channel, matrix_convex_necessary_check, minmax_elements,
    psd_check, qubit_check, strict_positivity_check, trace_norm_curve_check, ChoiMatrix,
    ComplexMatrix, DMajInstance, SolverParams, Verdict, WeightVector,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{CliError, CliResult, MatrixFile};

/// Pass criteria of the `iterate` command.
pub const ITERATION_CLOSED_FORM_TOL: f64 = 1e-12;
pub const ITERATION_RATIO_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: dmaj_core::DEFAULT_TOL,
            seed: 0,
            max_iter: SolverParams::default().max_iter,
        }
    }
}

impl Settings {
    pub fn solver(&self) -> SolverParams {
        SolverParams {
            max_iter: self.max_iter,
            ..SolverParams::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Affirmative,
    Negative,
    Undecided,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Affirmative => 0,
            Outcome::Negative => 1,
            Outcome::Undecided => 3,
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Affirmative
        } else {
            Outcome::Negative
        }
    }

    fn from_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Feasible => Outcome::Affirmative,
            Verdict::InfeasibleHeuristic => Outcome::Negative,
            Verdict::Undecided => Outcome::Undecided,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub outcome: Outcome,
    pub body: Value,
}

impl Report {
    fn new(command: &str, outcome: Outcome, settings: &Settings, mut body: Value) -> Self {
        let obj = body.as_object_mut().expect("report bodies are objects");
        obj.insert("command".into(), json!(command));
        obj.insert("outcome".into(), json!(outcome));
        obj.insert("settings".into(), json!(settings));
        Report { outcome, body }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn choi_file(c: &ChoiMatrix) -> Value {
    json!({
        "in_dim": c.in_dim(),
        "out_dim": c.out_dim(),
        "matrix": MatrixFile::from_matrix(c.matrix()),
    })
}

/// `check-sp`: strict positivity, the universal kernel over random positive
/// definite probes and, for non-SP maps, the block form.
///
/// `positivity_samples > 0` adds a sampled check that pure inputs map to
/// positive semidefinite outputs. It is a heuristic and cannot prove
/// positivity.
pub fn check_sp(
    c: &ChoiMatrix,
    probes: usize,
    positivity_samples: usize,
    settings: &Settings,
) -> CliResult<Report> {
    let tol = settings.tol;
    let n = c.in_dim();
    let sp = strict_positivity_check(c, tol)?;
    let cp = c.is_cp(tol)?;
    let tp = c.is_tp(tol);
    let mut rng = seeded_rng(settings.seed);
    let probe_set: Vec<ComplexMatrix> = (0..probes).map(|_| random_pd(n, 0.05, &mut rng)).collect();
    let kernel = universal_kernel(c, &probe_set, tol)?;

    let mut body = json!({
        "verdict": if sp.verdict.is_sp() { "strictly_positive" } else { "not_strictly_positive" },
        "strict_positivity": sp,
        "cp": cp,
        "tp": tp,
        "universal_kernel": {
            "probes": probes,
            "rank": kernel.kernel.rank(),
            "consistent": kernel.consistent,
            "max_angle": kernel.max_angle,
        },
    });
    let obj = body.as_object_mut().expect("object");
    if !sp.verdict.is_sp() {
        let block = block_form_decomposition(c, tol)?;
        obj.insert(
            "block_form".into(),
            json!({
                "m": block.m,
                "holds": block.holds(c, tol),
                "block_residual": block.block_residual,
                "compression_residual": block.compression_residual,
                "u": MatrixFile::from_matrix(&block.u),
                "pi": MatrixFile::from_matrix(&block.pi),
            }),
        );
    }
    if cp.is_cp {
        obj.insert("kraus_rank".into(), json!(kraus_from_choi(c, tol)?.len()));
    }
    if positivity_samples > 0 {
        let mut worst = f64::INFINITY;
        let mut violations = 0;
        for _ in 0..positivity_samples {
            let p = random_pure_state(n, &mut rng);
            let check = psd_check(&c.apply(&p)?.hermitian_part(), tol)?;
            worst = worst.min(check.min_eigenvalue);
            violations += usize::from(!check.is_psd());
        }
        obj.insert(
            "sampled_positivity".into(),
            json!({
                "heuristic": true,
                "samples": positivity_samples,
                "violations": violations,
                "min_eigenvalue": worst,
            }),
        );
    }
    Ok(Report::new(
        "check-sp",
        Outcome::from_bool(sp.verdict.is_sp()),
        settings,
        body,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Qubit,
    Feasibility,
    Auto,
}

/// Builds an instance from a reference given either as a diagonal or as a
/// full positive definite matrix.
pub fn instance(a: ComplexMatrix, b: ComplexMatrix, d: &MatrixFile, tol: f64) -> CliResult<DMajInstance> {
    match d.diagonal() {
        Some(diag) => Ok(DMajInstance::new(a, b, WeightVector::new(diag.to_vec())?)?),
        None => Ok(DMajInstance::with_reference(a, b, &d.to_matrix()?, tol)?),
    }
}

fn necessary_conditions(inst: &DMajInstance, tol: f64) -> CliResult<Value> {
    if inst.ensure_hermitian(tol).is_err() {
        return Ok(json!({ "skipped": "inputs are not hermitian" }));
    }
    let curve = trace_norm_curve_check(inst, &[], tol)?;
    let convex = matrix_convex_necessary_check(inst, &[ConvexFunction::Square], tol)?;
    Ok(json!({
        "trace_norm_curve": {
            "holds": curve.holds,
            "trace_equal": curve.trace_equal,
            "worst_margin": curve.worst_margin,
            "worst_t": curve.worst_t,
            "sampled_worst_margin": curve.sampled_worst_margin,
            "decisive": curve.decisive,
        },
        "convex": convex,
    }))
}

/// `check-dmaj`: `A ≺_D B` by the exact qubit criterion, the feasibility
/// solver, or both (`auto` on `2×2` inputs).
pub fn check_dmaj(inst: &DMajInstance, method: Method, settings: &Settings) -> CliResult<Report> {
    let tol = settings.tol;
    let n = inst.dim();
    let use_qubit = match method {
        Method::Qubit => {
            if n != 2 {
                return Err(CliError(format!("--method qubit needs 2x2 inputs, got {n}x{n}")));
            }
            true
        }
        Method::Feasibility => false,
        Method::Auto => n == 2,
    };
    let use_solver = method != Method::Qubit;

    let mut body = json!({
        "dim": n,
        "method": method,
        "reference_diagonal": inst.d().as_slice(),
        "necessary_conditions": necessary_conditions(inst, tol)?,
    });
    let obj = body.as_object_mut().expect("object");
    let mut outcome = Outcome::Undecided;
    let mut qubit_verdict = None;
    if use_qubit {
        let q = qubit_check(inst, tol)?;
        qubit_verdict = Some(q.verdict);
        outcome = Outcome::from_bool(q.verdict);
        obj.insert("verdict".into(), json!(if q.verdict { "majorized" } else { "not_majorized" }));
        obj.insert("qubit".into(), to_value(&q));
    }
    if use_solver {
        let r = d_maj_feasibility(inst, &settings.solver())?;
        obj.insert(
            "feasibility".into(),
            json!({
                "verdict": r.verdict,
                "iterations": r.iterations,
                "final_gap": r.final_gap,
                "scale": r.scale,
                "linear_inconsistency": r.linear_inconsistency,
                "shortcut": r.shortcut,
                "constraint_residuals": r.constraint_residuals,
                "residual_trace": r.residual_trace,
                "witness": r.witness.as_ref().map(choi_file),
            }),
        );
        match qubit_verdict {
            Some(q) => {
                let agree = match r.verdict {
                    Verdict::Undecided => None,
                    v => Some((v == Verdict::Feasible) == q),
                };
                obj.insert("methods_agree".into(), json!(agree));
            }
            None => {
                outcome = Outcome::from_verdict(r.verdict);
                obj.insert("verdict".into(), json!(r.verdict));
            }
        }
    }
    Ok(Report::new("check-dmaj", outcome, settings, body))
}

/// `check-dvec`: `x ≺_d y` by the finite criteria, optionally with a
/// d-stochastic witness from the feasibility solver.
pub fn check_dvec(
    x: &[f64],
    y: &[f64],
    d: &WeightVector,
    witness: bool,
    settings: &Settings,
) -> CliResult<Report> {
    let check = d_majorization_check(x, y, d, settings.tol)?;
    let mut body = json!({
        "verdict": if check.verdict { "majorized" } else { "not_majorized" },
        "check": check,
    });
    if witness {
        let r = d_stochastic_witness(x, y, d, &settings.solver())?;
        body.as_object_mut().expect("object").insert(
            "witness".into(),
            json!({
                "verdict": r.verdict,
                "iterations": r.iterations,
                "final_gap": r.final_gap,
                "shortcut": r.shortcut,
                "constraint_residuals": r.constraint_residuals,
                "matrix": r.witness,
            }),
        );
    }
    Ok(Report::new(
        "check-dvec",
        Outcome::from_bool(check.verdict),
        settings,
        body,
    ))
}

/// Checks that `c` is a channel with `T(input) = output`.
pub fn verify_channel(
    c: &ChoiMatrix,
    input: &ComplexMatrix,
    output: &ComplexMatrix,
    tol: f64,
) -> CliResult<Value> {
    let cp = c.is_cp(tol)?;
    let tp = c.tp_deviation();
    let scale = input.frobenius_norm().max(output.frobenius_norm()).max(1.0);
    let image_error = c.apply(input)?.distance(output);
    let passed = cp.is_cp && tp <= tol && image_error <= tol * scale;
    Ok(json!({
        "passed": passed,
        "choi_min_eigenvalue": cp.min_eigenvalue,
        "tp_deviation": tp,
        "image_error": image_error,
        "scale": scale,
    }))
}

/// `construct`: the channel of the trace-norm construction with `T(B) = A`.
pub fn construct(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    omega: Option<&ComplexMatrix>,
    settings: &Settings,
) -> CliResult<Report> {
    let c = construct_channel_pair(a, b, omega, settings.tol)?;
    let verification = verify_channel(&c.channel, b, a, settings.tol)?;
    let passed = verification["passed"].as_bool().unwrap_or(false);
    let body = json!({
        "verdict": if passed { "constructed" } else { "verification_failed" },
        "channel": choi_file(&c.channel),
        "transfer": c.transfer,
        "omega_index": c.omega_index,
        "verification": verification,
    });
    Ok(Report::new("construct", Outcome::from_bool(passed), settings, body))
}

/// `lift-diag`: the channel lifting a d-stochastic matrix.
pub fn lift_diag(m: &ComplexMatrix, d: &WeightVector, settings: &Settings) -> CliResult<Report> {
    let n = m.ensure_square()?;
    if m.as_slice().iter().any(|z| z.im != 0.0) {
        return Err(CliError("the stochastic matrix must be real".into()));
    }
    let entries = m.as_slice().iter().map(|z| z.re).collect();
    let sm = StochasticMatrix::new(n, entries, Some(d.clone()), settings.tol)?;
    let c = lift_diagonal_channel(&sm, d, settings.tol)?;
    let dm = ComplexMatrix::from_diag(d.as_slice());
    let verification = verify_channel(&c, &dm, &dm, settings.tol)?;
    let passed = verification["passed"].as_bool().unwrap_or(false);
    let body = json!({
        "verdict": if passed { "lifted" } else { "verification_failed" },
        "channel": choi_file(&c),
        "verification": verification,
    });
    Ok(Report::new("lift-diag", Outcome::from_bool(passed), settings, body))
}

/// `minmax`: the minimal and maximal elements among positive matrices of
/// trace `eᵀd`.
pub fn minmax(d: &WeightVector, settings: &Settings) -> CliResult<Report> {
    let mm = minmax_elements(d, settings.tol);
    let body = json!({
        "verdict": "computed",
        "minimal": MatrixFile::from_matrix(&mm.minimal),
        "maximal": mm.maximal.iter().map(MatrixFile::from_matrix).collect::<Vec<_>>(),
        "maximal_indices": mm.maximal_indices,
        "unique_max": mm.unique_max,
    });
    Ok(Report::new("minmax", Outcome::Affirmative, settings, body))
}

/// `iterate`: the macro-step sequence towards a vertex and its agreement
/// with the closed form.
pub fn iterate(x0: &[f64], d: &WeightVector, steps: usize, settings: &Settings) -> CliResult<Report> {
    let r = iterate_majorization(x0, d, steps)?;
    let passed = r.max_closed_form_error < ITERATION_CLOSED_FORM_TOL
        && r.max_ratio_error < ITERATION_RATIO_TOL;
    let f = iteration_factors(d)?;
    let body = json!({
        "verdict": if passed { "closed_form_matches" } else { "closed_form_mismatch" },
        "q": r.factors.q,
        "target_index": r.factors.target_index,
        "mirrored": r.factors.mirrored,
        "macro_step": f.macro_step,
        "max_closed_form_error": r.max_closed_form_error,
        "max_ratio_error": r.max_ratio_error,
        "steps": r.steps,
    });
    Ok(Report::new("iterate", Outcome::from_bool(passed), settings, body))
}
