use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dmaj_cli::commands::{self, Method};
use dmaj_cli::io::{self, write_json, CliResult};
use dmaj_cli::reproduce;
use dmaj_cli::{render, Report, Settings};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "dmaj", version, about = "Strict positivity of linear maps and D-majorization checks")]
struct Cli {
    /// Relative tolerance for cone and equality tests
    #[arg(long, global = true, default_value_t = dmaj_core::DEFAULT_TOL)]
    tol: f64,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Iteration cap of the feasibility solver
    #[arg(long, global = true, default_value_t = 50_000)]
    max_iter: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strict positivity of a map given by its Choi matrix
    CheckSp {
        #[arg(long)]
        map: PathBuf,
        /// Input dimension n when the map is not square
        #[arg(long)]
        in_dim: Option<usize>,
        /// Random positive definite probes for the kernel check
        #[arg(long, default_value_t = 20)]
        probes: usize,
        /// Sampled (heuristic) positivity check on this many pure inputs
        #[arg(long, default_value_t = 0)]
        sample_positivity: usize,
    },
    /// Whether a channel fixing D maps B to A
    CheckDmaj {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        /// Reference: a diagonal (`{"diag": ...}`) or a full positive definite matrix
        #[arg(long)]
        d: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Vector d-majorization x ≺_d y
    CheckDvec {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        d: PathBuf,
        /// Also search a d-stochastic witness
        #[arg(long)]
        witness: bool,
    },
    /// Channel with T(B) = A for tr A = tr B and ‖A‖₁ ≤ ‖B‖₁
    Construct {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        /// Image of the first kernel eigenvector of a singular B
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Lift a d-stochastic matrix to a channel fixing diag(d)
    LiftDiag {
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        d: PathBuf,
    },
    /// Minimal and maximal elements for weights d
    Minmax {
        #[arg(long)]
        d: PathBuf,
    },
    /// Macro-step iteration towards a vertex
    Iterate {
        #[arg(long)]
        x0: PathBuf,
        #[arg(long)]
        d: PathBuf,
        #[arg(long, default_value_t = 30)]
        steps: usize,
    },
    /// Regenerate the worked examples
    Reproduce {
        /// example-b1..example-b5, heinosaari or iteration
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        case: Option<String>,
        #[arg(long)]
        all: bool,
        /// Directory receiving one `<case>.json` per case
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(value: &Value, format: Format) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n",
        Format::Text => render::text(value),
    };
    // a closed pipe (`dmaj ... | head`) is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn reproduce_cmd(case: Option<String>, out: Option<&Path>, settings: &Settings, format: Format) -> CliResult<i32> {
    let results = match case {
        Some(name) => vec![reproduce::run_case(&name, settings)],
        None => reproduce::run_all(settings),
    };
    let mut reports = Vec::new();
    for r in results {
        reports.push(r?);
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| io::CliError(format!("cannot create {}: {e}", dir.display())))?;
        for r in &reports {
            write_json(&dir.join(format!("{}.json", r.case)), r)?;
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    match format {
        Format::Json => emit(&json!({ "passed": passed, "cases": reports }), format),
        Format::Text => {
            for r in &reports {
                for c in &r.checks {
                    println!("{:<12} {:<32} {}", r.case, c.name, if c.passed { "pass" } else { "FAIL" });
                }
            }
            println!("{}", if passed { "all cases reproduced" } else { "some cases deviate" });
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn run(cli: Cli) -> CliResult<i32> {
    let settings = Settings {
        tol: cli.tol,
        seed: cli.seed,
        max_iter: cli.max_iter,
    };
    let report: Report = match cli.command {
        Command::CheckSp {
            map,
            in_dim,
            probes,
            sample_positivity,
        } => commands::check_sp(&io::read_choi(&map, in_dim)?, probes, sample_positivity, &settings)?,
        Command::CheckDmaj { a, b, d, method } => {
            let inst = commands::instance(
                io::read_matrix(&a)?,
                io::read_matrix(&b)?,
                &io::read_matrix_file(&d)?,
                settings.tol,
            )?;
            commands::check_dmaj(&inst, method, &settings)?
        }
        Command::CheckDvec { x, y, d, witness } => commands::check_dvec(
            &io::read_vector(&x)?,
            &io::read_vector(&y)?,
            &io::read_weights(&d)?,
            witness,
            &settings,
        )?,
        Command::Construct { a, b, omega } => {
            let omega = omega.as_deref().map(io::read_matrix).transpose()?;
            commands::construct(&io::read_matrix(&a)?, &io::read_matrix(&b)?, omega.as_ref(), &settings)?
        }
        Command::LiftDiag { m, d } => {
            commands::lift_diag(&io::read_matrix(&m)?, &io::read_weights(&d)?, &settings)?
        }
        Command::Minmax { d } => commands::minmax(&io::read_weights(&d)?, &settings)?,
        Command::Iterate { x0, d, steps } => {
            commands::iterate(&io::read_vector(&x0)?, &io::read_weights(&d)?, steps, &settings)?
        }
        Command::Reproduce { case, all: _, out } => {
            return reproduce_cmd(case, out.as_deref(), &settings, cli.format);
        }
    };
    emit(&report.body, cli.format);
    Ok(report.outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
