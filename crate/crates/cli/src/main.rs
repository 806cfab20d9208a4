//! `fujita` — exact chain-maximum solver and certified bound reports.
//!
//! Exit codes: 0 success, 1 certification or internal failure, 2 usage or
//! domain error. All behavior is controlled by flags; output is
//! deterministic byte-for-byte for a fixed invocation.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fujita_bounds::bounds::{bound_report, write_bounds_csv, write_bounds_json, BoundReport};
use fujita_bounds::dyadic::Round;
use fujita_bounds::lambert::lambert_w;
use fujita_bounds::rational::parse_rational;
use fujita_bounds::solver::{
    build_table, solve_f, solve_f_bruteforce, solve_g_sixfold, write_table_csv, write_table_json,
    SolveResult,
};
use fujita_bounds::verify::{run_suite, Suite};

const TABLE_GUARD: u32 = 40;
const SOLVE_F_GUARD: u32 = 64;
const SOLVE_G_GUARD: u32 = 12;
const SOLVE_G_HARD_CAP: u32 = 16;
const MIN_PRECISION: u32 = 16;

#[derive(Parser)]
#[command(
    name = "fujita",
    version,
    about = "Exact solver and certified bounds for the chain-maximum functions F(n, r) and G(n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Working precision in bits for interval evaluations (minimum 16).
    #[arg(long, default_value_t = 64)]
    precision: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Certified floors and exact values of F(n, r) for n = 2..=n_max.
    Table {
        #[arg(long)]
        n_max: u32,
        /// Comma-separated list of r values.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        r: Vec<u64>,
        /// Override the n_max <= 40 runtime guard.
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Solve F(n, r) exactly (dynamic programming, or --brute for the
    /// exhaustive oracle).
    SolveF {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Use the exhaustive enumeration oracle (n <= 8).
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Certified upper candidate maximum for the sixfold objective G(n).
    SolveG {
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Closed-form bound report for one (n, r), or a plot-ready sweep.
    Bounds {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Include the appendix lower-bound construction.
        #[arg(long)]
        with_construction: bool,
        /// Largest n for which F is solved exactly inside the report.
        #[arg(long, default_value_t = 40)]
        f_guard: u32,
        /// Emit a CSV sweep over n = 2..=n_max, one column per bound.
        #[arg(long)]
        sweep: bool,
        #[arg(long)]
        n_max: Option<u32>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a named verification suite: table1, sixfold, bounds, oracle,
    /// appendix.
    Verify {
        suite: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Enclose W(x) for a rational x >= 0.
    Lambertw {
        #[arg(long)]
        x: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

enum CliError {
    Usage(String),
    Certification(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Certification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(err)) => {
            eprintln!("io error: {err}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Table {
            n_max,
            r,
            allow_large,
            common,
        } => {
            check_precision(&common)?;
            if n_max < 2 {
                return Err(CliError::Usage("table needs --n-max >= 2".into()));
            }
            if n_max > TABLE_GUARD && !allow_large {
                return Err(CliError::Usage(format!(
                    "--n-max {n_max} exceeds the guard {TABLE_GUARD}; pass --allow-large to override"
                )));
            }
            if r.is_empty() || r.contains(&0) {
                return Err(CliError::Usage("--r needs positive integers".into()));
            }
            let cells = build_table(n_max, &r);
            let mut bytes = Vec::new();
            match common.format {
                Format::Csv => write_table_csv(&cells, &mut bytes)?,
                Format::Json => write_table_json(&cells, &mut bytes)?,
                Format::Text => {
                    let mut text = String::new();
                    for cell in &cells {
                        writeln!(text, "{cell}").expect("string write");
                    }
                    bytes = text.into_bytes();
                }
            }
            emit(&common.out, &bytes)
        }
        Command::SolveF {
            n,
            r,
            brute,
            allow_large,
            common,
        } => {
            check_precision(&common)?;
            if n < 1 || r < 1 {
                return Err(CliError::Usage("solve-f needs n >= 1 and r >= 1".into()));
            }
            if brute && n > 8 {
                return Err(CliError::Usage("--brute is limited to n <= 8".into()));
            }
            if !brute && n > SOLVE_F_GUARD && !allow_large {
                return Err(CliError::Usage(format!(
                    "--n {n} exceeds the guard {SOLVE_F_GUARD}; pass --allow-large to override"
                )));
            }
            let solved = if brute {
                solve_f_bruteforce(n, r).expect("guard checked")
            } else {
                solve_f(n, r)
            };
            emit_solve(&common, "F", n, Some(r), &solved)
        }
        Command::SolveG {
            n,
            allow_large,
            common,
        } => {
            check_precision(&common)?;
            if !(2..=SOLVE_G_HARD_CAP).contains(&n) {
                return Err(CliError::Usage(format!(
                    "solve-g needs 2 <= n <= {SOLVE_G_HARD_CAP}"
                )));
            }
            if n > SOLVE_G_GUARD && !allow_large {
                return Err(CliError::Usage(format!(
                    "--n {n} exceeds the guard {SOLVE_G_GUARD}; pass --allow-large to override"
                )));
            }
            let solved = solve_g_sixfold(n);
            emit_solve(&common, "G_upper", n, None, &solved)
        }
        Command::Bounds {
            n,
            r,
            with_construction,
            f_guard,
            sweep,
            n_max,
            common,
        } => {
            check_precision(&common)?;
            if r < 1 {
                return Err(CliError::Usage("bounds needs r >= 1".into()));
            }
            if sweep {
                let n_max = n_max.ok_or_else(|| CliError::Usage("--sweep needs --n-max".into()))?;
                if n_max < 2 {
                    return Err(CliError::Usage("--n-max must be at least 2".into()));
                }
                let bytes = sweep_csv(n_max, r, common.precision, f_guard)?;
                return emit(&common.out, &bytes);
            }
            let n = n.ok_or_else(|| CliError::Usage("bounds needs --n".into()))?;
            let report = bound_report(n, r, common.precision, f_guard, with_construction)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut bytes = Vec::new();
            match common.format {
                Format::Csv => write_bounds_csv(&report, &mut bytes)?,
                Format::Json => write_bounds_json(&report, &mut bytes)?,
                Format::Text => bytes = bounds_text(&report).into_bytes(),
            }
            emit(&common.out, &bytes)
        }
        Command::Verify { suite, common } => {
            check_precision(&common)?;
            let suite: Suite = suite.parse().map_err(CliError::Usage)?;
            let checks = run_suite(suite);
            let passed = checks.iter().filter(|c| c.passed).count();
            let bytes = match common.format {
                Format::Text => {
                    let mut text = String::new();
                    for check in &checks {
                        writeln!(text, "{check}").expect("string write");
                    }
                    writeln!(
                        text,
                        "suite {}: {passed}/{} checks passed",
                        suite.name(),
                        checks.len()
                    )
                    .expect("string write");
                    text.into_bytes()
                }
                Format::Json => {
                    let doc = serde_json::json!({
                        "schema_version": 1,
                        "suite": suite.name(),
                        "passed": passed,
                        "total": checks.len(),
                        "checks": checks.iter().map(|c| serde_json::json!({
                            "name": c.name,
                            "passed": c.passed,
                            "detail": c.detail,
                        })).collect::<Vec<_>>(),
                    });
                    serde_json::to_vec_pretty(&doc).expect("json serializes")
                }
                Format::Csv => {
                    let mut text = String::from("name,passed,detail\n");
                    for check in &checks {
                        let detail = check.detail.replace('"', "'");
                        writeln!(text, "{},{},\"{}\"", check.name, check.passed, detail)
                            .expect("string write");
                    }
                    text.into_bytes()
                }
            };
            emit(&common.out, &bytes)?;
            if passed == checks.len() {
                Ok(())
            } else {
                Err(CliError::Certification(format!(
                    "suite {} failed {} of {} checks",
                    suite.name(),
                    checks.len() - passed,
                    checks.len()
                )))
            }
        }
        Command::Lambertw { x, common } => {
            check_precision(&common)?;
            let x = parse_rational(&x)
                .map_err(|e| CliError::Usage(format!("--x must be a rational: {e}")))?;
            let enclosure =
                lambert_w(&x, common.precision).map_err(|e| CliError::Usage(e.to_string()))?;
            let lo = enclosure.lo().to_decimal(30, Round::Down);
            let hi = enclosure.hi().to_decimal(30, Round::Up);
            let bytes = match common.format {
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({
                    "schema_version": 1,
                    "x": x.to_string(),
                    "lo": lo,
                    "hi": hi,
                    "precision": common.precision,
                }))
                .expect("json serializes"),
                _ => format!("W({x}) in [{lo}, {hi}]\n").into_bytes(),
            };
            emit(&common.out, &bytes)
        }
    }
}

fn check_precision(common: &CommonOpts) -> Result<(), CliError> {
    if common.precision < MIN_PRECISION {
        return Err(CliError::Usage(format!(
            "--precision must be at least {MIN_PRECISION} bits"
        )));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn emit_solve(
    common: &CommonOpts,
    label: &str,
    n: u32,
    r: Option<u64>,
    solved: &SolveResult,
) -> Result<(), CliError> {
    let enclosure = solved.value.enclose(common.precision);
    let bytes = match common.format {
        Format::Json => {
            let doc = serde_json::json!({
                "schema_version": 1,
                "quantity": label,
                "n": n,
                "r": r,
                "exact_value": solved.value.to_string(),
                "floor": solved.floor.to_string(),
                "enclosure": [
                    enclosure.lo().to_decimal(20, Round::Down),
                    enclosure.hi().to_decimal(20, Round::Up),
                ],
                "witness": solved.witness_string(),
                "states": solved.stats.states,
                "candidates": solved.stats.candidates,
            });
            serde_json::to_vec_pretty(&doc).expect("json serializes")
        }
        _ => {
            let args = match r {
                Some(r) => format!("({n}, {r})"),
                None => format!("({n})"),
            };
            format!(
                "{label}{args} = {}\nfloor = {}\nenclosure = {}\nwitness = {}\nstates = {}, candidates = {}\n",
                solved.value,
                solved.floor,
                enclosure,
                solved.witness_string(),
                solved.stats.states,
                solved.stats.candidates,
            )
            .into_bytes()
        }
    };
    emit(&common.out, &bytes)
}

fn bounds_text(report: &BoundReport) -> String {
    let mut text = String::new();
    writeln!(text, "bounds for n = {}, r = {}", report.n, report.r).expect("string write");
    if let (Some(f), Some(enc)) = (&report.f, &report.f_enclosure) {
        writeln!(
            text,
            "F = {} (floor {}), enclosure {}",
            f.value, f.floor, enc
        )
        .expect("string write");
    } else {
        writeln!(text, "F not solved (past --f-guard)").expect("string write");
    }
    for entry in &report.entries {
        let exact = entry
            .exact
            .as_ref()
            .map(|e| format!(" exact={e}"))
            .unwrap_or_default();
        writeln!(
            text,
            "{}: {}{} dominates_F={}",
            entry.name,
            entry.interval,
            exact,
            entry.dominates_f.as_str()
        )
        .expect("string write");
    }
    text
}

fn sweep_csv(n_max: u32, r: u64, precision: u32, f_guard: u32) -> Result<Vec<u8>, CliError> {
    let mut text = String::from("n,f,young_sum,enlogn_sum,loglog_thm,easy_lower\n");
    for n in 2..=n_max {
        let report = bound_report(n, r, precision, f_guard, false)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let f_column = report
            .f_enclosure
            .as_ref()
            .map(|enc| enc.midpoint().to_decimal(12, Round::Down))
            .unwrap_or_default();
        let mut columns = vec![n.to_string(), f_column];
        for name in ["young_sum", "enlogn_sum", "loglog_thm", "easy_lower"] {
            let entry = report
                .entries
                .iter()
                .find(|e| e.name == name)
                .expect("all bounds are present");
            columns.push(entry.interval.midpoint().to_decimal(12, Round::Down));
        }
        writeln!(text, "{}", columns.join(",")).expect("string write");
    }
    Ok(text.into_bytes())
}
