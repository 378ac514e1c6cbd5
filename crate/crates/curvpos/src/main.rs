use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use curvpos::error::{exit, CliError};
use curvpos::report::{render_text, to_json, Report};
use curvpos::suite::{run_suite, SuiteName};
use curvpos::{certify, CertifyOptions};
use curvpos_core::multiindex::SymIndex;
use curvpos_core::quadrature::{l2_induced_metric, monomial_integral_exact, monomial_integral_mc};
use num_traits::ToPrimitive;

#[derive(Parser, Debug)]
#[command(name = "curvpos", version, about = "Certify Nakano, dual-Nakano and Griffiths positivity of curvature tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the bundle described by a JSON spec ("-" reads stdin).
    Certify {
        spec: PathBuf,
        /// Write the JSON report here ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Integral of W_A conj(W_B) / |W|^{2k} over P^{r-1}, exactly or by Monte Carlo.
    Integrate {
        #[arg(long)]
        r: usize,
        /// Comma-separated 1-based indices; empty for degree 0.
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        /// Monte Carlo sample count; exact rational value when absent.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact L2-induced metric on the monomial frame of S^k.
    L2metric {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run a built-in battery: identities, examples, counterexamples or all.
    Suite {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE as u8),
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("curvpos: {e}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Certify { spec, json, tolerance, seed, timings } => {
            let bytes = read_input(&spec)?;
            let report = certify(&bytes, CertifyOptions { tolerance, seed, timings })?;
            emit(&report, json.as_deref())
        }
        Command::Suite { name, seed, json, timings } => {
            let name: SuiteName = name.parse()?;
            let report = run_suite(name, seed, timings)?;
            emit(&report, json.as_deref())
        }
        Command::Integrate { r, a, b, mc, seed } => {
            let a = parse_index(&a, r, "--A")?;
            let b = parse_index(&b, r, "--B")?;
            match mc {
                None => {
                    let v = monomial_integral_exact(&a, &b, r)?;
                    println!("{v} ({:.17e})", v.to_f64().unwrap_or(f64::NAN));
                }
                Some(samples) => {
                    let e = monomial_integral_mc(&a, &b, r, samples, seed)?;
                    println!(
                        "{:.12e} {:+.12e}i  stderr {:.3e}  samples {}  seed {}",
                        e.value.re, e.value.im, e.stderr, e.samples, e.seed
                    );
                }
            }
            Ok(exit::POSITIVE)
        }
        Command::L2metric { r, k } => {
            let g = l2_induced_metric(r, k)?;
            for (p, row) in g.basis.iter().enumerate() {
                let cells: Vec<String> = (0..g.dim()).map(|q| g.get(p, q).to_string()).collect();
                println!("{:?}  {}", row.entries(), cells.join(" "));
            }
            Ok(exit::POSITIVE)
        }
    }
}

fn parse_index(text: &str, r: usize, flag: &str) -> Result<SymIndex, CliError> {
    let entries = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|e| CliError::Usage(format!("{flag}: {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    SymIndex::from_unsorted(entries, r).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(io)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(io)
    }
}

/// Writes the JSON report if asked and the text summary otherwise to stdout.
fn emit(report: &Report, json: Option<&Path>) -> Result<i32, CliError> {
    let stdout_json = json == Some(Path::new("-"));
    if let Some(path) = json.filter(|_| !stdout_json) {
        std::fs::write(path, to_json(report)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    }
    let text = if stdout_json { to_json(report) } else { render_text(report) };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
    Ok(report.outcome.exit_code)
}
