use std::fmt::Write as _;
use std::fs;
use std::io::{ErrorKind, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use zxw::normal_form::{emit_diagram, normalize, NormalizeOptions, DECIDE_TOL};
use zxw::rules::{builtin_rules, verify_all, SOUNDNESS_TOL};
use zxw::{interpret, io, Diagram, Dimension, ZxwError};

#[derive(Parser)]
#[command(
    name = "zxw",
    version,
    about = "Qudit ZXW-calculus diagrams: interpret, normalize, compare, verify rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the matrix of a diagram, one row per line as [re, im] pairs.
    Interpret {
        file: PathBuf,
        /// Print parts smaller than this as zero.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Print the normal-form amplitudes of the diagram bent into a state.
    Normalize {
        file: PathBuf,
        /// Also write the normal-form diagram as a document. It is a state:
        /// the inputs of the original are its trailing outputs.
        #[arg(long)]
        emit_diagram: Option<PathBuf>,
    },
    /// Exit 0 when the diagrams are equal, 1 when they are not.
    Equal {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DECIDE_TOL)]
        tol: f64,
    },
    /// Check every built-in rule numerically.
    VerifyRules {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4, 5])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = SOUNDNESS_TOL)]
        tol: f64,
        /// Only check these rules.
        #[arg(long, value_delimiter = ',')]
        rules: Vec<String>,
        /// Write one JSON record per rule and dimension.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Render a diagram for Graphviz.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Dot,
}

/// Bad input: exit code 2. Anything else that goes wrong: 1.
enum Failure {
    Input(String),
    Run(String),
}

impl From<ZxwError> for Failure {
    fn from(e: ZxwError) -> Self {
        match e {
            ZxwError::Parse(_)
            | ZxwError::IllFormed(_)
            | ZxwError::InvalidDimension(_)
            | ZxwError::InvalidParameters(_) => Failure::Input(e.to_string()),
            e => Failure::Run(e.to_string()),
        }
    }
}

fn load(path: &PathBuf) -> Result<Diagram, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

/// Write to stdout; a reader that went away early is not an error.
fn say(text: &str) -> Result<(), Failure> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::Run(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Interpret { file, tol } => {
            say(&interpret(&load(&file)?)?.chopped(tol).to_string())?;
        }
        Command::Normalize {
            file,
            emit_diagram: out,
        } => {
            let nf = normalize(&load(&file)?)?;
            say(&nf.to_string())?;
            if let Some(out) = out {
                write(&out, &io::serialize(&emit_diagram(&nf)))?;
            }
        }
        Command::Equal { a, b, tol } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let equal =
                zxw::normal_form::decide_equal_with(&a, &b, tol, &NormalizeOptions::default())?;
            say(if equal { "equal\n" } else { "not equal\n" })?;
            return Ok(if equal {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::VerifyRules {
            dims,
            samples,
            seed,
            tol,
            rules,
            report,
        } => {
            if samples == 0 {
                return Err(Failure::Input("--samples must be at least 1".into()));
            }
            let dims: Vec<Dimension> = dims
                .into_iter()
                .map(Dimension::new)
                .collect::<Result<_, _>>()?;
            let mut all = builtin_rules();
            if !rules.is_empty() {
                if let Some(missing) = rules.iter().find(|n| !all.iter().any(|r| &r.name == *n)) {
                    return Err(Failure::Input(format!("unknown rule {missing}")));
                }
                all.retain(|r| rules.contains(&r.name));
            }
            let reports = verify_all(&all, &dims, samples, seed, tol);
            let mut text = String::new();
            for r in &reports {
                let dev = r.max_dev.map_or("-".to_string(), |x| format!("{x:.3e}"));
                let status = if r.pass { "pass" } else { "FAIL" };
                let note = r
                    .error
                    .as_deref()
                    .map(|e| format!("  ({e})"))
                    .unwrap_or_default();
                let _ = writeln!(
                    text,
                    "{status} {:<10} d={} samples={} max_dev={dev}{note}",
                    r.rule, r.d, r.samples
                );
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            let _ = writeln!(
                text,
                "{} of {} checks passed",
                reports.len() - failed,
                reports.len()
            );
            say(&text)?;
            if let Some(out) = report {
                write(&out, &io::write_report(&reports))?;
            }
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render {
            file,
            format: Format::Dot,
        } => {
            say(&io::render_dot(&load(&file)?))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
