//! `eqtoric`: batch front end over problem files.
//!
//! Exit codes: 0 success, 1 failed verification or internal error, 2 parse
//! error, 3 validation error, 4 budget exceeded, 5 partial result.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eqtoric::certificate::{verify, Certificate, Verdict};
use eqtoric::error::Error;
use eqtoric::problem::{load_problem, Loaded};
use eqtoric::trivializer::{trivialize, Options, Outcome};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "eqtoric", version, about = "Equivariant projective modules over toric monoid algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap on enumerated lattice points per search.
    #[arg(long, global = true, value_name = "POINTS")]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Face lattice, codimension-1 faces, smallest face and generators of J.
    Faces { file: PathBuf },
    /// Invariant monoid generators and a presentation of A^G.
    Invariants { file: PathBuf },
    /// Trivialize the module declared in FILE.
    Trivialize {
        file: PathBuf,
        /// Where to write the certificate.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recorded in the certificate; the pipeline itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Options::default().max_rank)]
        max_rank: usize,
    },
    /// Replay every identity recorded in CERT against FILE.
    Verify { cert: PathBuf, file: PathBuf },
}

/// Everything that ends a run early, with its exit code.
enum Failure {
    Lib(Error),
    Io(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse { .. }) => 2,
            Failure::Lib(Error::Validation(_)) => 3,
            Failure::Lib(Error::Resource(_)) => 4,
            Failure::Lib(Error::Unsupported { .. } | Error::UnsupportedFactorization(_)) => 5,
            Failure::Lib(_) | Failure::Io(_) | Failure::Verify(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
            Failure::Verify(m) => format!("verification failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, budget: Option<u64>) -> Result<Loaded, Failure> {
    Ok(load_problem(&read(path)?, budget)?)
}

/// The report to print and the exit code to return.
fn run(cli: &Cli) -> Result<(Report, u8), Failure> {
    match &cli.command {
        Command::Faces { file } => Ok((report::faces(&load(file, cli.budget)?)?, 0)),
        Command::Invariants { file } => Ok((report::invariants(&load(file, cli.budget)?)?, 0)),
        Command::Trivialize { file, out, seed, max_rank } => {
            let loaded = load(file, cli.budget)?;
            let p = loaded.problem()?;
            let opts = Options { max_rank: *max_rank, ..Options::default() };
            let outcome = trivialize(&p, &opts)?;
            let cert = Certificate::from_outcome(&loaded.file, &p, &outcome, *seed);
            if let Some(out) = out {
                fs::write(out, cert.to_json()).map_err(|e| Failure::Io(format!("cannot write {}: {e}", out.display())))?;
            }
            let code = match outcome {
                Outcome::Complete(_) => 0,
                Outcome::Partial(_) => 5,
            };
            Ok((report::trivialized(&cert, out.as_deref()), code))
        }
        Command::Verify { cert, file } => {
            let loaded = load(file, cli.budget)?;
            let c = Certificate::from_json(&read(cert)?)?;
            let verdict = verify(&loaded, &c).map_err(|f| Failure::Verify(f.0))?;
            let code = match verdict {
                Verdict::Complete { .. } => 0,
                Verdict::Partial { .. } => 5,
            };
            Ok((report::verified(&verdict), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(&cli) {
        Ok(ok) => ok,
        Err(f) => (report::failure(&f.message(), f.code()), f.code()),
    };
    match cli.format {
        Format::Text => print!("{}", report.text),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize")),
    }
    ExitCode::from(code)
}
