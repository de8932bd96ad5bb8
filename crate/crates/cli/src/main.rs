//! `cohomotopy`: divisibility bounds, lattice admissibility, degree
//! reduction and the chamber demo from the command line.
//!
//! Reports go to stdout as JSON (default) or a plain table. Failures go to
//! stderr as `{"error": {"code": ..., "message": ...}}` with exit status 1
//! for domain errors and 2 for I/O, parse and usage errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cohomotopy::Rational;

use report::{CliError, Format};

#[derive(Parser, Debug)]
#[command(
    name = "cohomotopy",
    version,
    about = "Exact stable-cohomotopy arithmetic and degree reduction"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputArg::Json, global = true)]
    output: OutputArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dirac index d = (c² - σ)/8.
    Index {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "manifold")]
        c_squared: Option<i64>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "manifold")]
        signature: Option<i64>,
        /// Four-manifold data as JSON: {b1, b_plus, b_minus, c_squared}.
        #[arg(long, conflicts_with_all = ["c_squared", "signature"])]
        manifold: Option<PathBuf>,
    },
    /// Expected moduli dimension k = 2d - b⁺ - 1.
    Dim {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "manifold")]
        d: Option<i64>,
        #[arg(long, required_unless_present = "manifold")]
        b_plus: Option<i64>,
        #[arg(long, conflicts_with_all = ["d", "b_plus"])]
        manifold: Option<PathBuf>,
    },
    /// Lower bound for m(d, k) from the Chern character.
    Bound {
        #[arg(long, required_unless_present = "manifold")]
        d: Option<u32>,
        #[arg(long, required_unless_present = "manifold")]
        k: Option<u32>,
        #[arg(long, conflicts_with_all = ["d", "k"])]
        manifold: Option<PathBuf>,
    },
    /// Hurewicz kernel and cokernel orders for k = 0..=4.
    Hurewicz {
        #[arg(long)]
        d: u32,
        /// Restrict to one k.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Lower bound against the exact cokernel order over a range of d.
    Sharpscan {
        #[arg(long)]
        d_min: u32,
        #[arg(long)]
        d_max: u32,
        /// Keep only rows with this k (2 or 4).
        #[arg(long)]
        k: Option<u32>,
    },
    /// Donaldson admissibility of a negative definite unimodular form.
    Lattice {
        /// Gram matrix as a JSON array of integer rows.
        #[arg(long, required_unless_present = "builtin")]
        gram: Option<PathBuf>,
        /// `e8` for -E8, or `diag:N` for -I_N.
        #[arg(long, conflicts_with = "gram")]
        builtin: Option<String>,
    },
    /// Donaldson shift k = (-c² - b₂)/8.
    Donaldson {
        #[arg(long, allow_hyphen_values = true)]
        c_squared: i64,
        #[arg(long)]
        b2: i64,
    },
    /// Reduce f = l + c to l⁻¹(V) → V and report its degree.
    Reduce {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value = "1/4")]
        epsilon: Rational,
        /// Override the problem's bound radius.
        #[arg(long)]
        radius: Option<Rational>,
        #[arg(long, default_value_t = 16)]
        max_refine: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also compute the degree after enlarging V by a target vector,
        /// given as comma-separated rationals; repeat for more vectors.
        #[arg(long, value_parser = parse_vector)]
        enlarge: Vec<Vec<Rational>>,
    },
    /// Signed preimage counts of latitude paths; angles in units of π.
    Chamber {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        angles: Vec<Rational>,
        /// Use the orientation-reversed path.
        #[arg(long)]
        reversed: bool,
    },
    /// Evaluate the proper-but-unbounded counterexample on R^N.
    Counterexample {
        #[arg(long)]
        n: usize,
    },
}

fn parse_vector(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<Rational>().map_err(|e| e.to_string()))
        .collect()
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format = match cli.output {
        OutputArg::Json => Format::Json,
        OutputArg::Table => Format::Table,
    };
    let report = match cli.command {
        Command::Index {
            c_squared,
            signature,
            manifold,
        } => commands::index(c_squared, signature, manifold.as_deref())?,
        Command::Dim { d, b_plus, manifold } => commands::dim(d, b_plus, manifold.as_deref())?,
        Command::Bound { d, k, manifold } => commands::bound(d, k, manifold.as_deref())?,
        Command::Hurewicz { d, k } => commands::hurewicz(d, k)?,
        Command::Sharpscan { d_min, d_max, k } => commands::sharpscan(d_min, d_max, k)?,
        Command::Lattice { gram, builtin } => commands::lattice(gram.as_deref(), builtin.as_deref())?,
        Command::Donaldson { c_squared, b2 } => commands::donaldson(c_squared, b2)?,
        Command::Reduce {
            problem,
            epsilon,
            radius,
            max_refine,
            seed,
            enlarge,
        } => commands::reduce(&problem, epsilon, radius, max_refine, seed, &enlarge)?,
        Command::Chamber { n, angles, reversed } => commands::chamber(n, &angles, reversed)?,
        Command::Counterexample { n } => commands::counterexample(n)?,
    };
    Ok(report.render(format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return CliError::usage(e.to_string()).report();
        }
    };
    match run(cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => e.report(),
    }
}
