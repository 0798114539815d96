//! `celint`: file-driven front end for celint-core.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "celint", version, about = "Exact celestial integrals on normal-crossing resolution data")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

/// Options shared by the computing verbs.
#[derive(Args, Debug, Clone)]
struct Common {
    /// Problem file (JSON).
    file: PathBuf,
    /// Selection override, e.g. '{"closed": ["D"]}'.
    #[arg(long)]
    select: Option<String>,
    /// Substitute a value for m after computing, e.g. m=-2.
    #[arg(long, value_name = "m=VALUE")]
    eval: Option<String>,
    /// Push the result down the named chain.
    #[arg(long, value_name = "CHAIN")]
    manifest: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Print a ring presentation and its tangent Chern class.
    Ring {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Class-level integral of the configuration.
    Integrate(Common),
    /// Degree of the integral (from the degree table when present).
    Degree(Common),
    /// Zeta function: multiplicities a·m + k.
    Zeta {
        #[command(flatten)]
        common: Common,
        /// Report the degree with its poles instead of the class.
        #[arg(long)]
        degree: bool,
    },
    /// Chern-Schwartz-MacPherson class of the selection or of one stratum.
    Csm {
        #[command(flatten)]
        common: Common,
        /// Comma-separated component names of an open stratum.
        #[arg(long)]
        stratum: Option<String>,
    },
    /// Constructible function from a fibered table.
    Ix(Common),
    /// Stringy class of a configuration, or a hypersurface correction coefficient.
    Stringy {
        file: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<String>,
        /// Print the correction coefficient for a cone singularity.
        #[arg(long, requires_all = ["d", "k"])]
        hypersurface: bool,
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        /// Omega or omega.
        #[arg(long, default_value = "Omega")]
        flavor: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run checkers on fixtures, or the randomized suites when no file is given.
    Verify {
        files: Vec<PathBuf>,
        /// Restrict to the named suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        /// Seed; defaults to CELINT_SEED or a fixed value.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Allow multiplicities at or below -1 (never exactly -1).
        #[arg(long)]
        formal: bool,
        /// Write the JSON report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(cli.verb) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
