mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exact zonal polynomials, coefficient tables and verification suites.
#[derive(Parser, Debug)]
#[command(name = "zonal", version, about)]
struct Cli {
    /// Worker threads for parallel work (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the zonal polynomial C_κ.
    Poly {
        /// Partition such as 3,2.
        partition: String,
        /// Variable count (e.g. 3) or comma-separated names (e.g. a,b,c).
        #[arg(long)]
        vars: Option<String>,
        /// Print in the monomial symmetric basis (default when --vars is absent).
        #[arg(long)]
        m_basis: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the coefficient c[κ, λ].
    Coeff { kappa: String, lambda: String },
    /// Print the full coefficient matrix for weight n.
    Table {
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write the zero pattern of the coefficient matrix as a PBM bitmap.
    Zeros {
        n: usize,
        /// Output path; standard output when omitted.
        #[arg(long, short)]
        out: Option<std::path::PathBuf>,
    },
    /// Truncated hypergeometric function of a matrix argument.
    Pfq {
        #[command(flatten)]
        params: PfqParams,
        /// Eigenvalues of the argument.
        #[arg(long, allow_hyphen_values = true)]
        eigs: String,
    },
    /// Truncated scalar hypergeometric series.
    PfqScalar {
        #[command(flatten)]
        params: PfqParams,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        /// closed-forms, conjectures, identities, laplace, wishart or trace.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        m_max: Option<usize>,
        #[arg(long)]
        a_max: Option<i64>,
    },
    /// Monte-Carlo check of the Wishart expectation operator.
    Wishart {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nu: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Diagonal of Y; defaults to 1,2,…,m.
        #[arg(long)]
        y: Option<String>,
    },
}

#[derive(Args, Debug)]
struct PfqParams {
    /// Upper parameters, comma separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    upper: String,
    /// Lower parameters, comma separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    lower: String,
    /// Truncation order: every partition of weight ≤ N is summed.
    #[arg(long)]
    order: usize,
    /// Print the exact value (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Print a decimal approximation of the exact value.
    #[arg(long)]
    float: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let result = zonal_core::parallel::with_threads(threads, move || commands::run(cli.command));
    match result {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().into()
        }
    }
}
