use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

#[derive(Parser, Debug)]
#[command(
    name = "ffsq",
    version,
    about = "Sums of two squares A^2 + T B^2 in F_q[T]"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format; reports default to json, `represent` and `group` to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Worker threads for scans. Results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Cap on the number of objects an enumeration may visit.
    #[arg(long, global = true, env = "FFSQ_MAX_ENUM", default_value_t = ffsq::DEFAULT_MAX_ENUM)]
    pub max_enum: u64,

    /// Largest field size accepted.
    #[arg(long, global = true, default_value_t = ffsq::ff::DEFAULT_MAX_Q)]
    pub max_q: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    #[value(alias = "monte_carlo")]
    MonteCarlo,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct IntervalArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Degree of the center; defaults to deg f0.
    #[arg(long)]
    pub n: Option<usize>,
    /// Center as a coefficient list (constant term first) or `T^n`; defaults to `T^n`.
    #[arg(long)]
    pub f0: Option<String>,
    /// Relative width: perturbations of degree at most floor(epsilon n).
    #[arg(long, conflicts_with = "m")]
    pub epsilon: Option<String>,
    /// Perturbation degree bound.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether f is A^2 + T B^2 and show a witness and the factorization.
    Represent {
        #[command(flatten)]
        field: FieldArgs,
        /// Coefficient list, constant term first, e.g. `1,0,1` for T^2 + 1.
        #[arg(long, visible_alias = "f0")]
        f: String,
    },
    /// Mean of b_q over a short interval around f0.
    Interval {
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Mean of b_q over all monic polynomials of degree n.
    Global {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
    },
    /// Mean of b_q over T^(p^2) + a1 T + a0 with q = p^(2 nu), against c_p.
    Affine {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Density of X_n in the hyperoctahedral group, three ways.
    Group {
        #[arg(long)]
        n: usize,
    },
    /// Signed Frobenius type frequencies over a short interval.
    Chebotarev {
        #[command(flatten)]
        interval: IntervalArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
