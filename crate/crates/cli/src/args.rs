use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covdepth_core::montecarlo::{DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_WORKERS};
use covdepth_core::schemes::{Scheme, SystemParams, DEFAULT_STATE_BUDGET};

use crate::error::{CliError, CliResult};
use crate::report::Format;

#[derive(Debug, Parser)]
#[command(name = "covdepth", version, about = "Coverage depth of coded DNA storage under random access")]
pub struct Cli {
    /// Largest Markov-chain state space an exact computation may build.
    #[arg(long, global = true, env = "COVERAGE_BUDGET_STATES", default_value_t = DEFAULT_STATE_BUDGET)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form expectation, variance approximation and sample sizes.
    Expect(ExpectArgs),
    /// Monte-Carlo distribution of the number of draws.
    Simulate(SimulateArgs),
    /// Lower bounds on the expected number of draws.
    Bounds(BoundsArgs),
    /// Exact expectation and tail from the Markov chain.
    Exact(ExactArgs),
    /// Regenerate the reference tables and figure data at n=35, k=20, m=2.
    ReproduceTables(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    Local,
    Global,
    Pmds,
}

#[derive(Clone, Debug, Args)]
pub struct SystemArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub m: u32,
    /// Number of requested files.
    #[arg(long, default_value_t = 1)]
    pub a: u32,
}

impl SystemArgs {
    pub fn resolve(&self) -> CliResult<SystemParams> {
        Ok(SystemParams::new(self.n, self.k, self.m, self.a)?)
    }
}

#[derive(Clone, Debug, Args)]
pub struct InstanceArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeKind,
    #[command(flatten)]
    pub system: SystemArgs,
    /// Global parities of the PMDS code.
    #[arg(long)]
    pub s: Option<u32>,
}

impl InstanceArgs {
    pub fn resolve(&self) -> CliResult<(Scheme, SystemParams)> {
        let params = self.system.resolve()?;
        let scheme = match (self.scheme, self.s) {
            (SchemeKind::Local, None) => Scheme::LocalMds,
            (SchemeKind::Global, None) => Scheme::GlobalMds,
            (SchemeKind::Pmds, Some(s)) => Scheme::Pmds { s },
            (SchemeKind::Pmds, None) => return Err(CliError::Validation("pmds requires --s".into())),
            (_, Some(_)) => return Err(CliError::Validation("--s applies to pmds only".into())),
        };
        scheme.validate(&params)?;
        Ok((scheme, params))
    }
}

#[derive(Clone, Debug, Args)]
pub struct ExpectArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Confidence levels for the normal-approximation sample sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [0.9, 0.95, 0.99])]
    pub levels: Vec<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Independent random streams; results depend on this, not on the machine.
    #[arg(long, default_value_t = DEFAULT_WORKERS)]
    pub workers: u32,
    #[arg(long, value_delimiter = ',', default_values_t = [0.9, 0.95, 0.99])]
    pub quantiles: Vec<f64>,
    /// Largest draw count with its own histogram bin [default: 64·m·k].
    #[arg(long)]
    pub ecdf_max: Option<u32>,
    /// Write the empirical CDF as `r,cdf` rows.
    #[arg(long)]
    pub ecdf_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Also compute Pr[ν > r] for r = 0..=RMAX.
    #[arg(long)]
    pub rmax: Option<usize>,
    /// Where the `r,survival` tail is written when --rmax is given.
    #[arg(long, default_value = "tail.csv")]
    pub tail_out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 10_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_WORKERS)]
    pub workers: u32,
    /// Directory receiving the CSV files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}
