use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod sweep;

use output::CliError;

#[derive(Parser, Debug)]
#[command(name = "ppdlab", version, about = "Positive positive-definite functions on finite abelian groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// arithmetic for group computations
    #[arg(long, value_enum, default_value_t = ModeArg::Exact, global = true)]
    pub mode: ModeArg,
    /// equality tolerance in float mode
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// largest group order considered
    #[arg(long, global = true)]
    pub max_order: Option<usize>,
    /// report file, stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// hard cap on every order bound
    #[arg(long = "order-cap", env = "PPDLAB_MAX_ORDER", hide = true, global = true)]
    pub order_cap: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussianCheck {
    Transform,
    Corestriction,
    Goodness,
    Counterexample,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verdict for a function file
    Check {
        file: PathBuf,
        #[arg(long, conflicts_with = "good")]
        ppd: bool,
        #[arg(long)]
        good: bool,
    },
    /// Randomized consistency sweep over all groups up to the order bound
    Sweep {
        /// comma separated group literals instead of every group up to the bound
        #[arg(long)]
        groups: Option<String>,
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
    /// Inequalities, extremal rays, self-duality and field report of one cone
    Cone {
        group: String,
        /// list every ray in the report
        #[arg(long)]
        rays: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cone summaries for every group up to the order bound
    ConeAtlas {
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Restriction of a good function to a subgroup
    Restrict {
        file: PathBuf,
        /// generators such as "2" or "1,0;0,1"
        #[arg(long)]
        subgroup: String,
    },
    /// Corestriction of a good function to the quotient by a subgroup
    Corestrict {
        file: PathBuf,
        #[arg(long)]
        subgroup: String,
    },
    /// Pointwise or external product of two functions
    Product {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        external: bool,
    },
    /// Convolution of two measure files
    Convolve { first: PathBuf, second: PathBuf },
    /// Numeric probes for Gaussians on R^n
    Gaussian {
        /// rows separated by ';', entries by ','
        #[arg(long)]
        form: Option<String>,
        #[arg(long, value_enum, default_value_t = GaussianCheck::Transform)]
        check: GaussianCheck,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// partial sum length for the counterexample series
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Agreement of the two corestriction routes for every subgroup
    #[command(name = "verify-4-1")]
    Verify41 {
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

impl Global {
    pub fn order_bound(&self, default: usize) -> usize {
        let b = self.max_order.unwrap_or(default);
        self.order_cap.map_or(b, |c| b.min(c))
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.global.validate().and_then(|()| commands::run(&cli));
    match result {
        Ok(report) => match output::emit(&cli.global, &report) {
            Ok(()) => ExitCode::from(if report.ok { 0 } else { 1 }),
            Err(e) => {
                eprintln!("ppdlab: {e}");
                ExitCode::from(e.code())
            }
        },
        Err(e) => {
            eprintln!("ppdlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
