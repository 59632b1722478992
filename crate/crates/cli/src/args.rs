use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hpfg",
    version,
    about = "Solvers, exact success probabilities and dense simulation for the hidden polynomial function graph problem"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write results here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for every random choice.
    #[arg(long, global = true, env = "HPFG_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Which labels count toward the reported success probability.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    #[value(name = "full")]
    Full,
    #[value(name = "paper_restricted")]
    Restricted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Restricted => "paper_restricted",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    /// Closed form when one exists, otherwise brute force.
    Auto,
    Closed,
    Brute,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyChoice {
    Auto,
    Exhaustive,
    Split,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one system `sum_j b_j^i x_j = w_i`.
    Solve {
        #[arg(long)]
        p: u64,
        /// Number of equations; defaults to the length of `--w`.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        w: Vec<i64>,
        #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
        solver: SolverChoice,
    },
    /// Exact success probability for `n = k`, one row per prime.
    Success {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// One row per projective ray of labels instead of one per prime.
        #[arg(long)]
        per_x: bool,
    },
    /// Query-complexity, copy-count and closing success bounds.
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Number of variables of the hidden polynomial.
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
    /// Exhaustive closed-form solver check against enumeration.
    #[command(name = "verify-appendix")]
    VerifySolvers {
        #[arg(long, value_delimiter = ',', default_value = "7")]
        p: Vec<u64>,
        /// 3 checks every normalized cubic tuple, 2 every quadratic one.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = StrategyChoice::Auto)]
        strategy: StrategyChoice,
    },
    /// Largest solution count over good cubic labels.
    VerifyEta {
        #[arg(long, value_delimiter = ',', default_value = "7")]
        p: Vec<u64>,
    },
    /// Fidelity of two polynomial states, or the worst case over all pairs.
    Fidelity {
        #[arg(long)]
        p: u64,
        /// Coefficients `q_1, ..., q_n`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "q_tilde")]
        q: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "q")]
        q_tilde: Option<Vec<i64>>,
        /// Degree bound for the all-pairs scan.
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Classical two-query collision rate of the black box.
    Collision {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Count every query pair instead of sampling.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Dense pipeline against the combinatorial formulas on every label.
    Simulate {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Hidden coefficients; random from the seed when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Option<Vec<i64>>,
    },
    /// Sampled recovery runs against a seeded black box.
    EndToEnd {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 500)]
        repetitions: u64,
        /// Emit one row per repetition.
        #[arg(long)]
        transcript: bool,
    },
}
