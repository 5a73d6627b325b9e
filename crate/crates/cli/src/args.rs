use clap::{Args, Parser, Subcommand, ValueEnum};
use lllsample::{Mode, SampleFormat};

#[derive(Debug, Parser)]
#[command(
    name = "lllsample",
    version,
    about = "Near-uniform sampling of atomic CSP solutions by projected Glauber dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect the instance class, print its statistics and check its regime.
    Check(CheckArgs),
    /// Build a projection scheme and print it with its entropy summary.
    Project(ProjectArgs),
    /// Draw samples.
    Sample(SampleArgs),
    /// Compare the sampler against brute-force enumeration.
    Verify(VerifyArgs),
    /// Time Glauber steps over an instance sweep and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Forced,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Forced => Mode::Forced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Lines,
    Json,
}

impl From<OutputArg> for SampleFormat {
    fn from(o: OutputArg) -> Self {
        match o {
            OutputArg::Lines => SampleFormat::Lines,
            OutputArg::Json => SampleFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance file (DIMACS cnf, hyp or acsp); '-' reads stdin.
    #[arg(default_value = "-")]
    pub input: String,
}

#[derive(Debug, Args)]
pub struct ProjectionArgs {
    /// Upper entropy ratio; defaults to the class value.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lower entropy ratio; defaults to the class value.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Scheme file with an "s s_1 ... s_n" line; built automatically if absent.
    #[arg(long)]
    pub scheme: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Target total-variation distance.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Regime slack; defaults to the class maximum.
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Trial-cap exponent override (forced mode only).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Number of Glauber steps.
    #[arg(long = "T", value_name = "T")]
    pub steps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Worker threads for independent chains.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Construction fails with probability at most eps/4.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub projection: ProjectionArgs,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Number of independent samples.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = OutputArg::Lines)]
    pub output: OutputArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub projection: ProjectionArgs,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Draws per distribution-level check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Projected states conditioned on in the inverse-sampler check.
    #[arg(long, default_value_t = 5)]
    pub conditionings: usize,
    /// Enumeration budget in search nodes.
    #[arg(long, default_value_t = lllsample::oracle::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance to time; without one a built-in sweep of regular 20-CNF runs.
    pub input: Option<String>,
    /// Glauber steps per instance.
    #[arg(long = "T", value_name = "T", default_value_t = 20_000)]
    pub steps: u64,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
