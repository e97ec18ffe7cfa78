use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use robust_ensembles::optimize::DEFAULT_SEED;
use robust_ensembles::{Measure, Parameter};

#[derive(Parser, Debug)]
#[command(name = "robust-ensembles", version, about = "Maximally robust pure-state ensembles of a linearized laser model")]
pub struct Cli {
    /// key=value file supplying default flag values; explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Moments of one ensemble member at the given times
    Evolve(EvolveArgs),
    /// Survival probability and purity curves of an ensemble
    Survival(SurvivalArgs),
    /// Robustness time of one ensemble
    Tau(TauArgs),
    /// Most robust ensemble
    Optimize(OptimizeArgs),
    /// Optimize across a log-spaced range of one parameter
    Sweep(SweepArgs),
    /// Robustness time on a (gamma, beta) grid
    Contour(ContourArgs),
    /// Parameter value where the optimum leaves the coherent edge gamma = 1
    Transition(TransitionArgs),
    /// Regime conditions, asymptotic formulas and reference ensembles
    Report(ReportArgs),
}

pub const COMMANDS: [&str; 8] = ["evolve", "survival", "tau", "optimize", "sweep", "contour", "transition", "report"];

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureArg {
    Survival,
    Purity,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Survival => Measure::Survival,
            MeasureArg::Purity => Measure::Purity,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamArg {
    Chi,
    Nu,
    Lambda,
}

impl From<ParamArg> for Parameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Chi => Parameter::Chi,
            ParamArg::Nu => Parameter::Nu,
            ParamArg::Lambda => Parameter::Lambda,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    /// Serial, each point warm-started from the previous optimum
    Warm,
    /// Independent cold starts, in parallel
    Cold,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Self-interaction strength
    #[arg(long, default_value_t = 0.0)]
    pub chi: f64,
    /// Excess phase diffusion
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Survival-probability threshold
    #[arg(long, default_value_t = robust_ensembles::moments::DEFAULT_LAMBDA)]
    pub lambda: f64,
    /// Mean boson number (needed for regime checks)
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct EnsembleArgs {
    /// Initial amplitude-phase covariance
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Initial amplitude variance, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format (each command has its own default)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Leave the generation-time comment out of SVG output
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value_t = false, action = clap::ArgAction::Set)]
    pub no_timestamp: bool,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Member mean amplitude (SVG output also draws the mirror member and 0)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xbar: f64,
    /// Comma-separated evaluation times
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub times: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct SurvivalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Last sample time (default: three survival times)
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of samples
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct TauArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, value_enum, default_value = "survival")]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Restrict to physically realizable ensembles
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value_t = false, action = clap::ArgAction::Set)]
    pub constrained: bool,
    #[arg(long, value_enum, default_value = "survival")]
    pub measure: MeasureArg,
    /// Multistart seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub param: ParamArg,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Number of log-spaced values
    #[arg(long, default_value_t = 53)]
    pub points: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Fit power laws over the top decades of the sweep
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value_t = false, action = clap::ArgAction::Set)]
    pub fit: bool,
    /// Width of the fit window in decades
    #[arg(long, default_value_t = 2.0)]
    pub fit_decades: f64,
    #[arg(long, value_enum, default_value = "warm")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ContourArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "survival")]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 0.01)]
    pub gamma_from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma_to: f64,
    #[arg(long, default_value_t = 60)]
    pub gamma_points: usize,
    /// Log-space the gamma axis
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value_t = true, action = clap::ArgAction::Set)]
    pub gamma_log: bool,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub beta_from: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta_to: f64,
    #[arg(long, default_value_t = 81)]
    pub beta_points: usize,
    /// Colour bands in the SVG map
    #[arg(long, default_value_t = 12)]
    pub levels: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct TransitionArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub param: ParamArg,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Restrict to physically realizable ensembles
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value_t = false, action = clap::ArgAction::Set)]
    pub constrained: bool,
    #[arg(long, value_enum, default_value = "survival")]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ReportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}
