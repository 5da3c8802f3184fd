use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latentlab_core::datagen::{default_config, ExampleConfig};
use latentlab_core::datasets::{AxisUnit, SplitMode, TargetTransform};
use latentlab_core::evaluation::CsvLayout;
use latentlab_core::preprocessing::{snr_from_db, NoiseSpec};
use latentlab_core::regression::{Hyperparameters, Method};

#[derive(Debug, Parser)]
#[command(name = "latentlab", version, about = "Regularized and latent-variable regression on spectra-like data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the piecewise-linear example dataset as CSV.
    Generate(GenerateArgs),
    /// Split, fit and evaluate one model; prints the fit report.
    Fit(FitArgs),
    /// Repeat a fit over seeded splits and report coefficient spreads.
    Stability(StabilityArgs),
    /// Run the HTTP JSON API.
    Serve(ServeArgs),
    /// List the builtin stand-in datasets or export them as CSV.
    Standins(StandinsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ols,
    Lasso,
    Ridge,
    ElasticNet,
    Pcr,
    Pls,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ols => Method::Ols,
            MethodArg::Lasso => Method::Lasso,
            MethodArg::Ridge => Method::Ridge,
            MethodArg::ElasticNet => Method::ElasticNet,
            MethodArg::Pcr => Method::Pcr,
            MethodArg::Pls => Method::Pls,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Random,
    GroupedRandom,
    GroupedInterpolation,
    GroupedExtrapolation,
    ForcedTestGroups,
}

impl From<ModeArg> for SplitMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Random => SplitMode::Random,
            ModeArg::GroupedRandom => SplitMode::GroupedRandom,
            ModeArg::GroupedInterpolation => SplitMode::GroupedInterpolation,
            ModeArg::GroupedExtrapolation => SplitMode::GroupedExtrapolation,
            ModeArg::ForcedTestGroups => SplitMode::ForcedTestGroups,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Wavenumber,
    RamanShift,
    Voltage,
    Index,
}

impl From<UnitArg> for AxisUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Wavenumber => AxisUnit::Wavenumber,
            UnitArg::RamanShift => AxisUnit::RamanShift,
            UnitArg::Voltage => AxisUnit::Voltage,
            UnitArg::Index => AxisUnit::Index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Identity,
    Log10,
}

impl From<TransformArg> for TargetTransform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Identity => TargetTransform::Identity,
            TransformArg::Log10 => TargetTransform::Log10,
        }
    }
}

/// Noise flags shared by every data-producing command.
#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    /// Linear signal-to-noise ratio of added white Gaussian noise.
    #[arg(long, conflicts_with = "snr_db")]
    pub snr: Option<f64>,
    /// Same as --snr, in decibels.
    #[arg(long)]
    pub snr_db: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub noise_seed: u64,
}

impl NoiseArgs {
    pub fn spec(&self) -> Option<NoiseSpec> {
        let snr = self.snr.or(self.snr_db.map(snr_from_db))?;
        Some(NoiseSpec::new(snr, self.noise_seed))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExampleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mu_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_left: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_right: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_end: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_left: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_right: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_end: Option<f64>,
    #[arg(long)]
    pub n_experiments: Option<usize>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub relevant_start_index: Option<usize>,
    #[arg(long)]
    pub relevant_end_index: Option<usize>,
}

impl ExampleArgs {
    pub fn config(&self, seed: u64, noise: Option<NoiseSpec>) -> ExampleConfig {
        let d = default_config();
        ExampleConfig {
            mu_start: self.mu_start.unwrap_or(d.mu_start),
            mu_left: self.mu_left.unwrap_or(d.mu_left),
            mu_right: self.mu_right.unwrap_or(d.mu_right),
            mu_end: self.mu_end.unwrap_or(d.mu_end),
            sigma_start: self.sigma_start.unwrap_or(d.sigma_start),
            sigma_left: self.sigma_left.unwrap_or(d.sigma_left),
            sigma_right: self.sigma_right.unwrap_or(d.sigma_right),
            sigma_end: self.sigma_end.unwrap_or(d.sigma_end),
            n_experiments: self.n_experiments.unwrap_or(d.n_experiments),
            n_points: self.n_points.unwrap_or(d.n_points),
            relevant_start_index: self.relevant_start_index.unwrap_or(d.relevant_start_index),
            relevant_end_index: self.relevant_end_index.unwrap_or(d.relevant_end_index),
            noise,
            seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub example: ExampleArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; a `.meta.json` sidecar is written next to it. Stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exactly one of these selects the data.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// CSV file in the dataset schema.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Name of a builtin stand-in.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Generate the example dataset from the example flags.
    #[arg(long)]
    pub example: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub example: ExampleArgs,
    /// Seed of the generated example (with --example).
    #[arg(long, default_value_t = 0)]
    pub example_seed: u64,
    /// Feature-axis unit for --data without a sidecar.
    #[arg(long, value_enum)]
    pub feature_unit: Option<UnitArg>,
    /// Target transform for --data without a sidecar.
    #[arg(long, value_enum)]
    pub target_transform: Option<TransformArg>,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n_components: Option<usize>,
    #[arg(long)]
    pub standardize: bool,
}

impl ModelArgs {
    pub fn hyperparameters(&self) -> Hyperparameters {
        let d = Hyperparameters::default();
        Hyperparameters {
            lambda: self.lambda.unwrap_or(d.lambda),
            alpha: self.alpha.unwrap_or(d.alpha),
            n_components: self.n_components.unwrap_or(d.n_components),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0.7)]
    pub train_fraction: f64,
    /// Comma-separated group labels for forced-test-groups.
    #[arg(long, value_delimiter = ',')]
    pub forced_groups: Option<Vec<String>>,
    /// Split seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitFormat {
    Json,
    PredictionsCsv,
    CoefficientsCsv,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FitFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Wide,
    Long,
}

impl From<LayoutArg> for CsvLayout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Wide => CsvLayout::Wide,
            LayoutArg::Long => CsvLayout::Long,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StabilityFormat {
    Csv,
    SpreadCsv,
    Json,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, value_enum, default_value = "wide")]
    pub layout: LayoutArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: StabilityFormat,
    /// Run repeats one after another.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "LATENTLAB_BIND", default_value = "127.0.0.1")]
    pub bind: IpAddr,
    /// 0 picks a free port; the chosen address is printed.
    #[arg(long, env = "LATENTLAB_PORT", default_value_t = 8080)]
    pub port: u16,
    /// Maximum request body in bytes.
    #[arg(long, env = "LATENTLAB_UPLOAD_LIMIT", default_value_t = 32 * 1024 * 1024)]
    pub upload_limit: usize,
    /// Idle seconds before an uploaded or generated dataset expires.
    #[arg(long, env = "LATENTLAB_HANDLE_TTL", default_value_t = 3600)]
    pub handle_ttl: u64,
    #[arg(long, env = "LATENTLAB_CORS_ORIGIN")]
    pub cors_origin: Option<String>,
}

#[derive(Debug, Args)]
pub struct StandinsArgs {
    /// Write `<name>.csv` plus sidecar for every stand-in into this directory.
    #[arg(long)]
    pub export: Option<PathBuf>,
}
