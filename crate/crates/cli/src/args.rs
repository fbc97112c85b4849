use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "reachkit", version, about = "Sample, estimate and certify sets with positive reach")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a fixture point cloud as CSV.
    Generate(GenerateArgs),
    /// Estimate the reach of a point cloud.
    Reach(ReachArgs),
    /// Label every point with its tangent dimension and span flag.
    Stratify(StratifyArgs),
    /// Gap distance between two subspaces given by spanning vectors.
    Gap(IoArgs),
    /// Fullness of a simplex.
    Fullness(IoArgs),
    /// Product integrals of atomic interval functions.
    Prodint(ProdintArgs),
    /// Empirical Lipschitz constant of a tangent field against a named bound.
    Lipcheck(LipcheckArgs),
    /// Least constant of the first-order Whitney conditions.
    Whitney(WhitneyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Defaults to standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    Circle,
    Sphere,
    Segment,
    Doubleton,
    Polygon,
    Disk,
    Bset,
    Multirotate,
    ExampleM,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub fixture: Fixture,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Ambient dimension of segments and B-sets.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Half the separation of the doubleton.
    #[arg(long, default_value_t = 0.3)]
    pub h: f64,
    #[arg(long, default_value_t = 6)]
    pub sides: usize,
    #[arg(long, default_value_t = 0.02)]
    pub grid_step: f64,
    /// JSON spec (B-set, multirotation or example M).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Cloud to multirotate.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Federer,
    Midpoint,
    Projection,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    /// Neighborhood radius; defaults to 4 × median spacing.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, default_value_t = reachkit_core::tangent::DEFAULT_TAU_RANK)]
    pub tau_rank: f64,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(short, long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub scale: ScaleArgs,
    /// Smallest pair distance considered; defaults to 3 × median spacing.
    #[arg(long)]
    pub h_min: Option<f64>,
    /// Midpoint coverage radius; defaults to ½·√d × median spacing.
    #[arg(long)]
    pub eps_zero: Option<f64>,
    #[arg(long, default_value_t = 50000)]
    pub probes: usize,
    /// Radius grid step of the projection estimator.
    #[arg(long, default_value_t = 0.02)]
    pub grid_step: f64,
    /// Largest grid radius; defaults to the longest side of the bounding box.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Offset of the projection probe sequence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct StratifyArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long, default_value_t = reachkit_core::tangent::DEFAULT_TAU_LINE)]
    pub tau_line: f64,
    /// Dimension of the sampled set; points estimated above it are reported on stderr.
    #[arg(long)]
    pub declared_dim: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProdintArgs {
    #[command(subcommand)]
    pub action: ProdintAction,
}

#[derive(Debug, Subcommand)]
pub enum ProdintAction {
    /// Evaluate the product integral over (s, t].
    Eval(ProdintRange),
    /// Evaluate the domination bound over (s, t].
    Bound(ProdintRange),
}

#[derive(Debug, Args)]
pub struct ProdintRange {
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Use ordered products over cells of this width instead of the atoms.
    #[arg(long)]
    pub mesh: Option<f64>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantName {
    #[value(name = "psi1_bound")]
    Psi1Bound,
    #[value(name = "L_k_theta_r")]
    LKThetaR,
    #[value(name = "Ltilde_k_theta_r")]
    LTildeKThetaR,
    #[value(name = "psi2_special")]
    Psi2Special,
}

#[derive(Debug, Args)]
pub struct LipcheckArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Tangent dimension of the stratum.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub constant: ConstantName,
    #[arg(long, default_value_t = 0.25)]
    pub theta: f64,
    /// Reach used in the constant; defaults to the federer estimate.
    #[arg(long)]
    pub r: Option<f64>,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long, default_value_t = reachkit_core::tangent::DEFAULT_TAU_LINE)]
    pub tau_line: f64,
    #[arg(long)]
    pub h_min: Option<f64>,
    #[arg(long, default_value_t = reachkit_core::lipschitz::DEFAULT_SLACK)]
    pub slack: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct WhitneyArgs {
    /// Whitney data JSON, or a cloud CSV when `--stratum` is given.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Build the data over the stratum of this tangent dimension.
    #[arg(long)]
    pub stratum: Option<usize>,
    /// Cloud index of the base point (defaults to the first stratum point).
    #[arg(long)]
    pub base: Option<usize>,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long, default_value_t = reachkit_core::tangent::DEFAULT_TAU_LINE)]
    pub tau_line: f64,
    #[arg(long)]
    pub h_min: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}
