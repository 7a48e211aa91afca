use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_COUNTEREXAMPLE_SHAPE: &str = r#"{"type":"ellipse","params":{"a":0.2,"b":0.1}}"#;
pub const DEFAULT_COUNTEREXAMPLE_KERNEL: &str =
    r#"{"type":"truncated_constant","params":{"c":1.0,"r0":1.0},"beta":2.0,"dim":2}"#;

#[derive(Debug, Parser)]
#[command(name = "nlmc", version, about = "Nonlocal mean curvature of bounded domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrability and degeneracy checks for a kernel
    KernelCheck(KernelCheckArgs),
    /// Curvature at evenly spaced boundary points
    Profile(ProfileArgs),
    /// Tangential derivative of the curvature along the boundary
    TangentDeriv(ProfileArgs),
    /// Critical planes, symmetric differences and the symmetry verdict
    MovingPlanes(MovingPlanesArgs),
    /// Closed form against quadrature for a small set and a flat kernel
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct KernelCheckArgs {
    /// Kernel spec: a JSON file or inline JSON
    #[arg(long)]
    pub kernel: String,
    /// Check with this beta instead of the one in the spec
    #[arg(long)]
    pub beta: Option<f64>,
    /// Plain text unless given
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PvArgs {
    /// Number of boundary points
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Relative tolerance of the principal-value limit
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Cap on the number of truncation radii
    #[arg(long, default_value_t = nlmc_core::curvature::DEFAULT_MAX_LEVELS)]
    pub max_levels: usize,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Shape spec: a JSON file or inline JSON
    #[arg(long)]
    pub shape: String,
    /// Kernel spec: a JSON file or inline JSON
    #[arg(long)]
    pub kernel: String,
    #[command(flatten)]
    pub pv: PvArgs,
    /// Recorded in the header; profiles use no randomness
    #[arg(long, default_value_t = nlmc_core::movingplanes::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MovingPlanesArgs {
    #[arg(long)]
    pub shape: String,
    /// Adds the curvature profile, deficits and the verdict
    #[arg(long)]
    pub kernel: Option<String>,
    /// Number of directions: evenly spaced in 2D, a Fibonacci lattice in 3D
    #[arg(long, default_value_t = 8)]
    pub dirs: usize,
    /// Curvature constancy tolerance (with --kernel)
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Boundary points of the curvature profile (with --kernel)
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Absolute tolerance on the critical position; default 1e-6 * diameter
    #[arg(long)]
    pub tol_lambda: Option<f64>,
    /// Monte-Carlo samples per symmetric difference
    #[arg(long, default_value_t = nlmc_core::movingplanes::DEFAULT_MC_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = nlmc_core::movingplanes::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value = DEFAULT_COUNTEREXAMPLE_SHAPE)]
    pub shape: String,
    #[arg(long, default_value = DEFAULT_COUNTEREXAMPLE_KERNEL)]
    pub kernel: String,
    #[command(flatten)]
    pub pv: PvArgs,
    #[arg(long, default_value_t = nlmc_core::movingplanes::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
