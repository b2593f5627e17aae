use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Charging dynamics of a geometry-controlled two-qubit quantum battery.
///
/// Rates and times are in units of gamma; energies, ergotropy and power in
/// units of omega0.
#[derive(Debug, Parser)]
#[command(name = "qbgeom", version, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output file; a `<out>.manifest.json` is written next to it
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Worker threads for sweeps
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for the validation ensemble
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Flat key = value config file; flags take precedence
    #[arg(long, global = true, env = "QBGEOM_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate one parameter set and write the battery trajectory
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Evaluate an observable over a two-dimensional grid
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Write the dataset behind one figure panel
    #[command(allow_negative_numbers = true)]
    Figure(FigureArgs),
    /// Run the invariant suite over a seeded parameter ensemble
    Validate(ValidateArgs),
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    #[arg(long)]
    pub omega0_over_gamma: Option<f64>,
    /// Detuning as a fraction of omega0
    #[arg(long, conflicts_with = "zeta_over_gamma")]
    pub zeta_over_omega0: Option<f64>,
    #[arg(long)]
    pub zeta_over_gamma: Option<f64>,
    /// Lorentzian half-width, the inverse memory time
    #[arg(long)]
    pub lambda_over_gamma: Option<f64>,
    /// Qubit separation in units of the resonant wavelength
    #[arg(long = "l-over-lambda0")]
    pub l_over_lambda0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Final time in units of 1/gamma
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of output time points, including t = 0
    #[arg(long)]
    pub steps: Option<usize>,
    /// analytic or numeric
    #[arg(long)]
    pub solver: Option<String>,
    /// augmented-rk4 or volterra-trapezoid (numeric solver only)
    #[arg(long)]
    pub scheme: Option<String>,
    /// Integrator step (numeric solver only)
    #[arg(long)]
    pub dt: Option<f64>,
}

/// Settings of the time-maximum search.
#[derive(Debug, Args, Default)]
pub struct MaximaArgs {
    /// Maximization window as a multiple of the memory time
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub samples_per_period: Option<f64>,
    #[arg(long)]
    pub min_time_points: Option<usize>,
    /// Keep raw grid maxima instead of polishing them
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// time-geometry or geometry-width
    #[arg(long)]
    pub mode: Option<String>,
    /// energy, ergotropy, power, max_energy, max_ergotropy or max_power
    #[arg(long)]
    pub observable: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub l_min: Option<f64>,
    #[arg(long)]
    pub l_max: Option<f64>,
    #[arg(long)]
    pub l_points: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
    /// linear or log
    #[arg(long)]
    pub t_spacing: Option<String>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_points: Option<usize>,
    /// linear or log
    #[arg(long)]
    pub lambda_spacing: Option<String>,
    #[command(flatten)]
    pub maxima: MaximaArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig2a, fig2b, fig3a, fig3b, fig4a, fig4b or fig4c
    pub name: String,
    /// Print a coarse character heatmap of the data
    #[arg(long)]
    pub ascii_preview: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub l_max: Option<f64>,
    #[arg(long)]
    pub l_points: Option<usize>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_points: Option<usize>,
    /// Time window of fig2/fig3 in units of the memory time
    #[arg(long)]
    pub lambda_t_max: Option<f64>,
    #[arg(long)]
    pub time_points: Option<usize>,
    #[command(flatten)]
    pub maxima: MaximaArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Random parameter sets in the ensemble
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// Horizon of the solver cross-check
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Deliberately break the solver under test
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}
