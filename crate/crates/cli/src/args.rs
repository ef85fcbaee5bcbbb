use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "tracpf",
    version,
    about = "DC power flow and supply-limit search for traction networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One Newton solve at a fixed demand scaling.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Demand scaling in [0, 1].
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Find the largest supportable demand scaling.
    Search {
        #[command(flatten)]
        input: InputArgs,
        /// Use the incremental grid walk instead of bisection.
        #[arg(long, conflicts_with = "strategy")]
        basic: bool,
        /// Search strategy by name.
        #[arg(long)]
        strategy: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Newton over a uniform alpha grid with Jacobian condition numbers.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Number of evenly spaced points on [0, 1].
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Start every point from the initial guess and run in parallel.
        #[arg(long)]
        cold: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print a built-in circuit as a netlist, or list them.
    Scenario {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single vehicle driving a straight route fed from one end.
    Timeline {
        #[arg(long, default_value_t = 8000.0)]
        route_length: f64,
        #[arg(long, default_value_t = 200.0)]
        spacing: f64,
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        /// Park the vehicle at every intersection with this demand (W)
        /// instead of driving.
        #[arg(long)]
        constant_power: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Search, then confirm Newton converges on a grid over [0, alpha].
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Netlist file (JSON).
    pub netlist: Option<PathBuf>,
    /// Built-in circuit instead of a file.
    #[arg(long)]
    pub scenario: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub delta_con: Option<f64>,
    #[arg(long)]
    pub delta_opt: Option<f64>,
    #[arg(long)]
    pub delta_act: Option<f64>,
    #[arg(long)]
    pub c_bi: Option<f64>,
    /// Initial Newton iteration budget.
    #[arg(long)]
    pub max_nr: Option<usize>,
    #[arg(long)]
    pub delta_alpha: Option<f64>,
    #[arg(long)]
    pub max_outer: Option<usize>,
    /// auto, dense-lu or sparse-lu.
    #[arg(long)]
    pub linear_solver: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
