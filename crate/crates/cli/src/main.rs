mod commands;
mod demo;
mod input;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};

use schur_order::numeric::Tolerances;
use schur_order::schur::SamplingGrid;

use report::{Format, Report};

/// Exit code 3: malformed input, bad flags, unwritable paths.
#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub const INPUT_ERROR: u8 = 3;

pub struct Config {
    pub tol: Tolerances,
    pub grid: SamplingGrid,
    pub seed: u64,
}

#[derive(Parser)]
#[command(name = "schur-order", version, about = "Pre-order certificates for contractions, Schur functions and Redheffer maps")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_psd: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_rank: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_residual: f64,
    /// Comma-separated sampling radii in [0, 1); default 1 - 2^-j, j = 1..10.
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, global = true, default_value_t = 64)]
    angles: usize,
    #[arg(long, global = true, default_value_t = 256)]
    boundary_angles: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Decide A ≺ B or A ∼ B for matrices, or gather evidence for functions.
    Check {
        #[arg(long, value_enum, default_value_t = commands::Mode::Preceq)]
        mode: commands::Mode,
        #[arg(long = "a", visible_alias = "f")]
        a: String,
        #[arg(long = "b", visible_alias = "g")]
        b: String,
    },
    /// Pointwise witness profile of F ≺ G over the grid.
    Profile {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Write the profile CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Apply a Redheffer map, or transport a witness through it.
    Redheffer {
        #[arg(long, value_enum, default_value_t = commands::RedhefferMode::Apply)]
        mode: commands::RedhefferMode,
        /// Block JSON, `family:d1,d2,..`, or a constant matrix with --split.
        #[arg(long)]
        phi: String,
        /// Row and column split E,E' of a constant coefficient matrix.
        #[arg(long)]
        split: Option<String>,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: Option<String>,
    },
    /// Run a scripted example: cor23, ex24, ex216, ex35, thm03, thm04, prop38.
    Demo {
        name: String,
        /// Diagonal entries for ex35.
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
    },
    Version,
}

fn config(g: &GlobalArgs) -> Result<Config, CliError> {
    let tol = Tolerances::new(g.tol_psd, g.tol_rank, g.tol_residual).map_err(|e| CliError::input(e.to_string()))?;
    let grid = match &g.radii {
        Some(r) => SamplingGrid::new(r.clone(), g.angles, g.boundary_angles),
        None => SamplingGrid::geometric(10, g.angles, g.boundary_angles),
    }
    .map_err(|e| CliError::input(e.to_string()))?;
    Ok(Config { tol, grid, seed: g.seed })
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let cfg = config(&cli.global)?;
    match cli.command {
        Command::Check { mode, a, b } => commands::check(&cfg, mode, &a, &b),
        Command::Profile { f, g, csv } => commands::profile(&cfg, &f, &g, csv.as_deref(), cli.global.format),
        Command::Redheffer { mode, phi, split, f, g } => {
            commands::redheffer(&cfg, mode, &phi, split.as_deref(), &f, g.as_deref())
        }
        Command::Demo { name, deltas } => demo::run(&cfg, &name, deltas),
        Command::Version => Ok(Report::new("version", report::Status::Success, env!("CARGO_PKG_VERSION"))
            .with("name", env!("CARGO_PKG_NAME"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(INPUT_ERROR),
            };
        }
    };
    let format = cli.global.format;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
