//! mstars: Majorana star constellations, Berry phases of star loops, and the
//! two-mode boson sweep, from the command line.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical/tracking failure,
//! 4 empty result set. Log verbosity via the MSTARS_LOG environment variable.

mod commands;
mod formats;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    fn empty(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<majorana_stars::Error> for CliError {
    fn from(e: majorana_stars::Error) -> Self {
        use majorana_stars::Error::*;
        let code = match e {
            InvalidInput(_) | ZeroState | ResourceLimit { .. } | Classification(_) => 2,
            NumericalFailure { .. }
            | DegeneratePair { .. }
            | Discontinuity { .. }
            | TrackingFailure { .. }
            | UnmatchedLoop => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "mstars",
    about = "Majorana star constellations and Berry phases of star-loop trajectories",
    version
)]
struct Cli {
    /// Output directory for result files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the Majorana stars of a state file.
    Stars {
        /// State JSON: {"schema_version":1,"n":N,"amplitudes":[[re,im],...]}.
        #[arg(long)]
        input: PathBuf,
        /// Root-classification tolerance.
        #[arg(long, default_value_t = majorana_stars::stellar::DEFAULT_ROOT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Rebuild the amplitude vector from a stars file.
    State {
        #[arg(long)]
        input: PathBuf,
    },
    /// Normalization report: closed form, permanent oracle, and beta factors.
    Norm {
        /// State JSON input (mutually exclusive with --stars).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Stars JSON input (mutually exclusive with --state).
        #[arg(long)]
        stars: Option<PathBuf>,
    },
    /// Berry phase of a configured star loop, with the overlap-product oracle.
    Berry {
        /// Loop config JSON (kinds: dicke, coherent, samples).
        #[arg(long)]
        config: PathBuf,
        /// Override the configured step count.
        #[arg(long)]
        steps: Option<usize>,
        /// Also write a per-step star-position trace (trace.csv).
        #[arg(long)]
        trace: bool,
    },
    /// Berry-phase sweep of the two-mode boson model over lambda.
    BosonSweep {
        /// Sweep config JSON.
        #[arg(long)]
        config: PathBuf,
        /// Star-extraction tolerance.
        #[arg(long, default_value_t = majorana_stars::stellar::DEFAULT_ROOT_TOL)]
        tol: f64,
    },
    /// Entanglement measures of a state file.
    Entangle {
        #[arg(long)]
        input: PathBuf,
        /// Angular clustering tolerance for the diversity degree.
        #[arg(long, default_value_t = majorana_stars::entangle::DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Quick internal consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Stars { input, tol, format } => {
            let format = match format {
                OutputFormat::Csv => Format::Csv,
                OutputFormat::Json => Format::Json,
            };
            commands::cmd_stars(&input, &cli.out, tol, format)
        }
        Command::State { input } => commands::cmd_state(&input, &cli.out),
        Command::Norm { state, stars } => {
            commands::cmd_norm(state.as_deref(), stars.as_deref(), &cli.out)
        }
        Command::Berry {
            config,
            steps,
            trace,
        } => commands::cmd_berry(&config, &cli.out, steps, trace),
        Command::BosonSweep { config, tol } => commands::cmd_boson_sweep(&config, &cli.out, tol),
        Command::Entangle { input, cluster_tol } => {
            commands::cmd_entangle(&input, &cli.out, cluster_tol)
        }
        Command::Selftest { seed } => commands::cmd_selftest(seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("MSTARS_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
