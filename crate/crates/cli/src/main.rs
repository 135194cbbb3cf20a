//! `bellsim`: generate the four-dimensional Bell basis, verify the cyclic
//! gate interferometers, sweep the 16-state experiment, certify
//! entanglement dimensionality, and run the dense-coding demo.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bellsim_core::optics::Recombination;

/// Exit codes: 0 success, 1 usage, 2 configuration, 3 verification failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Verification(m) => m,
        }
    }
}

/// Map a core error onto an exit class: window/routing problems come from
/// the run configuration, structural failures from verification.
pub fn classify(err: bellsim_core::Error) -> CliError {
    use bellsim_core::Error as E;
    match err {
        E::WindowOverflow { .. } | E::RoutingConflict { .. } => CliError::Config(err.to_string()),
        E::StructuralFailure(_) => CliError::Verification(err.to_string()),
        E::InvalidParameter(_) => CliError::Usage(err.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

pub fn io_error(err: std::io::Error) -> CliError {
    CliError::Config(format!("i/o error: {err}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RecombinationArg {
    #[default]
    Probabilistic,
    Deterministic,
}

impl From<RecombinationArg> for Recombination {
    fn from(value: RecombinationArg) -> Self {
        match value {
            RecombinationArg::Probabilistic => Recombination::Probabilistic,
            RecombinationArg::Deterministic => Recombination::Deterministic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FormatArg {
    #[default]
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "bellsim",
    version,
    about = "Simulator for the complete four-dimensional OAM Bell basis"
)]
struct Cli {
    /// Master seed; every command is bit-reproducible given the same seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write all D^2 Bell states, their symmetry census, and the overlap matrix.
    Basis {
        /// Hilbert space dimension per photon (2..=8).
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Lowest OAM label of the window (default: -(dim/2)).
        #[arg(long, allow_hyphen_values = true)]
        lowest_oam: Option<i32>,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the X, X^2, X^dagger interferometers and verify them against
    /// the abstract cyclic gates.
    VerifyGates {
        #[arg(long, value_enum, default_value_t)]
        recombination: RecombinationArg,
        /// OAM window as LO..HI (needs at least -3..3).
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        window: String,
        /// Interferometer arm detuning in units of pi.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        trim_phase: f64,
    },
    /// Run one configuration or the full 16-state sweep; write JSON results
    /// and the four overlap tables.
    Experiment {
        /// Sweep all 16 (m, n) configurations.
        #[arg(long)]
        all16: bool,
        /// JSON config file (single run).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Cyclic gate on photon B (single run).
        #[arg(long)]
        gate: Option<String>,
        /// Dove prism angle on photon A, in units of pi (single run).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Noise budget: "none", "paper", or a JSON file path.
        #[arg(long)]
        noise: Option<String>,
        /// Expected coincidences per setting; enables count simulation.
        #[arg(long)]
        counts: Option<f64>,
        /// Monte Carlo replicas for the standard error.
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
        #[arg(long, value_enum, default_value_t)]
        recombination: RecombinationArg,
        /// Print overlap tables with comma decimals.
        #[arg(long)]
        appendix_style: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify the entanglement dimensionality of one generated state.
    Witness {
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        noise: Option<String>,
        #[arg(long)]
        counts: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense-coding demo: 16-message confusion matrix and channel capacity.
    DenseCode {
        #[arg(long)]
        noise: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the cross-talk fraction that reproduces a fidelity ceiling.
    NoiseFit {
        #[arg(long)]
        target_fidelity: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let seed = cli.seed;
    let result = match cli.command {
        Command::Basis {
            dim,
            lowest_oam,
            format,
            out,
        } => commands::basis::run(dim, lowest_oam, format, &out, seed),
        Command::VerifyGates {
            recombination,
            window,
            trim_phase,
        } => commands::verify_gates::run(recombination.into(), &window, trim_phase),
        Command::Experiment {
            all16,
            config,
            gate,
            alpha,
            noise,
            counts,
            replicas,
            recombination,
            appendix_style,
            out,
        } => commands::experiment::run(commands::experiment::Args {
            all16,
            config,
            gate,
            alpha,
            noise,
            counts,
            replicas,
            recombination: recombination.into(),
            appendix_style,
            out,
            seed,
        }),
        Command::Witness {
            m,
            n,
            noise,
            counts,
            replicas,
            out,
        } => commands::witness::run(m, n, noise, counts, replicas, out, seed),
        Command::DenseCode { noise, out } => commands::dense_code::run(noise, &out, seed),
        Command::NoiseFit { target_fidelity } => commands::noise_fit::run(target_fidelity),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
