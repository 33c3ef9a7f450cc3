//! `absfef`: absolute fully entangled fraction from the command line.

mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use absfef::matcore::BasisKind;
use absfef::FixtureId;
use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{Global, ScanArgs, StateSource, WitnessArgs};
use crate::error::{CliResult, Exit};
use crate::input::FamilyParams;

#[derive(Debug, Parser)]
#[command(
    name = "absfef",
    version,
    about = "Absolute fully entangled fraction of bipartite qudit states"
)]
struct Cli {
    /// Seed for every randomized routine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Optimizer restarts (default 20 for qubits, 60 for qutrits).
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Optimizer tolerance on the FEF value.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    Pauli,
    Gellmann,
    Polarization,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Pauli => BasisKind::Pauli,
            BasisArg::Gellmann => BasisKind::GellMann,
            BasisArg::Polarization => BasisKind::Polarization,
        }
    }
}

fn parse_fixture(s: &str) -> Result<FixtureId, String> {
    FixtureId::parse(s)
        .ok_or_else(|| format!("unknown fixture unitary {s:?}; expected U1, U2 or U3"))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum, membership, FEF and classification of one state.
    Analyze {
        /// Named state family (x1, x2, y3, isotropic, iso2, iso3, comp_diag,
        /// bell_diag, ghz, w, af_not_as_example, max_entangled, ghzw, three_qutrit).
        #[arg(long)]
        family: Option<String>,
        /// State file: {"dims": [a, b], "matrix": [[[re, im], ...], ...]}.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// The pulled-back teleportation witness U†WU and its basis expansion.
    Witness {
        /// Unitary file: {"matrix": [[[re, im], ...], ...]}.
        #[arg(long)]
        unitary: Option<PathBuf>,
        /// Built-in unitary U1, U2 or U3.
        #[arg(long, value_parser = parse_fixture)]
        fixture_unitary: Option<FixtureId>,
        /// State family to evaluate on (and to activate when no unitary is given).
        #[arg(long)]
        state: Option<String>,
        /// State file to evaluate on.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Local operator basis for the expansion (default by dimension).
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Classify a family over a parameter grid and write CSV.
    Scan {
        #[arg(long)]
        family: String,
        /// Parameter to sweep: q, beta, p or alpha.
        #[arg(long)]
        param: String,
        /// Grid start:stop:step (ratios p/q allowed).
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// CSV destination (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Purity thresholds of the absolute set in d⊗d.
    Bounds {
        #[arg(long)]
        d: usize,
        /// Random moves per numeric search.
        #[arg(long, default_value_t = 4000)]
        grid: usize,
    },
    /// Recompute every worked-example value and compare.
    Reproduce,
}

fn run(cli: Cli) -> CliResult<Exit> {
    let g = Global {
        seed: cli.seed,
        restarts: cli.restarts,
        tol: cli.tol,
        json: cli.json,
    };
    match cli.command {
        Command::Analyze {
            family,
            input,
            params,
        } => commands::analyze(
            &StateSource {
                family,
                input,
                params,
            },
            &g,
        ),
        Command::Witness {
            unitary,
            fixture_unitary,
            state,
            input,
            basis,
            params,
        } => {
            let args = WitnessArgs {
                state: StateSource {
                    family: state,
                    input,
                    params,
                },
                unitary,
                fixture: fixture_unitary,
                basis: basis.map(Into::into),
            };
            commands::witness(&args, &g)
        }
        Command::Scan {
            family,
            param,
            range,
            output,
            params,
        } => commands::scan(
            &ScanArgs {
                family,
                param,
                range,
                output,
                params,
            },
            &g,
        ),
        Command::Bounds { d, grid } => commands::bounds(d, grid, &g),
        Command::Reproduce => commands::reproduce(&g),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
