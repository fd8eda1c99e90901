//! `wiretap`: batch front end for theta series, secrecy gain, coset codes
//! and wiretap-channel simulation.
//!
//! Exit status is 0 on success, 2 for invalid input and 3 when a
//! computation is refused by a resource cap. Failures print a JSON object
//! `{"error": {"kind", "message", "exit_code"}}` on stderr.

mod commands;
mod error;
mod format;
mod select;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Grid, Labeling, QuotientSel, SimArgs};
use error::{CliError, CliResult};
use select::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
}

#[derive(Args)]
struct ThetaOpts {
    /// Zn:<n>, Dn:<n>, E8, E8A, Leech, <a>*<name> or a generator-matrix file.
    #[arg(long)]
    lattice: String,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Absolute truncation tolerance of enumerated theta series.
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    tol: f64,
}

#[derive(Args)]
struct GridOpts {
    /// Evaluate at this single point instead of a grid.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long, default_value_t = 0.0625, allow_hyphen_values = true)]
    y_min: f64,
    #[arg(long, default_value_t = 16.0, allow_hyphen_values = true)]
    y_max: f64,
    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 64)]
    points: usize,
}

impl GridOpts {
    fn grid(&self) -> Grid {
        Grid { y: self.y, y_min: self.y_min, y_max: self.y_max, points: self.points }
    }
}

#[derive(Args)]
struct PairOpts {
    #[arg(long)]
    lattice_b: String,
    #[arg(long)]
    lattice_e: String,
    #[arg(long, value_enum, default_value = "canonical")]
    labeling: Labeling,
}

impl PairOpts {
    fn sel(&self) -> QuotientSel<'_> {
        QuotientSel { lattice_b: &self.lattice_b, lattice_e: &self.lattice_e, labeling: self.labeling }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Theta series Θ(y) of one lattice.
    Theta {
        #[command(flatten)]
        theta: ThetaOpts,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
    /// Secrecy function on a log grid (CSV y,theta_lattice,theta_Zn,xi).
    SecrecyFunction {
        #[command(flatten)]
        theta: ThetaOpts,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Maximum of the secrecy function over [y-min, y-max].
    SecrecyGain {
        #[command(flatten)]
        theta: ThetaOpts,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Index, invariant factors and rate of lattice-b / lattice-e.
    Quotient {
        #[command(flatten)]
        pair: PairOpts,
        /// Dump every (label_bits, representative) pair instead.
        #[arg(long)]
        codebook: bool,
    },
    /// x = r + c for a bit label and a random sublattice point r.
    Encode {
        #[command(flatten)]
        pair: PairOpts,
        #[arg(long)]
        bits: String,
        /// Coordinates of r (comma separated); drawn from the window when absent.
        #[arg(long, allow_hyphen_values = true)]
        r_coords: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        window: u32,
    },
    /// Closest lattice-b point of a received vector and its bit label.
    Decode {
        #[command(flatten)]
        pair: PairOpts,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        received: String,
    },
    /// Monte Carlo of Bob's and Eve's decisions; a list of sigma-e values
    /// gives the sweep CSV sigma_e,p_mc,stderr,p_approx.
    Simulate {
        #[command(flatten)]
        pair: PairOpts,
        #[arg(long, allow_hyphen_values = true)]
        sigma_b: f64,
        /// One value or a comma-separated list.
        #[arg(long, allow_hyphen_values = true)]
        sigma_e: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        window: u32,
        /// Truncation tolerance of the theta sum in the approximation.
        #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
        tol: f64,
    },
    /// The E8 / 2E8 Reed-Muller example: x = c + 2l + 2c' + 4z.
    E8Demo {
        /// 8 information bits.
        #[arg(long)]
        bits: String,
        /// 4 random code bits; drawn from the seed when absent.
        #[arg(long)]
        code_bits: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        window: u32,
    },
}

#[derive(Parser)]
#[command(name = "wiretap", version, about = "Lattice coset codes for the Gaussian wiretap channel")]
struct Top {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
}

fn run(top: Top) -> CliResult<()> {
    let fmt = top.output.format;
    let json_default = fmt.unwrap_or(Format::Json);
    let text = match &top.command {
        Command::Theta { theta, y } => commands::theta(&theta.lattice, *y, theta.method, theta.tol, json_default)?,
        Command::SecrecyFunction { theta, grid } => {
            commands::secrecy_function(&theta.lattice, &grid.grid(), theta.method, theta.tol, fmt.unwrap_or(Format::Csv))?
        }
        Command::SecrecyGain { theta, grid } => {
            commands::secrecy_gain_cmd(&theta.lattice, &grid.grid(), theta.method, theta.tol, json_default)?
        }
        Command::Quotient { pair, codebook } => commands::quotient(&pair.sel(), *codebook, json_default)?,
        Command::Encode { pair, bits, r_coords, seed, window } => {
            commands::encode(&pair.sel(), bits, r_coords.as_deref(), *seed, *window, json_default)?
        }
        Command::Decode { pair, received } => commands::decode(&pair.sel(), received, json_default)?,
        Command::Simulate { pair, sigma_b, sigma_e, trials, seed, window, tol } => {
            let args = SimArgs { sigma_b: *sigma_b, sigma_e, trials: *trials, seed: *seed, window: *window, tol: *tol };
            commands::simulate(&pair.sel(), &args, fmt)?
        }
        Command::E8Demo { bits, code_bits, seed, window } => {
            commands::e8_demo(bits, code_bits.as_deref(), *seed, *window, json_default)?
        }
    };
    match &top.output.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let top = match Top::try_parse() {
        Ok(top) => top,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let err = CliError::Usage(first);
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(top) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
