//! `mzi`: simulations, fits, thermal models and tomography for thermally
//! tuned Mach-Zehnder interferometers, driven from a TOML device file.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod config;
pub mod error;
pub mod output;
pub mod units;

mod commands;

use config::DeviceConfig;
use error::{CliError, CliResult};
use output::OutDir;
use units::Quantity;

#[derive(Debug, Parser)]
#[command(name = "mzi", version, about = "Thermally tuned Mach-Zehnder interferometer toolkit")]
pub struct Cli {
    /// Device file (TOML). Built-in single-heater device if omitted.
    #[arg(long, global = true, env = "MZI_CONFIG")]
    pub config: Option<PathBuf>,
    /// Directory for CSV outputs and reports.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Seed of the random generator behind every noisy simulation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Forward simulations.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Parameter estimation from measured data.
    #[command(subcommand)]
    Fit(FitCmd),
    /// Heater models.
    #[command(subcommand)]
    Thermal(ThermalCmd),
    /// Unitary reconstruction.
    #[command(subcommand)]
    Tomo(TomoCmd),
}

fn quantity(s: &str) -> Result<Quantity, String> {
    Quantity::parse(s)
}

#[derive(Debug, Args)]
pub struct Sweep {
    /// Heater driven during the sweep.
    #[arg(long, default_value_t = 0)]
    pub heater: usize,
    #[arg(long, default_value = "0", value_parser = quantity, allow_hyphen_values = true)]
    pub from: Quantity,
    #[arg(long, default_value = "0.5", value_parser = quantity, allow_hyphen_values = true)]
    pub to: Quantity,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCmd {
    /// Classical fringe of both outputs against heater power or voltage.
    Fringe {
        #[command(flatten)]
        sweep: Sweep,
        /// Control variable written to the scan: W or V.
        #[arg(long, default_value = "W")]
        unit: String,
        #[arg(long, default_value_t = 1.0)]
        visibility: f64,
        /// Summed intensity of the two outputs.
        #[arg(long, default_value_t = 1.0)]
        i_tot: f64,
        /// Gaussian noise on each reading, relative to `i_tot`.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Record output 1 only.
        #[arg(long)]
        single_output: bool,
    },
    /// Two-photon |1,1> input: coincidence and bunched fringes.
    Noon {
        #[command(flatten)]
        sweep: Sweep,
        /// Relative photon delay.
        #[arg(long, default_value = "0", value_parser = quantity, allow_hyphen_values = true)]
        delay: Quantity,
        /// Detection efficiency of bunched events relative to coincidences.
        #[arg(long, default_value_t = 0.5)]
        bunched_efficiency: f64,
    },
    /// Coincidence probability against photon delay at a fixed phase.
    Hom {
        /// Interferometer phase; defaults to the balanced point pi/2.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[arg(long, default_value = "-1 ps", value_parser = quantity, allow_hyphen_values = true)]
        from: Quantity,
        #[arg(long, default_value = "1 ps", value_parser = quantity, allow_hyphen_values = true)]
        to: Quantity,
        #[arg(long, default_value_t = 81)]
        points: usize,
    },
    /// Phase after a heater voltage step.
    Step {
        #[arg(long, default_value_t = 1.213, allow_hyphen_values = true)]
        phi_initial: f64,
        #[arg(long, default_value_t = 1.859, allow_hyphen_values = true)]
        phi_final: f64,
        #[arg(long, default_value = "5 s", value_parser = quantity)]
        duration: Quantity,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FitCmd {
    /// Fringe model to a scan CSV (`control,unit,out1,out2[,acc1,acc2]`).
    Fringe {
        scan: PathBuf,
        /// Heater whose resistances convert a voltage scan to power.
        #[arg(long, default_value_t = 0)]
        heater: usize,
        /// Fit readings minus the accidental columns.
        #[arg(long)]
        subtract_accidentals: bool,
    },
    /// Cross-talk plane to `p1,...,pk,phi` samples.
    Plane { samples: PathBuf },
    /// Stability of a `t,phi` series (seconds, rad).
    Stability {
        series: PathBuf,
        /// Unwrap the phases before the analysis.
        #[arg(long)]
        wrapped: bool,
    },
}

#[derive(Debug, Args)]
pub struct Drive {
    #[arg(long, default_value_t = 0)]
    pub heater: usize,
    /// Dissipated heater power.
    #[arg(long, value_parser = quantity, conflicts_with = "temperature")]
    pub power: Option<Quantity>,
    /// Heater surface temperature instead of a power.
    #[arg(long, value_parser = quantity)]
    pub temperature: Option<Quantity>,
}

#[derive(Debug, Subcommand)]
pub enum ThermalCmd {
    /// Steady-state temperature of the chip cross-section.
    Solve {
        #[command(flatten)]
        drive: Drive,
    },
    /// Finite-difference field against the logarithmic wire model.
    Compare {
        #[command(flatten)]
        drive: Drive,
        #[arg(long, default_value = "1.5 mm", value_parser = quantity)]
        region_width: Quantity,
        #[arg(long, default_value = "0.5 mm", value_parser = quantity)]
        region_depth: Quantity,
    },
    /// Predicted phase per watt of one heater.
    Alpha {
        #[arg(long, default_value_t = 0)]
        heater: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TomoCmd {
    /// Singles and HOM visibilities of a known circuit.
    Simulate {
        /// Interferometer phase (two modes).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "power")]
        phi: Option<f64>,
        /// Power on `--heater` instead of a phase.
        #[arg(long, value_parser = quantity)]
        power: Option<Quantity>,
        #[arg(long, default_value_t = 0)]
        heater: usize,
        /// Modes; above 2 a Haar-random circuit drawn from `--seed`.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Events per input setting; 0 gives exact probabilities.
        #[arg(long, default_value_t = 0.0)]
        shots: f64,
    },
    /// Unitary from a singles file and a visibility file.
    Reconstruct {
        singles: PathBuf,
        visibilities: PathBuf,
        /// Theory unitary (`out,in,re,im`) to report the fidelity against.
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Gate fidelity of two unitaries in the `out,in,re,im` format.
    Fidelity { theory: PathBuf, experiment: PathBuf },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(path) => DeviceConfig::load(path)?,
        None => DeviceConfig::builtin(),
    };
    let mut out = OutDir::create(&cli.out_dir)?;
    let ctx = commands::Context {
        config: &config,
        seed: cli.seed,
    };
    match &cli.command {
        Group::Simulate(c) => commands::simulate::run(&ctx, c, &mut out),
        Group::Fit(c) => commands::fit::run(&ctx, c, &mut out),
        Group::Thermal(c) => commands::thermal::run(&ctx, c, &mut out),
        Group::Tomo(c) => commands::tomo::run(&ctx, c, &mut out),
    }
}

pub(crate) fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}
