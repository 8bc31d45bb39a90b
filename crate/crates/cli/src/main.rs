//! Command-line front end: simulate measurement series, estimate biases,
//! and run Monte Carlo sweeps.
//!
//! Exit codes: 0 on success, 1 on configuration/validation errors, 2 on
//! solver failures.

use clap::{Parser, Subcommand, ValueEnum};
use multireg::bcd::{self, AzimuthSolverKind, BcdConfig};
use multireg::geometry::debias_factor;
use multireg::harness::{emit_report, load_config, run_monte_carlo, ReportFormat};
use multireg::scenario::MeasurementSeries;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 1;
const EXIT_SOLVER: u8 = 2;

#[derive(Parser)]
#[command(
    name = "multireg",
    about = "Asynchronous multi-sensor range/azimuth bias estimation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Sdr,
    Gp,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one measurement series and write it as CSV
    /// (t_seconds, sensor_id, range_m, azimuth_rad).
    Simulate {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Simulation seed.
        #[arg(long)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Which noise_grid entry to simulate under.
        #[arg(long, default_value_t = 0)]
        noise_index: usize,
    },
    /// Estimate per-sensor biases from a measurement series CSV; writes a
    /// JSON estimate.
    Estimate {
        /// Experiment config (JSON); supplies sensor positions and the
        /// azimuth-noise level for debiasing.
        #[arg(long)]
        config: PathBuf,
        /// Input series CSV (as produced by `simulate`).
        #[arg(long)]
        input: PathBuf,
        /// Azimuth-block solver.
        #[arg(long, value_enum)]
        solver: SolverArg,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
        /// Which noise_grid entry describes the measurement noise.
        #[arg(long, default_value_t = 0)]
        noise_index: usize,
    },
    /// Run the configured Monte Carlo sweep and emit rmse.csv, timing.csv,
    /// and SVG charts.
    Montecarlo {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn validation_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_VALIDATION)
}

fn solver_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("solver error: {msg}");
    ExitCode::from(EXIT_SOLVER)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Simulate {
            config,
            seed,
            out,
            noise_index,
        } => {
            let cfg = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return validation_error(e),
            };
            let Some(point) = cfg.noise_grid.get(noise_index) else {
                return validation_error(format!(
                    "noise_index {noise_index} out of range (grid has {} points)",
                    cfg.noise_grid.len()
                ));
            };
            let scenario = cfg.scenario_for(point);
            let (_, _, series) = match scenario.simulate(seed) {
                Ok(s) => s,
                Err(e) => return validation_error(e),
            };
            let file = match std::fs::File::create(&out) {
                Ok(f) => f,
                Err(e) => return validation_error(format!("{}: {e}", out.display())),
            };
            if let Err(e) = series.to_csv(file) {
                return validation_error(e);
            }
            println!("wrote {} measurements to {}", series.len(), out.display());
            ExitCode::SUCCESS
        }
        Command::Estimate {
            config,
            input,
            solver,
            out,
            noise_index,
        } => {
            let cfg = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return validation_error(e),
            };
            let Some(point) = cfg.noise_grid.get(noise_index) else {
                return validation_error(format!(
                    "noise_index {noise_index} out of range (grid has {} points)",
                    cfg.noise_grid.len()
                ));
            };
            let scenario = cfg.scenario_for(point);
            let file = match std::fs::File::open(&input) {
                Ok(f) => f,
                Err(e) => return validation_error(format!("{}: {e}", input.display())),
            };
            let series = match MeasurementSeries::from_csv(file) {
                Ok(s) => s,
                Err(e) => return validation_error(e),
            };
            if series.num_sensors() != scenario.sensors.len() {
                return validation_error(format!(
                    "series covers sensors 1..={} but the config defines {}",
                    series.num_sensors(),
                    scenario.sensors.len()
                ));
            }
            let lam = match debias_factor(scenario.noise.sigma_phi) {
                Ok(l) => l,
                Err(e) => return validation_error(e),
            };
            let bcd_cfg = BcdConfig {
                azimuth_solver: match solver {
                    SolverArg::Sdr => AzimuthSolverKind::Sdr,
                    SolverArg::Gp => AzimuthSolverKind::Gp,
                },
                ..BcdConfig::default()
            };
            let estimate = match bcd::run(&series, &scenario.positions(), lam, &bcd_cfg) {
                Ok(e) => e,
                Err(e) => return solver_error(e),
            };
            let file = match std::fs::File::create(&out) {
                Ok(f) => f,
                Err(e) => return validation_error(format!("{}: {e}", out.display())),
            };
            if let Err(e) = serde_json::to_writer_pretty(file, &estimate) {
                return validation_error(e);
            }
            println!(
                "estimate written to {} ({} iterations, converged: {})",
                out.display(),
                estimate.iterations,
                estimate.converged
            );
            ExitCode::SUCCESS
        }
        Command::Montecarlo { config, out_dir } => {
            let cfg = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return validation_error(e),
            };
            let report = match run_monte_carlo(&cfg) {
                Ok(r) => r,
                Err(e) => return solver_error(e),
            };
            let failed: usize = report.runs.iter().filter(|r| r.failed).count();
            match emit_report(&report, &out_dir, &[ReportFormat::Csv, ReportFormat::Svg]) {
                Ok(files) => {
                    for f in &files {
                        println!("wrote {}", f.display());
                    }
                    if failed > 0 {
                        println!("note: {failed} estimator runs failed and were excluded");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => validation_error(e),
            }
        }
    }
}
