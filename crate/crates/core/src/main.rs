use clap::{Args, Parser, Subcommand};
use safegap::engine::{log_spaced, sensitivity_sweep};
use safegap::error::{Error, Result};
use safegap::report;
use safegap::study;
use safegap::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

/// Safe-distance evaluation of runtime uncertainty handlers for platooning
/// friction estimates.
#[derive(Parser)]
#[command(name = "safegap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to a TOML configuration file; defaults reproduce the study.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the configured one).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every handler under every use case and write table1.csv.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Sensitivity sweep over the accepted uncertainty threshold; writes sweep.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-7)]
        u_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        u_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        /// Dispersion levels of the simulated estimator.
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.05, 0.1])]
        sigma: Vec<f64>,
        /// Situational friction means.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.7, 0.9])]
        mu: Vec<f64>,
        /// Fixed speed of both vehicles.
        #[arg(long, default_value_t = 70.0)]
        speed_kmh: f64,
    },
    /// Solve for the follower braking deceleration matching a worst-case
    /// distance target.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Target expected worst-case distance in meters.
        #[arg(long)]
        target: f64,
    },
    /// Print the optimized safety margin per supervisor handler.
    OptimizeMargin {
        #[command(flatten)]
        common: Common,
    },
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn cmd_simulate(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    let (prepared, results) = study::run(&config)?;
    if prepared.calibrated {
        println!(
            "calibrated follower min_brake = {:.4} m/s^2 (target {:.3} m, use case {})",
            prepared.kin.min_brake, config.calibration.target_distance_m, config.calibration.use_case
        );
    }
    if let Some(static_value) = prepared.static_value {
        println!("design-time static friction = {static_value:.4}");
    }
    for (kind, margin) in prepared.margins() {
        println!(
            "{}: delta_mu = {:.4} (unsupervised) / {:.4} (supervised)",
            kind.label(),
            margin.unsupervised,
            margin.supervised
        );
    }
    println!();
    print!("{}", report::render_table(&results));
    let path = config.output_dir.join("table1.csv");
    report::write_file(&path, &report::table_csv(&results)?)?;
    println!("\nwrote {}", path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    common: &Common,
    u_min: f64,
    u_max: f64,
    points: usize,
    sigma: &[f64],
    mu: &[f64],
    speed_kmh: f64,
) -> Result<()> {
    let config = load_config(common)?;
    if !(speed_kmh > 0.0) {
        return Err(Error::invalid("speed_kmh must be > 0"));
    }
    let u_values = log_spaced(u_min, u_max, points)?;
    let prepared = study::prepare(&config)?;
    let swept = sensitivity_sweep(
        &prepared.handlers,
        &u_values,
        sigma,
        mu,
        speed_kmh / 3.6,
        config.scenario.mu_bounds,
        &prepared.kin,
        &config.leader_params(),
    )?;
    let path = config.output_dir.join("sweep.csv");
    report::write_file(&path, &report::sweep_csv(&swept)?)?;
    println!("wrote {} ({} rows)", path.display(), swept.len());
    Ok(())
}

fn cmd_calibrate(common: &Common, target: f64) -> Result<()> {
    if !(target > 0.0) {
        return Err(Error::invalid(format!(
            "calibration target must be > 0, got {target}"
        )));
    }
    let mut config = load_config(common)?;
    config.calibration.target_distance_m = target;
    config.kinematics.min_brake = None;
    let prepared = study::prepare(&config)?;
    println!("{:.4}", prepared.kin.min_brake);
    Ok(())
}

fn cmd_optimize_margin(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    let prepared = study::prepare(&config)?;
    let margins = prepared.margins();
    if margins.is_empty() {
        println!("no supervisor handlers configured");
    }
    for (kind, margin) in margins {
        println!(
            "{}: delta_mu = {:.4} (unsupervised) / {:.4} (supervised)",
            kind.label(),
            margin.unsupervised,
            margin.supervised
        );
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate { common } => cmd_simulate(common),
        Command::Sweep {
            common,
            u_min,
            u_max,
            points,
            sigma,
            mu,
            speed_kmh,
        } => cmd_sweep(common, *u_min, *u_max, *points, sigma, mu, *speed_kmh),
        Command::Calibrate { common, target } => cmd_calibrate(common, *target),
        Command::OptimizeMargin { common } => cmd_optimize_margin(common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
