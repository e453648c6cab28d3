use std::path::PathBuf;
use std::process::ExitCode;

use bec_impurity_cli::config::{Format, GridConfig, RunConfig};
use bec_impurity_cli::table::Report;
use bec_impurity_cli::{checks, commands, exit, Failure};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bec-impurity", version, about = "Impurity in a Bose-Einstein condensate: rates, energy shift, effective mass")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write results here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// start:stop:count, optionally :log
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Relative quadrature tolerance
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Box side length
    #[arg(long = "L", global = true)]
    box_length: Option<f64>,
    /// Box Lorentzian broadening
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Box momentum cutoff
    #[arg(long, global = true)]
    pcut: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// p, epsilon, alpha, beta, w over a momentum grid
    Dispersion,
    /// Cherenkov rates over an impurity-momentum grid
    Rates,
    /// E(q_i) below q_c, with the effective mass
    Spectrum,
    /// Effective mass by every available route
    EffectiveMass,
    /// I0 and I1 against m/M
    Fig1,
    /// Finite-box rates along the (L, eta) schedule
    BoxOracle,
    /// Run the oracle suite
    Check,
}

fn resolve(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Config)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &common.output {
        cfg.output = Some(o.clone());
    }
    if let Some(f) = common.format {
        cfg.format = f;
    }
    if let Some(g) = &common.grid {
        cfg.grid = Some(GridConfig::parse(g).map_err(Failure::Config)?);
    }
    if let Some(t) = common.tol {
        cfg.tol = t;
    }
    let explicit_box = common.box_length.is_some() || common.eta.is_some();
    if let Some(l) = common.box_length {
        cfg.box_oracle.box_length = l;
    }
    if let Some(eta) = common.eta {
        cfg.box_oracle.eta = eta;
    }
    if explicit_box {
        cfg.box_oracle.schedule.clear();
    }
    if let Some(p) = common.pcut {
        cfg.box_oracle.pcut = p;
    }
    cfg.validate().map_err(Failure::Config)?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let cfg = resolve(&cli.common)?;
    let report: Report = match cli.command {
        Command::Dispersion => commands::dispersion_table(&cfg)?,
        Command::Rates => commands::rates_table(&cfg)?,
        Command::Spectrum => commands::spectrum_table(&cfg)?,
        Command::EffectiveMass => commands::effective_mass_table(&cfg)?,
        Command::Fig1 => commands::fig1_table(&cfg)?,
        Command::BoxOracle => commands::box_oracle_table(&cfg)?,
        Command::Check => {
            let results = checks::run_all(cfg.box_oracle.max_points);
            for c in &results {
                println!("{c}");
            }
            let failed: Vec<&str> = results.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            if failed.is_empty() {
                println!("all {} checks passed", results.len());
                return Ok(exit::OK);
            }
            println!("{} of {} checks failed: {}", failed.len(), results.len(), failed.join(", "));
            return Ok(exit::CHECK_FAILED);
        }
    };
    report.emit(&cfg).map_err(Failure::Config)?;
    Ok(exit::OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
