use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use plasmon_dimer::acceptance;
use plasmon_dimer::dynamics::IntegratorOptions;
use plasmon_dimer::scenarios::{self, RunOptions};
use plasmon_dimer::{Error, Result};

#[derive(Parser)]
#[command(
    version,
    about = "Two emitters coupled through a plasmonic waveguide: dynamics and correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its correlation time series as CSV.
    Run {
        /// Catalog name, or a new name when --config gives a complete configuration.
        name: String,
        /// JSON document overriding fields of the named scenario.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cross-check closed-form trajectories against the integrator.
        #[arg(long)]
        verify: bool,
        /// RK4 step in 1/Gamma.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Append the 16 density-matrix elements (real and imaginary parts).
        #[arg(long)]
        raw_elements: bool,
    },
    /// List the scenario catalog.
    List,
    /// Run the acceptance suite.
    Check,
}

fn run(
    name: &str,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    verify: bool,
    dt: f64,
    raw_elements: bool,
) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::config("--dt", "must be positive"));
    }
    let cfg = scenarios::load_config(name, config.as_deref())?;
    let opts = RunOptions {
        integrator: IntegratorOptions { dt },
        verify,
        raw_elements,
        threads: None,
    };
    let output = scenarios::run_scenario(&cfg, &opts)?;
    for p in &output.points {
        log::info!(
            "{} point {:?}: {:?}, {} records",
            output.scenario,
            p.sweep_value,
            p.method,
            p.records.len()
        );
    }
    match out {
        Some(path) => scenarios::emit_csv(&output, &path),
        None => scenarios::write_csv(&output, BufWriter::new(io::stdout().lock())),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            name,
            config,
            out,
            verify,
            dt,
            raw_elements,
        } => run(&name, config, out, verify, dt, raw_elements),
        Command::List => {
            for name in scenarios::CATALOG {
                let cfg = scenarios::named_scenario(name).expect("catalog entry");
                println!("{name:<16} {}", cfg.description);
            }
            Ok(())
        }
        Command::Check => {
            let outcomes = acceptance::run_all();
            for o in &outcomes {
                println!("{}", o.line());
            }
            if outcomes.iter().all(|o| o.passed()) {
                Ok(())
            } else {
                eprintln!("error: acceptance suite failed");
                return ExitCode::from(1);
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
