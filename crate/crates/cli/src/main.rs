use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rweno::config::{parse_config, RunConfig};
use rweno::driver::{self, DriverError};
use rweno::schemes::MethodId;

/// Finite-difference WENO5 solver for the 1D radial Euler equations.
#[derive(Parser)]
#[command(name = "rweno", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one configured run and write profile, ledger and meta files.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Grid convergence sweep over a resolution ladder (smooth problems).
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated cell counts, powers of two over the coarsest.
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160,320,640")]
        resolutions: Vec<usize>,
    },
    /// Conservation audit across methods and resolutions (shock problems).
    Audit {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated method names.
        #[arg(long, value_delimiter = ',', default_value = "one,two,three")]
        methods: Vec<String>,
        /// Comma-separated cell counts; defaults to the configured n_cells.
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<usize>>,
    },
}

fn load_config(path: &PathBuf) -> Result<RunConfig, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Err(4);
        }
    };
    match parse_config(&text) {
        Ok((cfg, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            Ok(cfg)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(2)
        }
    }
}

fn parse_methods(names: &[String]) -> Result<Vec<MethodId>, i32> {
    names
        .iter()
        .map(|name| match name.as_str() {
            "one" => Ok(MethodId::One),
            "two" => Ok(MethodId::Two),
            "three" => Ok(MethodId::Three),
            other => {
                eprintln!("error: unknown method `{other}` (one|two|three)");
                Err(2)
            }
        })
        .collect()
}

fn report(err: DriverError) -> i32 {
    eprintln!("error: {err}");
    let mut source = std::error::Error::source(&err);
    while let Some(inner) = source {
        eprintln!("  caused by: {inner}");
        source = inner.source();
    }
    err.exit_code()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run_command(cli) {
        Ok(()) => 0,
        Err(code) => code,
    };
    ExitCode::from(code as u8)
}

fn run_command(cli: Cli) -> Result<(), i32> {
    match cli.command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let artifacts = driver::run(&cfg).map_err(report)?;
            println!("profile: {}", artifacts.profile.display());
            println!("ledger:  {}", artifacts.ledger.display());
            println!("meta:    {}", artifacts.meta.display());
        }
        Command::Sweep {
            config,
            resolutions,
        } => {
            let cfg = load_config(&config)?;
            let rep = driver::sweep(&cfg, &resolutions).map_err(report)?;
            println!("n,l2_error,order");
            for (i, (&n, &e)) in rep.resolutions.iter().zip(&rep.errors).enumerate() {
                if i == 0 {
                    println!("{n},{e},");
                } else {
                    println!("{n},{e},{}", rep.orders[i - 1]);
                }
            }
            println!("wrote {}", cfg.out_dir.join("convergence.csv").display());
        }
        Command::Audit {
            config,
            methods,
            resolutions,
        } => {
            let cfg = load_config(&config)?;
            let methods = parse_methods(&methods)?;
            let resolutions = resolutions.unwrap_or_else(|| vec![cfg.n_cells]);
            let entries = driver::audit(&cfg, &resolutions, &methods).map_err(report)?;
            for entry in &entries {
                for ledger in &entry.ledgers {
                    let last = ledger.rows().last().expect("ledger has baseline row");
                    println!(
                        "method {}, n = {}, {}: delta_mass = {:.3e}, delta_energy = {:.3e} at t = {}",
                        entry.method.name(),
                        entry.n_cells,
                        ledger.mode().name(),
                        last.delta_mass,
                        last.delta_energy,
                        last.t
                    );
                }
            }
            println!("wrote {}", cfg.out_dir.join("residuals.csv").display());
        }
    }
    Ok(())
}
