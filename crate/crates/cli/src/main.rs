use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fvbench_cli::config::Config;
use fvbench_cli::drivers;
use std::path::PathBuf;

/// Structured-grid finite-volume benchmark solver: configurable face
/// reconstruction x face-flux quadrature on three canonical compressible
/// flows.
#[derive(Parser)]
#[command(name = "fvbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single case and write its artifacts.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override or set configuration keys, e.g. --set nx=128.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run a resolution sweep and fit the convergence order.
    Convergence {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run the turbulence campaign: every (resolution, scheme) pair off a
    /// shared initial field.
    HitCampaign {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Shell spectrum of a snapshot.
    Spectrum {
        #[arg(long)]
        snapshot: PathBuf,
        /// velocity or vorticity
        #[arg(long, default_value = "vorticity")]
        field: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// L1 differences between two snapshots (coarsening the finer).
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn load_config(path: &Option<PathBuf>, sets: &[String]) -> Result<Config> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("read {p:?}"))?,
        None => String::new(),
    };
    Config::from_text(&text, sets).map_err(|e| anyhow::anyhow!("configuration error: {e}"))
}

fn init_threads() {
    if let Ok(v) = std::env::var("FVBENCH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

fn main() {
    init_threads();
    let cli = Cli::parse();
    let result = (|| -> Result<()> {
        match &cli.command {
            Command::Run { config, sets } => {
                let cfg = load_config(config, sets)?;
                let summary = drivers::cmd_run(&cfg)?;
                println!("{summary}");
            }
            Command::Convergence { config, sets } => {
                let cfg = load_config(config, sets)?;
                let (samples, order, residual) = drivers::cmd_convergence(&cfg)?;
                for (n, e) in &samples {
                    println!("n={n} error={e:.6e}");
                }
                println!("fitted_order={order:.4} fit_residual={residual:.3e}");
            }
            Command::HitCampaign { config, sets } => {
                let cfg = load_config(config, sets)?;
                let entries = drivers::cmd_hit_campaign(&cfg)?;
                for e in &entries {
                    println!(
                        "{} steps={} ke_final={:.6e} mass_drift={:.3e}",
                        e.label,
                        e.run.steps,
                        e.run.series.last().map(|r| r.2).unwrap_or(f64::NAN),
                        e.run.conservation_drift[0]
                    );
                }
            }
            Command::Spectrum { snapshot, field, out } => {
                drivers::cmd_spectrum(snapshot, field, out)?;
                println!("wrote {}", out.display());
            }
            Command::Compare { a, b } => {
                print!("{}", drivers::cmd_compare(a, b)?);
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
