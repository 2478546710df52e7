use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use acd_marl::harness::{
    parse_config, run_experiment, write_training_curve, AlgoChoice, CliOverrides, MetricsTable, RunManifest,
};

#[derive(Parser)]
#[command(
    name = "acd-marl",
    version,
    about = "Multi-agent actor-critic training on a simulated defended network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train seeded runs and write metrics.csv, curve.svg and manifest.json.
    Train {
        /// Comma-separated: iac, maac, ippo, mappo, random.
        #[arg(long, value_delimiter = ',')]
        algo: Option<Vec<AlgoChoice>>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        episodes: Option<usize>,
        #[arg(long)]
        max_steps: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        window: Option<usize>,
        /// Flat `key = value` file; command-line flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Render a training-curve SVG from a metrics CSV.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        window: usize,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Train {
            algo,
            runs,
            episodes,
            max_steps,
            seed,
            out,
            window,
            config,
        } => {
            let cli = CliOverrides {
                algorithms: algo,
                runs,
                episodes,
                max_steps,
                seed,
                out_dir: out,
                smoothing_window: window,
            };
            let cfg = parse_config(&cli, config.as_deref())?;
            std::fs::create_dir_all(&cfg.out_dir).with_context(|| format!("creating {}", cfg.out_dir.display()))?;
            let table = run_experiment(&cfg)?;
            let csv = cfg.out_dir.join("metrics.csv");
            let svg = cfg.out_dir.join("curve.svg");
            let manifest = cfg.out_dir.join("manifest.json");
            table.write_csv(&csv)?;
            write_training_curve(&table, cfg.smoothing_window, "Mean shared return", &svg)?;
            RunManifest::new(&cfg, vec![csv.clone(), svg.clone()])?.write(&manifest)?;
            for algo in table.algorithms() {
                println!(
                    "{algo:>7}: mean return over final {} episodes = {:.3}",
                    cfg.smoothing_window.min(cfg.episodes),
                    table.final_mean(&algo, cfg.smoothing_window)
                );
            }
            println!("wrote {}", cfg.out_dir.display());
        }
        Command::Plot { input, out, window } => {
            let table = MetricsTable::read_csv(&input)?;
            write_training_curve(&table, window, "Mean shared return", &out)?;
        }
    }
    Ok(())
}
