use std::path::PathBuf;

use bornbench_core::train::parse_edges;
use clap::{Parser, Subcommand};

use crate::commands::{bas_lines, cmd_deploy, cmd_sweep, cmd_train, cmd_warmstart, embed_design, load_graph};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "bornbench",
    version,
    about = "Train and benchmark quantum-circuit Born machines on bars-and-stripes data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a circuit from a config file.
    Train {
        #[arg(short, long)]
        config: PathBuf,
        /// Output directory (default: `output_dir` key, else runs/<label>).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Overwrite an existing run directory.
        #[arg(long)]
        force: bool,
        /// Also print each step as a JSON line on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Re-evaluate a run's parameter trajectory under a noise profile.
    Deploy {
        run_dir: PathBuf,
        #[arg(long)]
        noise: Option<PathBuf>,
        /// Output CSV (default: <run_dir>/deploy.csv).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Resume a run from a checkpoint and keep training under noise.
    Warmstart {
        run_dir: PathBuf,
        #[arg(long)]
        step: usize,
        #[arg(long)]
        noise: PathBuf,
        /// Further Adam steps.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Extra `key = value` overrides.
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Output directory (default: <run_dir>/warmstart_S<step>).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Embed an entangler design into a coupling graph.
    Embed {
        #[arg(long = "dc", value_parser = clap::builder::PossibleValuesParser::new(["2", "3", "4"]))]
        dc: String,
        /// Preset (`plaquette4`, `ladder2xK`) or edge-list file.
        #[arg(long)]
        graph: String,
        /// Chow-Liu root for d_C = 3.
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Explicit d_C = 3 edges, e.g. `0-1,0-2,2-3`.
        #[arg(long)]
        edges: Option<String>,
    },
    /// Train every run of a sweep file and tabulate min mean KL.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// List BAS(rows, cols) bitstrings.
    Bas {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train { config, output, seed, force, json } => {
            cmd_train(&config, output.as_deref(), seed, force, json)?;
        }
        Command::Deploy { run_dir, noise, output } => {
            let path = cmd_deploy(&run_dir, noise.as_deref(), output.as_deref())?;
            println!("{}", path.display());
        }
        Command::Warmstart { run_dir, step, noise, steps, config, output, force } => {
            let (dir, report) =
                cmd_warmstart(&run_dir, step, &noise, steps, config.as_deref(), output.as_deref(), force)?;
            print!("{}", report.table());
            println!("{}", dir.display());
        }
        Command::Embed { dc, graph, root, edges } => {
            let d_c: usize = dc.parse().expect("validated by clap");
            let graph = load_graph(&graph)?;
            let edges =
                edges.map(|e| parse_edges("--edges", &e)).transpose().map_err(|e| CliError::config("--edges", e))?;
            let report = embed_design(d_c, &graph, root, edges.as_deref())?;
            print!("{}", report.text(d_c, &graph));
        }
        Command::Sweep { config, output, force } => {
            let (dir, rows) = cmd_sweep(&config, output.as_deref(), force)?;
            println!("{} runs, summary in {}", rows.len(), dir.join("summary.csv").display());
        }
        Command::Bas { rows, cols } => {
            for line in bas_lines(rows, cols)? {
                println!("{line}");
            }
        }
    }
    Ok(())
}
