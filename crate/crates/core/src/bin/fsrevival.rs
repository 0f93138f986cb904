use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fsrevival::config::{Model, ModelConfig};
use fsrevival::pipeline::{self, RunOptions};
use fsrevival::{bouncer, revival, ring, Error};

/// Fisher-Shannon analysis of wavepacket revivals.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured packet and write CSV, report and plot.
    Run {
        /// Config file, or the name of a bundled config.
        config: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        no_plot: bool,
    },
    /// Check a config and list problems.
    Validate { config: String },
    /// Print the fractional revival table.
    Schedule { config: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Run {
            config,
            out,
            threads,
            no_plot,
        } => {
            let cfg = ModelConfig::load(&config)?;
            let opts = RunOptions {
                out_dir: out,
                threads,
                plot: !no_plot,
            };
            let art = pipeline::run(&cfg, &opts)?;
            println!("wrote {}", art.csv.display());
            println!("wrote {}", art.report.display());
            if let Some(p) = &art.plot {
                println!("wrote {}", p.display());
            }
            if let Some(e) = &art.plot_error {
                eprintln!("warning: plot not written: {e}");
            }
            for v in &art.simulation.violations {
                eprintln!("warning: {v}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let cfg = ModelConfig::load(&config)?;
            let diagnostics = cfg.validate();
            if diagnostics.is_empty() {
                println!("ok");
                return Ok(ExitCode::SUCCESS);
            }
            for d in &diagnostics {
                println!("{d}");
            }
            Ok(ExitCode::from(2))
        }
        Command::Schedule { config } => {
            let cfg = ModelConfig::load(&config)?;
            let (t_cl, t_r, unit) = match cfg.model {
                Model::Bouncer => {
                    let (c, r) = bouncer::bouncer_time_scales(cfg.z0)?;
                    (c, Some(r), "scaled")
                }
                Model::Ring => {
                    let s = ring::ring_time_scales(cfg.ring_m0()?, &cfg.ring_params()?)?;
                    (s.t_cl, s.t_r, "ns")
                }
            };
            let t_r = t_r.ok_or_else(|| {
                Error::Usage("T_r is unbounded for a massless ring; no revival schedule".into())
            })?;
            let s = revival::schedule(t_cl, t_r, cfg.q_max)?;
            println!("# T_cl = {t_cl} {unit}, T_r = {t_r} {unit}");
            println!("p/q\tt");
            for f in &s.fractions {
                println!("{f}\t{}", f.t);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
