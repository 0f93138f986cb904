//! Validate a config and run it into a directory, as the command line does.
//!
//! cargo run --release --example run_config -- ring_fig2 out/

use fsrevival::config::ModelConfig;
use fsrevival::pipeline::{run, RunOptions};

fn main() -> fsrevival::Result<()> {
    let mut args = std::env::args().skip(1);
    let source = args.next().unwrap_or_else(|| "ring_fig2".into());
    let out = args.next().unwrap_or_else(|| "out".into());
    let cfg = ModelConfig::load(&source)?;
    let problems = cfg.validate();
    if !problems.is_empty() {
        for p in problems {
            eprintln!("{p}");
        }
        std::process::exit(2);
    }
    let art = run(&cfg, &RunOptions { out_dir: out.into(), threads: None, plot: true })?;
    println!("{}", art.csv.display());
    println!("{}", art.report.display());
    if let Some(p) = art.plot {
        println!("{}", p.display());
    }
    Ok(())
}
