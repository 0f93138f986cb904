//! Fisher-Shannon product of a bouncing packet and the revivals it marks.
//!
//! cargo run --release --example bouncer_revivals -- [samples]

use fsrevival::config::ModelConfig;
use fsrevival::pipeline::{render_report, simulate};

fn main() -> fsrevival::Result<()> {
    let mut cfg = ModelConfig::load("bouncer_fig1")?;
    if let Some(n) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        cfg.samples = n;
    }
    let sim = simulate(&cfg, None)?;
    print!("{}", render_report(&sim));
    Ok(())
}
