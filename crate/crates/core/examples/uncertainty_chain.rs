//! Stam, power-entropy and Heisenberg margins along a bouncer evolution.

use fsrevival::bouncer::bouncer_time_scales;
use fsrevival::config::ModelConfig;
use fsrevival::infomeasures::{check_uncertainty_chain, InfoOptions};
use fsrevival::pipeline::{bouncer_sample, bouncer_setup, sample_times};

fn main() -> fsrevival::Result<()> {
    let cfg = ModelConfig::load("bouncer_fig1")?;
    let prop = bouncer_setup(&cfg)?;
    let (_, t_r) = bouncer_time_scales(cfg.z0)?;
    println!(
        "{:>10} {:>10} {:>12} {:>12} {:>12}",
        "t/T_r", "P", "stam", "power-ent", "heisenberg"
    );
    for t in sample_times(t_r, 11) {
        let (s, _) = bouncer_sample(&prop, t, &InfoOptions::default())?;
        let r = check_uncertainty_chain(&s, 1.0, 1e-3)?;
        println!(
            "{:>10.2} {:>10.3} {:>12.4e} {:>12.4e} {:>12.4e}",
            t / t_r,
            s.product,
            r.stam.margin,
            r.power_entropy.margin,
            r.heisenberg.margin
        );
    }
    Ok(())
}
