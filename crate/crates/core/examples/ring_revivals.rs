//! Angular packet on a gapped graphene ring: time scales and product minima.

use fsrevival::config::ModelConfig;
use fsrevival::pipeline::simulate;
use fsrevival::ring::{dispersion, ring_time_scales};

fn main() -> fsrevival::Result<()> {
    let cfg = ModelConfig::load("ring_fig2")?;
    let params = cfg.ring_params()?;
    let m0 = cfg.ring_m0()?;
    println!("E0 = {:.4} meV, nu = {:.4}, m0 = {m0}", params.e0(), params.nu());
    for m in m0 - 2..=m0 + 2 {
        println!("  E_{m} = {:.3} meV", dispersion(m, &params));
    }
    let ts = ring_time_scales(m0, &params)?;
    let t_r = ts.t_r.expect("gapped ring");
    println!("T_cl = {:.4e} ns, T_r = {t_r:.5} ns, T_r/2 = {:.5} ns", ts.t_cl, 0.5 * t_r);

    let sim = simulate(&cfg, None)?;
    let p: Vec<f64> = sim.series.products();
    println!("P(0) = {:.4}, max P = {:.2}", p[0], p.iter().cloned().fold(0.0, f64::max));
    println!("{} minima, median spacing {:?} ns", sim.minima.len(), sim.dominant_spacing());
    for m in sim.minima.iter().take(10) {
        println!("  t = {:.5} ns  P = {:.3}", m.t, m.p);
    }
    Ok(())
}
