//! Bouncer packet in momentum space at a few times.

use fsrevival::bouncer::{bouncer_time_scales, default_domain, BouncerPacket, BouncerPropagator};
use fsrevival::grid::{self, MomentumSpectrum};

fn main() -> fsrevival::Result<()> {
    let packet = BouncerPacket::new(100.0, 1.0)?;
    let (t_cl, t_r) = bouncer_time_scales(100.0)?;
    let prop = BouncerPropagator::new(packet, default_domain(100.0)?)?;
    println!("{:>10} {:>12} {:>12} {:>12} {:>8}", "t", "<p>", "var_p", "var_x", "dp");
    for t in [0.0, 0.25 * t_cl, 0.5 * t_cl, t_cl, 0.25 * t_r, 0.5 * t_r] {
        let psi = prop.evolve(t)?;
        let spec = MomentumSpectrum::from_field(&psi)?;
        let rho_p = spec.density()?;
        println!(
            "{t:>10.3} {:>12.5} {:>12.5} {:>12.5} {:>8.5}",
            grid::mean(&rho_p),
            grid::variance(&rho_p),
            grid::variance(&psi.density()?),
            spec.resolution()
        );
    }
    Ok(())
}
