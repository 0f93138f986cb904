//! Fractional revival times p T_r / q and matching of a synthetic minima list.

use fsrevival::bouncer::bouncer_time_scales;
use fsrevival::revival::{match_schedule, schedule, Minimum};

fn main() -> fsrevival::Result<()> {
    let (t_cl, t_r) = bouncer_time_scales(100.0)?;
    let s = schedule(t_cl, t_r, 5)?;
    for f in &s.fractions {
        println!("{:>5}  t = {:>10.2}", f.to_string(), f.t);
    }
    let minima: Vec<Minimum> = [0.251, 0.48, 0.5, 0.66, 0.9]
        .iter()
        .enumerate()
        .map(|(index, x)| Minimum { index, t: x * t_r, p: 1.0 })
        .collect();
    let report = match_schedule(&minima, &s, 0.01)?;
    for l in &report.labeled {
        let label = l.fraction.map_or("unassigned".into(), |f| f.to_string());
        println!("minimum at {:.3} T_r -> {label}", l.minimum.t / t_r);
    }
    let missing: Vec<String> = report.unmatched.iter().map(ToString::to_string).collect();
    println!("unmatched: {}", missing.join(" "));
    Ok(())
}
