//! The Fisher-Shannon product is 1 for Gaussians and larger for anything else.

use std::f64::consts::PI;

use fsrevival::grid::Domain1D;
use fsrevival::infomeasures::{fisher_shannon_product, DensityProfile, InfoOptions};

fn gaussian(x: f64, mu: f64, var: f64) -> (f64, f64) {
    let r = (-(x - mu).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
    (r, -(x - mu) / var * r)
}

fn product(d: &Domain1D, f: impl Fn(f64) -> (f64, f64)) -> fsrevival::Result<f64> {
    let (rho, drho) = d.coordinates().into_iter().map(f).unzip();
    let profile = DensityProfile::normalized(d.clone(), rho, Some(drho))?;
    Ok(fisher_shannon_product(&profile, 0.0, None, &InfoOptions::default())?
        .sample
        .product)
}

fn main() -> fsrevival::Result<()> {
    let d = Domain1D::line(-40.0, 40.0, 4096)?;
    for var in [0.25, 1.0, 9.0] {
        println!("gaussian var {var:>5}: P = {:.12}", product(&d, |x| gaussian(x, 0.0, var))?);
    }
    for sep in [1.0, 3.0, 6.0] {
        let p = product(&d, |x| {
            let (a, da) = gaussian(x, -sep / 2.0, 1.0);
            let (b, db) = gaussian(x, sep / 2.0, 1.0);
            (0.5 * (a + b), 0.5 * (da + db))
        })?;
        println!("two bumps sep {sep:>3}: P = {p:.6}");
    }
    let p = product(&d, |x| {
        let r = 0.5 * (-x.abs()).exp();
        (r, -x.signum() * r)
    })?;
    println!("laplace           : P = {p:.6}  (exact 2e/pi = {:.6})", 2.0 * std::f64::consts::E / PI);
    Ok(())
}
