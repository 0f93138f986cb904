//! Zeros of Ai on the negative axis and a few function values.
//!
//! cargo run --example airy_zeros -- 10

use fsrevival::specfun::{airy_pair, airy_zeros, zero_seed};

fn main() -> fsrevival::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let table = airy_zeros(n)?;
    println!("{:>4} {:>22} {:>22} {:>10}", "n", "z_n", "|Ai'(-z_n)|", "seed err");
    for k in 1..=n {
        let z = table.zero(k).unwrap();
        println!(
            "{k:>4} {z:>22.15} {:>22.15} {:>10.2e}",
            table.derivative_at_zero(k).unwrap(),
            zero_seed(k) - z
        );
    }
    println!();
    for x in [-20.0, -7.5, -1.0, 0.0, 1.0, 7.5, 20.0] {
        let (ai, dai) = airy_pair(x)?;
        println!("Ai({x:>5}) = {ai:>23.15e}   Ai'({x:>5}) = {dai:>23.15e}");
    }
    Ok(())
}
