//! The identric mean and its bounds `x + t/e < μ(x, x+t) < x + t/2`.
//!
//! Usage: `cargo run --example identric`

use spectral_cmi::order::identric_mean;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>8} {:>8} {:>12} {:>10}", "x", "t", "mu", "(mu-x)/t");
    for x in [0.0001, 0.01, 0.1, 0.3] {
        for t in [1e-6, 0.01, 0.2, 0.6] {
            let mu = identric_mean(x, x + t)?;
            println!("{x:>8} {t:>8} {mu:>12.9} {:>10.6}", (mu - x) / t);
        }
    }
    println!("bounds: 1/e = {:.6}, 1/2", (-1f64).exp());
    Ok(())
}
