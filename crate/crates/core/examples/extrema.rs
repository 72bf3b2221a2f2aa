//! Extremal classes for a single spectrum.
//!
//! Usage: `cargo run --example extrema -- 0.30,0.25,0.20,0.15,0.07,0.03`

use spectral_cmi::classes::r23_table;
use spectral_cmi::extrema::brute_force_extrema;
use spectral_cmi::Spectrum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "0.30,0.25,0.20,0.15,0.07,0.03".into());
    let s = Spectrum::parse(&text)?;
    let table = r23_table()?;
    let report = brute_force_extrema(&table, &s)?;
    println!("spectrum {:?}", s.values());
    for (label, classes, value) in [
        ("max", &report.argmax_classes, report.max_value),
        ("min", &report.argmin_classes, report.min_value),
    ] {
        let arrs: Vec<String> = classes
            .iter()
            .map(|&k| format!("{k} {}", table.get(k).unwrap().canonical))
            .collect();
        println!("{label} {value:.12} nats at {}", arrs.join(", "));
    }
    Ok(())
}
