//! Prints the certificate chain showing that `ade|fcb` (class 48) has the
//! largest CMI of all `2 x 3` arrangements, whatever the spectrum.
//!
//! Usage: `cargo run --example theorem_chain [-- --all]`

use spectral_cmi::classes::r23_table;
use spectral_cmi::extrema::verify_theorem_chain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let all = std::env::args().any(|a| a == "--all");
    let table = r23_table()?;
    let steps = verify_theorem_chain(&table)?;
    let shown = if all { steps.len() } else { 4 };
    for step in &steps[..shown] {
        println!(
            "== {} ({} -> {}): {}",
            step.name, step.from, step.to, step.verdict.kind
        );
        print!("{}", step.verdict.certificate.render());
    }
    let proven = steps.iter().filter(|s| s.verdict.is_forward()).count();
    println!("{proven}/{} steps proven", steps.len());
    Ok(())
}
