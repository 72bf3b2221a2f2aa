//! Monte Carlo census of which classes are realised as extrema.
//!
//! Usage: `cargo run --release --example census -- [m] [n] [samples] [seed]`

use std::time::Instant;

use spectral_cmi::classes::enumerate_classes;
use spectral_cmi::extrema::{census, CensusConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let get = |k: usize, default: u64| args.get(k).copied().unwrap_or(default);
    let (m, n) = (get(0, 2) as usize, get(1, 4) as usize);
    let cfg = CensusConfig {
        m,
        n,
        samples: get(2, 100_000),
        seed: get(3, 7),
        workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
        checkpoint: None,
    };
    let table = enumerate_classes(m, n)?;
    let start = Instant::now();
    let report = census(&table, &cfg)?;
    println!(
        "{m}x{n}: {} classes, {} samples, seed {}",
        table.len(),
        cfg.samples,
        cfg.seed
    );
    println!(
        "  maxima ({}): {:?}",
        report.realized_max_classes.len(),
        report.max_classes()
    );
    println!(
        "  minima ({}): {:?}",
        report.realized_min_classes.len(),
        report.min_classes()
    );
    println!(
        "  tie events: max {}, min {}",
        report.max_tie_events, report.min_tie_events
    );
    println!("  elapsed {:.1?}", start.elapsed());
    Ok(())
}
