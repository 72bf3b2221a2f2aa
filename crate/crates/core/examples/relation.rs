//! Certified chain between two 2x3 classes.
//!
//! Usage: `cargo run --example relation -- 42 48 [majorisation]`

use spectral_cmi::classes::r23_table;
use spectral_cmi::order::{derive_relation, RelationSearch, RuleSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a = args.first().map_or(Ok(42), |s| s.parse())?;
    let b = args.get(1).map_or(Ok(48), |s| s.parse())?;
    let rules = match args.get(2).map(String::as_str) {
        Some("majorisation") => RuleSet::Majorisation,
        _ => RuleSet::All,
    };
    let search = RelationSearch {
        rules,
        ..RelationSearch::default()
    };
    let v = derive_relation(&r23_table()?, a, b, &search)?;
    println!("{}", v.kind);
    print!("{}", v.certificate.render());
    Ok(())
}
