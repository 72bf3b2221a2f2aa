//! Class counts per shape and the standard-form families of the 2x3 table.
//!
//! Usage: `cargo run --example classes`

use spectral_cmi::classes::{enumerate_classes, r23_table, standard_form_sets};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (m, n) in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5)] {
        println!("{m}x{n}: {} classes", enumerate_classes(m, n)?.len());
    }
    let table = r23_table()?;
    let forms = standard_form_sets(&table)?;
    let show = |label: &str, ks: &[usize]| {
        let items: Vec<String> = ks
            .iter()
            .map(|&k| format!("{k}={}", table.get(k).unwrap().canonical))
            .collect();
        println!("{label:<18} {}", items.join("  "));
    };
    show("minimal forms", &forms.minz);
    show("one-up forms", &forms.minzoneup);
    show("maximum candidates", &forms.maxima_candidates);
    for c in table.classes().iter().take(6) {
        println!("{:>2} {} {}", c.index, c.canonical, c.cycle_label);
    }
    Ok(())
}
