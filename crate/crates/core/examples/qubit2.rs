//! Two-qubit information functionals at the corners of the fundamental domain.
//!
//! Usage: `cargo run --example qubit2 [-- a,b,c,d]`

use spectral_cmi::probability::LogBase;
use spectral_cmi::qubit2::{
    domain_vertex, qubit2_informations, separability_classifiers, tvector_from_spectrum,
    verify_total_order_2x2, Qubit2Spectrum,
};

fn show(name: &str, s: &Qubit2Spectrum) {
    let i = qubit2_informations(s, LogBase::Two);
    let sep = separability_classifiers(s);
    let t = tvector_from_spectrum(s);
    println!(
        "{name:<6} [{}]  T=({:+.3},{:+.3},{:+.3})  gamma_max {:.6}  gamma_min {:.6}  I_max {:.6}  abs-sep {}",
        s.values().map(|v| format!("{v:.4}")).join(", "),
        t.t11,
        t.t22,
        t.t33,
        i.gamma_max,
        i.gamma_min,
        i.i_max_qmi,
        sep.absolutely_separable
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 1..=5 {
        show(&format!("V{k}"), &domain_vertex(k)?);
    }
    if let Some(arg) = std::env::args().nth(1) {
        let v: Vec<f64> = arg.split(',').map(str::parse).collect::<Result<_, _>>()?;
        let s = Qubit2Spectrum::from_unsorted(v.try_into().map_err(|_| "need four values")?)?;
        show("input", &s);
        let order = verify_total_order_2x2(&s)?;
        println!(
            "2x2 classes (nats): {:?}, strict chain: {}",
            order.cmi, order.chain_holds
        );
    }
    Ok(())
}
