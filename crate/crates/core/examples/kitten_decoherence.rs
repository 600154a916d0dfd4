//! Even cat state of amplitude 2 losing its coherence to a Markovian
//! environment. Closed form and brute-force partial trace side by side.
//!
//!     cargo run --example kitten_decoherence

use pointerlab::amplitudes::MarkovModel;
use pointerlab::kitten::kitten_timeline;
use pointerlab::Complex64;

fn main() -> pointerlab::Result<()> {
    let lambda = Complex64::new(2.0, 0.0);
    let model = MarkovModel::new(1.0, 0.0)?.into();
    let times: Vec<f64> = (0..=12).map(|i| 0.05 * i as f64).collect();
    let reports = kitten_timeline(lambda, &model, &times)?;
    println!("    t  coherence  numeric     purity  entropy[bit]  record overlap");
    for r in reports {
        let numeric = r.coherence_numeric.map_or("nan".to_string(), |c| format!("{c:.6}"));
        println!(
            "{:5.2}  {:9.6}  {numeric:>8}  {:9.6}  {:12.6}  {:.3e}{}",
            r.t,
            r.coherence_closed_form,
            r.purity,
            r.entropy_bits,
            r.record_overlap,
            if r.record_overlap <= pointerlab::kitten::RECORD_THRESHOLD * (1.0 + 1e-12) { " recorded" } else { "" }
        );
    }
    Ok(())
}
