//! Rabi exchange with a resonant environment mode: the kitten's coherence
//! disappears from the system and then comes back.
//!
//!     cargo run --example quantum_eraser

use std::f64::consts::PI;

use pointerlab::amplitudes::{rabi_eigencheck, AmplitudeModel, RabiModel};
use pointerlab::exchange::evolve_system;
use pointerlab::fock::{FockVector, Subsystem};
use pointerlab::kitten::coherence_metric;
use pointerlab::Complex64;

fn main() -> pointerlab::Result<()> {
    let model = RabiModel::new(0.0, 1.0)?;
    let check = rabi_eigencheck(&model);
    println!("one-excitation energies {:?}, passed {}", check.eigenvalues, check.passed);

    let lambda = Complex64::new(2.0, 0.0);
    let kitten = FockVector::kitten_auto(lambda);
    println!("kappa t/pi  coherence  purity(S)  fidelity(E, kitten)");
    for i in 0..=8 {
        let kt = PI * i as f64 / 8.0;
        let amps = model.amplitudes(kt);
        let joint = evolve_system(&kitten, &amps);
        let rho_s = joint.partial_trace(Subsystem::System);
        let coherence = coherence_metric(&rho_s, lambda, &amps).unwrap_or(f64::NAN);
        let env = joint.partial_trace(Subsystem::Environment).fidelity_pure(&kitten);
        println!("{:10.3}  {coherence:9.6}  {:9.6}  {env:19.6}", kt / PI, rho_s.purity());
    }
    Ok(())
}
