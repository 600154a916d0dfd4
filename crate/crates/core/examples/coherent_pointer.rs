//! A coherent state leaks into a vacuum environment and stays pure; a Fock
//! state does not.
//!
//!     cargo run --example coherent_pointer

use pointerlab::exchange::{evolve_fock, evolve_system, AmplitudePair};
use pointerlab::fock::{FockVector, Subsystem};
use pointerlab::Complex64;

fn main() -> pointerlab::Result<()> {
    let lambda = Complex64::new(1.0, 2.0);
    let coherent = FockVector::coherent_auto(lambda);
    println!("transfer  purity(coherent)  schmidt  purity(|3>)");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let amps = AmplitudePair::from_transfer(p)?;
        let joint = evolve_system(&coherent, &amps);
        let purity = joint.partial_trace(Subsystem::System).purity();
        let fock = evolve_fock(3, &amps, 3)?.partial_trace(Subsystem::System).purity();
        println!("{p:8.1}  {purity:16.12}  {:7.4}  {fock:11.6}", joint.schmidt().leading());
    }
    Ok(())
}
