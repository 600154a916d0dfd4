//! The damped mode three ways: analytic coherent projector, master equation,
//! and the mean occupation of a decaying Fock state.
//!
//!     cargo run --release --example damped_mode

use pointerlab::fock::{auto_truncation, DensityMatrix, FockVector};
use pointerlab::lindblad::{analytic_residual, damped_coherent_analytic, integrate_master};
use pointerlab::Complex64;

fn main() -> pointerlab::Result<()> {
    let (gamma, omega) = (1.0, 0.5);
    let lambda = Complex64::new(2.0, 0.0);
    let psi0 = FockVector::coherent_auto(lambda);
    let n = psi0.n_trunc();
    // The residual needs a deeper truncation: the derivative couples n to n+1.
    let deep = auto_truncation(lambda, 1e-24);
    let times: Vec<f64> = (0..=6).map(|i| 0.5 * i as f64).collect();
    let master = integrate_master(&DensityMatrix::pure(&psi0), omega, gamma, &times)?;

    println!("    t  <n> master  fidelity     purity      residual");
    for (&t, rho) in times.iter().zip(&master.states) {
        let exact = damped_coherent_analytic(lambda, gamma, omega, t, n)?;
        println!(
            "{t:5.2}  {:10.6}  {:.12}  {:.10}  {:.2e}",
            rho.mean_occupation(),
            rho.fidelity_pure(&exact),
            rho.purity(),
            analytic_residual(lambda, gamma, omega, t, deep)?
        );
    }
    println!("trace drift {:.2e}", master.trace_drift());
    Ok(())
}
