//! Quantum-jump unravelling of photon loss from |1> and from a coherent
//! state, compared with the master equation.
//!
//!     cargo run --release --example trajectories [n_traj] [seed]

use pointerlab::fock::{DensityMatrix, FockVector};
use pointerlab::lindblad::{integrate_master, mean_occupation, run_trajectories, TrajectoryConfig};
use pointerlab::Complex64;

fn main() -> pointerlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_traj = args.next().and_then(|s| s.parse().ok()).unwrap_or(4000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let times: Vec<f64> = (0..=10).map(|i| 0.3 * i as f64).collect();
    let config = TrajectoryConfig { gamma: 1.0, omega: 0.0, dt: 0.001, t_max: 3.0, n_traj, master_seed: seed };

    let fock = run_trajectories(&FockVector::fock(1, 1)?, &config, &times)?;
    println!("|1>:    t   <n> jumps   exp(-t)");
    for (t, n) in times.iter().zip(mean_occupation(&fock)) {
        println!("     {t:5.2}  {n:9.5}  {:8.5}", (-t).exp());
    }

    let psi = FockVector::coherent_auto(Complex64::new(2.0, 0.0));
    let mc = run_trajectories(&psi, &config, &times)?;
    let master = integrate_master(&DensityMatrix::pure(&psi), 0.0, 1.0, &times)?;
    println!("|2>:    t   trace distance to master equation");
    for ((t, a), b) in times.iter().zip(&mc.states).zip(&master.states) {
        println!("     {t:5.2}  {:.3e}", a.trace_distance(b)?);
    }
    Ok(())
}
