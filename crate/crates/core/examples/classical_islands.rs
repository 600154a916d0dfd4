//! Two particles on a grid. Heavy, well-localised bodies scatter without
//! entangling; light equal-mass packets do not.
//!
//!     cargo run --release --example classical_islands [scenario.cfg ...]

use std::path::PathBuf;

use pointerlab::twobody::{classical_trajectory, run_scenario, RunOptions, ScatteringScenario};

fn main() -> pointerlab::Result<()> {
    let mut paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
        paths = ["free.cfg", "test_particle.cfg", "test_particle_control.cfg"]
            .iter()
            .map(|n| dir.join(n))
            .collect();
    }
    let options = RunOptions { cross_check_entropy: false, mean_field: true };
    for path in paths {
        let scenario = ScatteringScenario::from_path(&path)?;
        let run = run_scenario(&scenario, options)?;
        let times: Vec<f64> = run.samples.iter().map(|s| s.t).collect();
        let classical = classical_trajectory(&scenario, &times);
        println!("{}", path.display());
        println!("      t  S[bit]    <x_A>  classical    <x_B>  classical  mean-field");
        for (s, (ca, cb)) in run.samples.iter().zip(classical) {
            println!(
                "  {:5.2}  {:.4}  {:7.3}  {ca:9.3}  {:7.3}  {cb:9.3}  {:10.6}",
                s.t,
                s.entropy_bits,
                s.x_a_mean,
                s.x_b_mean,
                s.mean_field_fidelity.unwrap_or(f64::NAN)
            );
        }
        println!(
            "  max S {:.4} bit, energy drift {:.1e}\n",
            run.max_entropy(),
            run.max_relative_energy_drift()
        );
    }
    Ok(())
}
