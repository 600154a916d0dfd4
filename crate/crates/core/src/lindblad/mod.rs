//! The damped mode at zero temperature, three ways.
//!
//! - [`analytic`]: closed-form solutions (damped coherent state, and the
//!   exchange map with loss amplitudes for arbitrary initial states).
//! - [`master`]: dense fixed-step RK4 integration of the master equation
//!   `d rho/dt = -i[omega n, rho] + gamma (a rho a^dag - {n, rho}/2)`.
//! - [`trajectories`]: quantum-jump unravelling with seeded, order-deterministic
//!   ensemble averaging.

pub mod analytic;
pub mod master;
pub mod trajectories;

pub use analytic::{
    analytic_derivative, analytic_reduced_state, analytic_residual, damped_coherent_analytic,
    damped_lambda, lindblad_rhs, loss_amplitudes,
};
pub use master::{integrate_master, integrate_master_with_dt, master_step_size, propagate_entries, MasterSolution};
pub use trajectories::{run_trajectories, TrajectoryConfig};

use num_complex::Complex64;

/// `<n>` at every sampled time.
pub fn mean_occupation(solution: &MasterSolution) -> Vec<f64> {
    solution.states.iter().map(|rho| rho.mean_occupation()).collect()
}

/// `<a>` at every sampled time.
pub fn mean_annihilation(solution: &MasterSolution) -> Vec<Complex64> {
    solution.states.iter().map(|rho| rho.expect_annihilation()).collect()
}
