//! Two interacting particles, one spatial dimension each, on a periodic
//! product grid.
//!
//! The joint wavefunction is propagated with Strang-split spectral steps and
//! its entanglement entropy is tracked. Scenarios cover the factorisation
//! preserving regimes (free, material points, test particle, mean field) and a
//! strongly entangling contrast.

pub mod classical;
pub mod evolve;
pub mod mean_field;
pub mod scenario;
pub mod wavefunction;

pub use classical::{classical_trajectory, free_trajectory};
pub use evolve::{
    free_gaussian_width, run_scenario, split_step_evolve, test_particle_run, RunOptions, Sample,
    ScenarioRun, SplitStepper, TestParticleReport,
};
pub use mean_field::{mean_field_comparison, MeanFieldPair, MeanFieldReport};
pub use scenario::{GridSpec, Packet, Potential, ScatteringScenario};
pub use wavefunction::{packet_on_grid, GridWavefunction2D};
