//! Numerical laboratory for coherent pointer states of a bosonic mode.
//!
//! The crate is organised bottom-up:
//!
//! - [`fock`]: truncated single- and two-mode Fock states, reduced density
//!   matrices, Schmidt decomposition and entropies.
//! - [`exchange`]: the one-quantum-at-a-time exchange map between a system
//!   mode and an environment mode initially in vacuum.
//! - [`amplitudes`]: coherent (Rabi) and Markovian providers of the exchange
//!   amplitudes `(alpha(t), beta(t))`.
//! - [`kitten`]: decoherence of even cat ("kitten") states, closed form
//!   against brute-force partial trace.
//! - [`lindblad`]: the damped mode treated three ways (analytic, master
//!   equation, quantum trajectories).
//! - [`twobody`]: split-step evolution of two interacting particles on a
//!   grid and their entanglement entropy.
//! - [`cli`]: the batch driver behind the `pointerlab` binary.
//!
//! Units: `hbar = 1`, entropies in bits.

pub mod amplitudes;
pub mod cli;
pub mod error;
pub mod exchange;
pub mod fock;
pub mod kitten;
pub mod lindblad;
pub mod twobody;

pub use num_complex::Complex64;

pub use amplitudes::{AmplitudeModel, ExchangeModel, MarkovModel, RabiModel};
pub use error::{Error, Result};
pub use exchange::{evolve_fock, evolve_system, factorization_check, AmplitudePair};
pub use fock::{
    auto_truncation, DensityMatrix, FockVector, SchmidtDecomposition, Subsystem, TwoModeState,
};
