//! Strang-split spectral propagation and scenario runs.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::Fft;

use super::mean_field::MeanFieldPair;
use super::scenario::ScatteringScenario;
use super::wavefunction::{plans, transpose_into, GridWavefunction2D};
use crate::error::{Error, Result};

/// Allowed disagreement between the two entropy code paths.
pub const ENTROPY_CROSS_CHECK_TOL: f64 = 1e-6;

/// Precomputed phases for `exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2)`.
pub struct SplitStepper {
    n_a: usize,
    n_b: usize,
    half_potential: Vec<Complex64>,
    kinetic_a: Vec<Complex64>,
    kinetic_b: Vec<Complex64>,
    fwd_a: Arc<dyn Fft<f64>>,
    inv_a: Arc<dyn Fft<f64>>,
    fwd_b: Arc<dyn Fft<f64>>,
    inv_b: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl SplitStepper {
    pub fn new(scenario: &ScatteringScenario) -> Self {
        let (ga, gb) = (scenario.grid_a, scenario.grid_b);
        let (n_a, n_b) = (ga.n, gb.n);
        let dt = scenario.dt;
        let (xa, xb) = (ga.points(), gb.points());
        let half_potential = xa
            .iter()
            .flat_map(|a| {
                xb.iter()
                    .map(move |b| Complex64::from_polar(1.0, -0.5 * dt * scenario.potential.eval(a - b)))
            })
            .collect();
        // the 1/n of the inverse transform is folded into the kinetic phase
        let kinetic = |k: Vec<f64>, m: f64, n: usize| -> Vec<Complex64> {
            k.into_iter()
                .map(|k| Complex64::from_polar(1.0 / n as f64, -dt * k * k / (2.0 * m)))
                .collect()
        };
        let (fwd_a, inv_a) = plans(n_a);
        let (fwd_b, inv_b) = plans(n_b);
        Self {
            n_a,
            n_b,
            half_potential,
            kinetic_a: kinetic(ga.wavenumbers(), scenario.mass_a, n_a),
            kinetic_b: kinetic(gb.wavenumbers(), scenario.mass_b, n_b),
            fwd_a,
            inv_a,
            fwd_b,
            inv_b,
            scratch: vec![Complex64::new(0.0, 0.0); n_a * n_b],
        }
    }

    pub fn step(&mut self, psi: &mut [Complex64]) {
        let (n_a, n_b) = (self.n_a, self.n_b);
        mul_assign(psi, &self.half_potential);
        self.fwd_b.process(psi);
        for row in psi.chunks_mut(n_b) {
            mul_assign(row, &self.kinetic_b);
        }
        self.inv_b.process(psi);
        transpose_into(psi, &mut self.scratch, n_a, n_b);
        self.fwd_a.process(&mut self.scratch);
        for col in self.scratch.chunks_mut(n_a) {
            mul_assign(col, &self.kinetic_a);
        }
        self.inv_a.process(&mut self.scratch);
        transpose_into(&self.scratch, psi, n_b, n_a);
        mul_assign(psi, &self.half_potential);
    }
}

fn mul_assign(x: &mut [Complex64], y: &[Complex64]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a *= b;
    }
}

/// Propagates `n_steps` steps, checking the edges after every step.
pub fn split_step_evolve(
    state: GridWavefunction2D,
    scenario: &ScatteringScenario,
    n_steps: usize,
) -> Result<GridWavefunction2D> {
    scenario.validate()?;
    check_compatible(&state, scenario)?;
    let mut state = state;
    let mut stepper = SplitStepper::new(scenario);
    state.check_edges(0.0)?;
    for s in 1..=n_steps {
        stepper.step(&mut state.psi);
        state.check_edges(s as f64 * scenario.dt)?;
    }
    Ok(state)
}

fn check_compatible(state: &GridWavefunction2D, scenario: &ScatteringScenario) -> Result<()> {
    if state.grid_a != scenario.grid_a || state.grid_b != scenario.grid_b {
        return Err(Error::Dimension("state and scenario grids differ".into()));
    }
    if state.m_a != scenario.mass_a || state.m_b != scenario.mass_b {
        return Err(Error::InvalidParameter("state and scenario masses differ".into()));
    }
    Ok(())
}

/// Options for [`run_scenario`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Also diagonalise `rho_A` at each sample and fail on disagreement.
    pub cross_check_entropy: bool,
    /// Co-evolve the mean-field product and record its fidelity.
    pub mean_field: bool,
}

/// One row of the output time series.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub entropy_bits: f64,
    pub norm: f64,
    pub energy: f64,
    pub x_a_mean: f64,
    pub x_b_mean: f64,
    pub entropy_reduced: Option<f64>,
    pub mean_field_fidelity: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub samples: Vec<Sample>,
    pub final_state: GridWavefunction2D,
}

impl ScenarioRun {
    pub fn max_entropy(&self) -> f64 {
        self.samples.iter().map(|s| s.entropy_bits).fold(0.0, f64::max)
    }

    pub fn final_entropy(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.entropy_bits)
    }

    /// Largest `|E(t) - E(0)| / |E(0)|`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let e0 = self.samples[0].energy;
        self.samples
            .iter()
            .map(|s| (s.energy - e0).abs() / e0.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn min_mean_field_fidelity(&self) -> Option<f64> {
        self.samples
            .iter()
            .map(|s| s.mean_field_fidelity)
            .try_fold(f64::INFINITY, |acc, f| f.map(|f| acc.min(f)))
    }
}

/// Runs a scenario from its product initial state, sampling every
/// `sample_stride` steps and at the final step.
pub fn run_scenario(scenario: &ScatteringScenario, options: RunOptions) -> Result<ScenarioRun> {
    scenario.validate()?;
    let mut state = GridWavefunction2D::initial(scenario);
    let mut stepper = SplitStepper::new(scenario);
    let mut mean_field = options.mean_field.then(|| MeanFieldPair::new(scenario));
    let n_steps = scenario.n_steps();
    let mut samples = Vec::new();

    let sample = |state: &GridWavefunction2D, mf: &Option<MeanFieldPair>, step: usize| -> Result<Sample> {
        let t = step as f64 * scenario.dt;
        state.check_edges(t)?;
        let entropy_bits = state.entanglement_entropy();
        let entropy_reduced = if options.cross_check_entropy {
            let e = state.entropy_from_reduced_density();
            if (e - entropy_bits).abs() > ENTROPY_CROSS_CHECK_TOL {
                return Err(Error::Invariant(format!(
                    "entropy paths disagree at t={t}: svd {entropy_bits}, reduced density {e}"
                )));
            }
            Some(e)
        } else {
            None
        };
        let (x_a_mean, x_b_mean) = state.mean_positions();
        Ok(Sample {
            t,
            entropy_bits,
            norm: state.norm(),
            energy: state.energy(&scenario.potential),
            x_a_mean,
            x_b_mean,
            entropy_reduced,
            mean_field_fidelity: mf.as_ref().map(|m| state.product_fidelity(&m.phi_a, &m.phi_b)),
        })
    };

    samples.push(sample(&state, &mean_field, 0)?);
    for step in 1..=n_steps {
        stepper.step(&mut state.psi);
        if let Some(mf) = mean_field.as_mut() {
            mf.step();
        }
        if step % scenario.sample_stride == 0 || step == n_steps {
            samples.push(sample(&state, &mean_field, step)?);
        }
    }
    Ok(ScenarioRun { samples, final_state: state })
}

/// Outcome of [`test_particle_run`].
#[derive(Clone, Debug)]
pub struct TestParticleReport {
    pub run: ScenarioRun,
    /// `|<x_B>(t) - <x_B>(0)|` maximised over the run.
    pub b_center_shift: f64,
    /// Grid spacing of particle B.
    pub b_cell: f64,
}

impl TestParticleReport {
    pub fn max_entropy(&self) -> f64 {
        self.run.max_entropy()
    }

    pub fn b_stayed_within_one_cell(&self) -> bool {
        self.b_center_shift <= self.b_cell
    }
}

/// Heavy, localised particle B at rest probed by light particle A.
///
/// Requires `m_B / m_A >= 100`, B at rest, and B's width resolved by its grid
/// yet no wider than four cells.
pub fn test_particle_run(scenario: &ScatteringScenario) -> Result<TestParticleReport> {
    let ratio = scenario.mass_b / scenario.mass_a;
    if ratio < 100.0 {
        return Err(Error::InvalidParameter(format!("mass ratio m_B/m_A = {ratio} is below 100")));
    }
    if scenario.packet_b.momentum != 0.0 {
        return Err(Error::InvalidParameter("particle B must start at rest".into()));
    }
    let cell = scenario.grid_b.dx();
    let w = scenario.packet_b.width;
    if w < cell || w > 4.0 * cell {
        return Err(Error::InvalidParameter(format!(
            "B width {w} must lie between one and four grid cells ({cell})"
        )));
    }
    let run = run_scenario(scenario, RunOptions::default())?;
    let x0 = run.samples[0].x_b_mean;
    let b_center_shift = run
        .samples
        .iter()
        .map(|s| (s.x_b_mean - x0).abs())
        .fold(0.0, f64::max);
    Ok(TestParticleReport { run, b_center_shift, b_cell: cell })
}

/// Free-evolution spread of a Gaussian packet: `sigma sqrt(1 + (t / (2 m sigma^2))^2)`.
pub fn free_gaussian_width(sigma: f64, mass: f64, t: f64) -> f64 {
    sigma * (1.0 + (t / (2.0 * mass * sigma * sigma)).powi(2)).sqrt()
}
