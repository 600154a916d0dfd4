//! Hartree (mean-field) propagation: each particle moves in the interaction
//! potential averaged over the partner's density.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::Fft;

use super::evolve::{run_scenario, RunOptions};
use super::scenario::ScatteringScenario;
use super::wavefunction::{packet_on_grid, plans};
use crate::error::Result;

/// Single-particle factors evolved self-consistently.
pub struct MeanFieldPair {
    pub phi_a: Vec<Complex64>,
    pub phi_b: Vec<Complex64>,
    /// `V(x_a - x_b)`, row-major over `(a, b)`.
    interaction: Vec<f64>,
    dx_a: f64,
    dx_b: f64,
    dt: f64,
    axis_a: Axis,
    axis_b: Axis,
}

struct Axis {
    kinetic: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Axis {
    fn new(k: Vec<f64>, mass: f64, dt: f64) -> Self {
        let n = k.len();
        let (fwd, inv) = plans(n);
        let kinetic = k
            .into_iter()
            .map(|k| Complex64::from_polar(1.0 / n as f64, -dt * k * k / (2.0 * mass)))
            .collect();
        Self { kinetic, fwd, inv }
    }

    fn kick(&self, phi: &mut [Complex64]) {
        self.fwd.process(phi);
        for (c, k) in phi.iter_mut().zip(&self.kinetic) {
            *c *= k;
        }
        self.inv.process(phi);
    }
}

impl MeanFieldPair {
    pub fn new(scenario: &ScatteringScenario) -> Self {
        let (ga, gb) = (scenario.grid_a, scenario.grid_b);
        let xb = gb.points();
        let interaction = ga
            .points()
            .iter()
            .flat_map(|a| xb.iter().map(move |b| scenario.potential.eval(a - b)))
            .collect();
        Self {
            phi_a: packet_on_grid(&ga, &scenario.packet_a),
            phi_b: packet_on_grid(&gb, &scenario.packet_b),
            interaction,
            dx_a: ga.dx(),
            dx_b: gb.dx(),
            dt: scenario.dt,
            axis_a: Axis::new(ga.wavenumbers(), scenario.mass_a, scenario.dt),
            axis_b: Axis::new(gb.wavenumbers(), scenario.mass_b, scenario.dt),
        }
    }

    /// `(V_A(x_a), V_B(x_b))`, each convolved with the partner's density.
    pub fn averaged_potentials(&self) -> (Vec<f64>, Vec<f64>) {
        let n_b = self.phi_b.len();
        let rho_a: Vec<f64> = self.phi_a.iter().map(|c| c.norm_sqr() * self.dx_a).collect();
        let rho_b: Vec<f64> = self.phi_b.iter().map(|c| c.norm_sqr() * self.dx_b).collect();
        let mut v_a = vec![0.0; self.phi_a.len()];
        let mut v_b = vec![0.0; n_b];
        for (i, row) in self.interaction.chunks(n_b).enumerate() {
            let mut acc = 0.0;
            for (j, v) in row.iter().enumerate() {
                acc += v * rho_b[j];
                v_b[j] += v * rho_a[i];
            }
            v_a[i] = acc;
        }
        (v_a, v_b)
    }

    fn half_kick(&mut self) {
        let (v_a, v_b) = self.averaged_potentials();
        let h = 0.5 * self.dt;
        for (c, v) in self.phi_a.iter_mut().zip(&v_a) {
            *c *= Complex64::from_polar(1.0, -h * v);
        }
        for (c, v) in self.phi_b.iter_mut().zip(&v_b) {
            *c *= Complex64::from_polar(1.0, -h * v);
        }
    }

    pub fn step(&mut self) {
        self.half_kick();
        self.axis_a.kick(&mut self.phi_a);
        self.axis_b.kick(&mut self.phi_b);
        self.half_kick();
    }
}

/// Fidelity between the mean-field product and the full solution over time.
#[derive(Clone, Debug)]
pub struct MeanFieldReport {
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub entropy_bits: Vec<f64>,
}

impl MeanFieldReport {
    pub fn min_fidelity(&self) -> f64 {
        self.fidelity.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn mean_field_comparison(scenario: &ScatteringScenario) -> Result<MeanFieldReport> {
    let run = run_scenario(scenario, RunOptions { mean_field: true, ..Default::default() })?;
    Ok(MeanFieldReport {
        times: run.samples.iter().map(|s| s.t).collect(),
        fidelity: run
            .samples
            .iter()
            .map(|s| s.mean_field_fidelity.expect("mean field requested"))
            .collect(),
        entropy_bits: run.samples.iter().map(|s| s.entropy_bits).collect(),
    })
}
