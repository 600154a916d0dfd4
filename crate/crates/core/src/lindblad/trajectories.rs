//! Quantum-jump unravelling of photon loss.
//!
//! Each step draws one uniform number. With probability `gamma <n> dt` the
//! state jumps to `a psi`; otherwise every Fock component is scaled by
//! `sqrt(1 - gamma n dt) exp(-i omega n dt)`. Either way the state is then
//! renormalised.
//!
//! Trajectory `i` uses `ChaCha8Rng::seed_from_u64(splitmix64(master_seed) ^ i)`. The
//! ensemble is summed over fixed chunks of trajectories in index order, so the
//! result is bit-identical for any number of worker threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::master::MasterSolution;
use crate::error::{Error, Result};
use crate::fock::{annihilate_amplitudes, DensityMatrix, FockVector, NORM_TOL};

/// Trajectories per reduction chunk. Part of the reproducibility contract.
pub const CHUNK: usize = 256;
/// Upper bound on `dt * gamma * n_trunc`.
pub const MAX_JUMP_BUDGET: f64 = 0.1;
const TRAJECTORY_NORM_TOL: f64 = 1e-12;
const GRID_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryConfig {
    pub gamma: f64,
    pub omega: f64,
    pub dt: f64,
    pub t_max: f64,
    pub n_traj: usize,
    pub master_seed: u64,
}

impl TrajectoryConfig {
    pub fn validate(&self, n_trunc: usize) -> Result<()> {
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() || !self.omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need finite omega and gamma >= 0 (omega={}, gamma={})",
                self.omega, self.gamma
            )));
        }
        if !(self.dt > 0.0) || !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0 and a finite horizon (dt={}, t_max={})",
                self.dt, self.t_max
            )));
        }
        if self.n_traj == 0 {
            return Err(Error::InvalidParameter("n_traj must be at least 1".into()));
        }
        let budget = self.dt * self.gamma * n_trunc as f64;
        if budget >= MAX_JUMP_BUDGET {
            return Err(Error::Invariant(format!(
                "dt * gamma * n_trunc = {budget} must stay below {MAX_JUMP_BUDGET}"
            )));
        }
        Ok(())
    }

    /// Seed of trajectory `index`: the scrambled master seed XOR the index.
    ///
    /// Scrambling first keeps nearby master seeds from producing the same set
    /// of trajectory seeds.
    pub fn trajectory_seed(&self, index: usize) -> u64 {
        splitmix64(self.master_seed) ^ index as u64
    }
}

/// Ensemble-averaged `|psi><psi|` at each time of `times` (multiples of `dt`,
/// up to `t_max`).
pub fn run_trajectories(
    psi0: &FockVector,
    config: &TrajectoryConfig,
    times: &[f64],
) -> Result<MasterSolution> {
    config.validate(psi0.n_trunc())?;
    if (psi0.norm_sq() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            norm_sq: psi0.norm_sq(),
        });
    }
    let sample_steps = sample_indices(times, config)?;
    let total_steps = (config.t_max / config.dt).round() as usize;
    let dim = psi0.dim();

    let chunk_starts: Vec<usize> = (0..config.n_traj).step_by(CHUNK).collect();
    let partial: Vec<Vec<DMatrix<Complex64>>> = chunk_starts
        .par_iter()
        .map(|&start| {
            let end = (start + CHUNK).min(config.n_traj);
            let mut sums = vec![DMatrix::zeros(dim, dim); sample_steps.len()];
            for index in start..end {
                run_one(psi0, config, index, total_steps, &sample_steps, &mut sums)?;
            }
            Ok(sums)
        })
        .collect::<Result<_>>()?;

    let mut totals = vec![DMatrix::<Complex64>::zeros(dim, dim); sample_steps.len()];
    for chunk in &partial {
        for (acc, m) in totals.iter_mut().zip(chunk) {
            *acc += m;
        }
    }

    let states = totals
        .into_iter()
        .map(|m| {
            let h = (&m + m.adjoint()).scale(0.5);
            let trace = h.trace().re;
            DensityMatrix::new(h.unscale(trace))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MasterSolution {
        times: times.to_vec(),
        states,
    })
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn sample_indices(times: &[f64], config: &TrajectoryConfig) -> Result<Vec<usize>> {
    times
        .iter()
        .map(|&t| {
            let k = (t / config.dt).round();
            if !(t >= 0.0) || t > config.t_max + GRID_TOL || (k * config.dt - t).abs() > GRID_TOL * t.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "sample time {t} is not a multiple of dt={} within [0, {}]",
                    config.dt, config.t_max
                )));
            }
            Ok(k as usize)
        })
        .collect()
}

fn run_one(
    psi0: &FockVector,
    config: &TrajectoryConfig,
    index: usize,
    total_steps: usize,
    sample_steps: &[usize],
    sums: &mut [DMatrix<Complex64>],
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.trajectory_seed(index));
    let dim = psi0.dim();
    let drift: Vec<Complex64> = (0..dim)
        .map(|n| {
            let nf = n as f64;
            Complex64::from_polar((1.0 - config.gamma * nf * config.dt).sqrt(), -config.omega * nf * config.dt)
        })
        .collect();
    let mut psi = psi0.amplitudes().clone();
    let last = sample_steps.iter().copied().max().unwrap_or(0).min(total_steps);

    let record = |psi: &DVector<Complex64>, step: usize, sums: &mut [DMatrix<Complex64>]| {
        for (acc, _) in sums.iter_mut().zip(sample_steps).filter(|(_, &s)| s == step) {
            acc.ger(Complex64::new(1.0, 0.0), psi, &psi.conjugate(), Complex64::new(1.0, 0.0));
        }
    };
    record(&psi, 0, sums);
    for step in 1..=last {
        let mean_n: f64 = psi.iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum();
        let u: f64 = rng.random();
        if u < config.gamma * mean_n * config.dt {
            psi = annihilate_amplitudes(&psi);
        } else {
            for (c, d) in psi.iter_mut().zip(&drift) {
                *c *= d;
            }
        }
        let norm = psi.norm();
        psi.unscale_mut(norm);
        let norm_sq = psi.norm_squared();
        if (norm_sq - 1.0).abs() > TRAJECTORY_NORM_TOL {
            return Err(Error::Invariant(format!(
                "trajectory {index} norm {norm_sq} after step {step}"
            )));
        }
        record(&psi, step, sums);
    }
    Ok(())
}
