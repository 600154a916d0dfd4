//! Fixed-step RK4 integration of the master equation on dense matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::analytic::lindblad_rhs_into;
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Largest tolerated trace change in a single step.
pub const STEP_TRACE_TOL: f64 = 1e-10;
/// Target value of `gamma * n_trunc * dt` for automatic step selection.
pub const STEP_BUDGET: f64 = 0.01;

/// Density matrices sampled on a time grid.
#[derive(Clone, Debug)]
pub struct MasterSolution {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl MasterSolution {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn mean_occupation(&self) -> Vec<f64> {
        super::mean_occupation(self)
    }

    /// Largest `|Tr rho(t) - Tr rho(t_0)|` over the run.
    pub fn trace_drift(&self) -> f64 {
        let Some(first) = self.states.first() else {
            return 0.0;
        };
        let t0 = first.trace();
        self.states
            .iter()
            .map(|s| (s.trace() - t0).abs())
            .fold(0.0, f64::max)
    }
}

/// Automatic step: `(gamma + |omega|) * n_trunc * dt <= 0.01`.
pub fn master_step_size(omega: f64, gamma: f64, n_trunc: usize) -> f64 {
    let scale = (gamma.abs() + omega.abs()) * n_trunc.max(1) as f64;
    if scale == 0.0 {
        f64::INFINITY
    } else {
        STEP_BUDGET / scale
    }
}

/// Integrates from `rho0` at `times[0]` with the automatic step size.
pub fn integrate_master(
    rho0: &DensityMatrix,
    omega: f64,
    gamma: f64,
    times: &[f64],
) -> Result<MasterSolution> {
    let dt = master_step_size(omega, gamma, rho0.n_trunc());
    integrate_master_with_dt(rho0, omega, gamma, times, dt)
}

/// Integrates from `rho0` at `times[0]`; every interval of the grid is split
/// into the fewest equal steps no longer than `max_dt`.
pub fn integrate_master_with_dt(
    rho0: &DensityMatrix,
    omega: f64,
    gamma: f64,
    times: &[f64],
    max_dt: f64,
) -> Result<MasterSolution> {
    let raw = propagate_entries(rho0, omega, gamma, times, max_dt)?;
    let mut states = Vec::with_capacity(raw.len());
    states.push(rho0.clone());
    for m in raw.into_iter().skip(1) {
        states.push(DensityMatrix::from_hermitian_part(m)?);
    }
    Ok(MasterSolution {
        times: times.to_vec(),
        states,
    })
}

/// Same stepping as [`integrate_master_with_dt`] but returns the raw matrices
/// without the positivity check, so coarse steps can be studied for
/// convergence. The per-step trace check still applies.
pub fn propagate_entries(
    rho0: &DensityMatrix,
    omega: f64,
    gamma: f64,
    times: &[f64],
    max_dt: f64,
) -> Result<Vec<DMatrix<Complex64>>> {
    check_inputs(rho0, omega, gamma, times, max_dt)?;
    let dim = rho0.dim();
    let mut rho = rho0.entries().clone();
    let mut stepper = Rk4::new(dim);
    let mut out = Vec::with_capacity(times.len());
    out.push(rho.clone());

    for w in times.windows(2) {
        let span = w[1] - w[0];
        if span > 0.0 {
            let n_steps = (span / max_dt).ceil().max(1.0) as usize;
            let dt = span / n_steps as f64;
            for s in 0..n_steps {
                let before = rho.trace().re;
                stepper.step(&mut rho, omega, gamma, dt);
                let drift = (rho.trace().re - before).abs();
                if drift > STEP_TRACE_TOL {
                    return Err(Error::StepRejected {
                        t: w[0] + (s + 1) as f64 * dt,
                        drift,
                    });
                }
            }
        }
        out.push(rho.clone());
    }
    Ok(out)
}

fn check_inputs(rho0: &DensityMatrix, omega: f64, gamma: f64, times: &[f64], max_dt: f64) -> Result<()> {
    rho0.validate()?;
    if times.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite and non-decreasing".into()));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need finite omega and gamma >= 0 (omega={omega}, gamma={gamma})"
        )));
    }
    if !(max_dt > 0.0) {
        return Err(Error::InvalidParameter(format!("step size must be positive, got {max_dt}")));
    }
    Ok(())
}

struct Rk4 {
    k: [DMatrix<Complex64>; 4],
    tmp: DMatrix<Complex64>,
}

impl Rk4 {
    fn new(dim: usize) -> Self {
        let z = || DMatrix::zeros(dim, dim);
        Self {
            k: [z(), z(), z(), z()],
            tmp: z(),
        }
    }

    fn step(&mut self, rho: &mut DMatrix<Complex64>, omega: f64, gamma: f64, dt: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        lindblad_rhs_into(rho, omega, gamma, k1);
        stage(&mut self.tmp, rho, k1, 0.5 * dt);
        lindblad_rhs_into(&self.tmp, omega, gamma, k2);
        stage(&mut self.tmp, rho, k2, 0.5 * dt);
        lindblad_rhs_into(&self.tmp, omega, gamma, k3);
        stage(&mut self.tmp, rho, k3, dt);
        lindblad_rhs_into(&self.tmp, omega, gamma, k4);
        let w = dt / 6.0;
        for i in 0..rho.len() {
            rho[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
    }
}

/// `out = rho + h k`
fn stage(out: &mut DMatrix<Complex64>, rho: &DMatrix<Complex64>, k: &DMatrix<Complex64>, h: f64) {
    for ((o, r), d) in out.iter_mut().zip(rho.iter()).zip(k.iter()) {
        *o = r + d * h;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{auto_truncation, FockVector, TAIL_TOL};
    use crate::lindblad::analytic::damped_coherent_analytic;
    use approx::assert_abs_diff_eq;

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
    }

    #[test]
    fn unitary_limit_stays_pure() {
        let lambda = Complex64::new(2.0, 0.0);
        let n = auto_truncation(lambda, TAIL_TOL);
        let rho0 = DensityMatrix::pure(&FockVector::coherent(lambda, n).unwrap());
        let sol = integrate_master(&rho0, 1.0, 0.0, &grid(2.0, 4)).unwrap();
        for (t, rho) in sol.times.iter().zip(&sol.states) {
            assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-9);
            let target = damped_coherent_analytic(lambda, 0.0, 1.0, *t, n).unwrap();
            assert!(rho.fidelity_pure(&target) > 1.0 - 1e-8);
        }
    }

    #[test]
    fn vacuum_is_stationary() {
        let rho0 = DensityMatrix::vacuum(10);
        let sol = integrate_master(&rho0, 0.5, 3.0, &grid(2.0, 5)).unwrap();
        for rho in &sol.states {
            assert_eq!(rho.max_entry_distance(&rho0).unwrap(), 0.0);
        }
    }

    #[test]
    fn damped_coherent_example() {
        let lambda = Complex64::new(2.0, 0.0);
        let n = auto_truncation(lambda, TAIL_TOL);
        let rho0 = DensityMatrix::pure(&FockVector::coherent(lambda, n).unwrap());
        let sol = integrate_master(&rho0, 0.0, 1.0, &[0.0, 1.0]).unwrap();
        let rho = &sol.states[1];
        assert_abs_diff_eq!(rho.mean_occupation(), 4.0 * (-1f64).exp(), epsilon = 1e-6);
        let target = damped_coherent_analytic(lambda, 1.0, 0.0, 1.0, n).unwrap();
        assert!(rho.fidelity_pure(&target) >= 1.0 - 1e-6);
        assert!(sol.trace_drift() <= 1e-8);
    }

    #[test]
    fn fock_one_decays_exponentially() {
        let rho0 = DensityMatrix::pure(&FockVector::fock(1, 4).unwrap());
        let times = grid(3.0, 6);
        let sol = integrate_master(&rho0, 0.0, 1.0, &times).unwrap();
        for (t, n) in times.iter().zip(sol.mean_occupation()) {
            assert_abs_diff_eq!(n, (-t).exp(), epsilon = 1e-6);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let rho0 = DensityMatrix::vacuum(3);
        assert!(integrate_master(&rho0, 0.0, 1.0, &[]).is_err());
        assert!(integrate_master(&rho0, 0.0, 1.0, &[1.0, 0.5]).is_err());
        assert!(integrate_master(&rho0, 0.0, -1.0, &[0.0, 1.0]).is_err());
    }
}
