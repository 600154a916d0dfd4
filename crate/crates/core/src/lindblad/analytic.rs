//! Exact solutions of the zero-temperature master equation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exchange::{evolve_system, AmplitudePair};
use crate::fock::{DensityMatrix, FockVector, Subsystem};

/// `lambda exp(-i omega t - gamma t / 2)`.
pub fn damped_lambda(lambda: Complex64, gamma: f64, omega: f64, t: f64) -> Complex64 {
    lambda * Complex64::new(-0.5 * gamma * t, -omega * t).exp()
}

/// Coherent state with the damped amplitude [`damped_lambda`].
pub fn damped_coherent_analytic(
    lambda: Complex64,
    gamma: f64,
    omega: f64,
    t: f64,
    n_trunc: usize,
) -> Result<FockVector> {
    FockVector::coherent(damped_lambda(lambda, gamma, omega, t), n_trunc)
}

/// Exchange amplitudes of a lossy mode; `gamma = 0` is allowed (pure rotation).
pub fn loss_amplitudes(gamma: f64, omega: f64, t: f64) -> Result<AmplitudePair> {
    if !(gamma >= 0.0) || !gamma.is_finite() || !omega.is_finite() || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "loss amplitudes need gamma >= 0 and t >= 0 (gamma={gamma}, t={t})"
        )));
    }
    let carrier = Complex64::from_polar(1.0, -omega * t);
    let survival = (-0.5 * gamma * t).exp();
    let transfer = (-(-gamma * t).exp_m1()).sqrt();
    AmplitudePair::new(carrier * survival, carrier * transfer)
}

/// Reduced system state after coupling to a vacuum environment with loss
/// amplitudes; this solves the master equation for any pure initial state.
pub fn analytic_reduced_state(psi0: &FockVector, gamma: f64, omega: f64, t: f64) -> Result<DensityMatrix> {
    let amps = loss_amplitudes(gamma, omega, t)?;
    Ok(evolve_system(psi0, &amps).partial_trace(Subsystem::System))
}

/// Right side of the master equation, element by element:
///
/// ```text
/// (L rho)_{jk} = -i omega (j - k) rho_{jk}
///              + gamma sqrt((j+1)(k+1)) rho_{j+1,k+1}
///              - gamma (j + k) / 2 rho_{jk}
/// ```
pub fn lindblad_rhs(rho: &DMatrix<Complex64>, omega: f64, gamma: f64) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    lindblad_rhs_into(rho, omega, gamma, &mut out);
    out
}

pub(crate) fn lindblad_rhs_into(
    rho: &DMatrix<Complex64>,
    omega: f64,
    gamma: f64,
    out: &mut DMatrix<Complex64>,
) {
    let dim = rho.nrows();
    let sqrt_n: Vec<f64> = (0..=dim).map(|n| (n as f64).sqrt()).collect();
    for k in 0..dim {
        for j in 0..dim {
            let (jf, kf) = (j as f64, k as f64);
            let rate = Complex64::new(-0.5 * gamma * (jf + kf), -omega * (jf - kf));
            let mut v = rate * rho[(j, k)];
            if j + 1 < dim && k + 1 < dim {
                v += rho[(j + 1, k + 1)] * (gamma * sqrt_n[j + 1] * sqrt_n[k + 1]);
            }
            out[(j, k)] = v;
        }
    }
}

/// Time derivative of the damped coherent projector, differentiated by hand:
/// `d rho_{jk}/dt = rho_{jk} [gamma |lambda(t)|^2 + (-i omega - gamma/2) j + (i omega - gamma/2) k]`.
pub fn analytic_derivative(
    lambda: Complex64,
    gamma: f64,
    omega: f64,
    t: f64,
    n_trunc: usize,
) -> Result<DMatrix<Complex64>> {
    let psi = damped_coherent_analytic(lambda, gamma, omega, t, n_trunc)?;
    let v = psi.amplitudes();
    let mean = damped_lambda(lambda, gamma, omega, t).norm_sqr();
    Ok(DMatrix::from_fn(v.len(), v.len(), |j, k| {
        let (jf, kf) = (j as f64, k as f64);
        let factor = Complex64::new(gamma * mean - 0.5 * gamma * (jf + kf), -omega * (jf - kf));
        v[j] * v[k].conj() * factor
    }))
}

/// Largest entry of `L(rho_analytic(t)) - d rho_analytic/dt`.
pub fn analytic_residual(lambda: Complex64, gamma: f64, omega: f64, t: f64, n_trunc: usize) -> Result<f64> {
    let psi = damped_coherent_analytic(lambda, gamma, omega, t, n_trunc)?;
    let v = psi.amplitudes();
    let rho = v * v.adjoint();
    let lhs = analytic_derivative(lambda, gamma, omega, t, n_trunc)?;
    let rhs = lindblad_rhs(&rho, omega, gamma);
    Ok((lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{auto_truncation, TAIL_TOL};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn damped_amplitude_examples() {
        let l = c(2.0, 1.0);
        assert_eq!(damped_lambda(l, 1.0, 0.3, 0.0), l);
        let half = damped_lambda(l, 1.0, 0.3, 2.0 * LN_2);
        assert_abs_diff_eq!(half.norm(), l.norm() / 2.0, epsilon = 1e-14);
        assert!(damped_lambda(l, 1.0, 0.3, 100.0).norm() < 1e-20);
    }

    #[test]
    fn residual_vanishes_on_sampled_times() {
        let lambda = c(2.0, 0.0);
        let n = auto_truncation(lambda, 1e-24);
        for &(gamma, omega) in &[(1.0, 0.0), (0.5, 1.3), (2.0, -0.7)] {
            for i in 0..=12 {
                let t = 0.25 * i as f64;
                let r = analytic_residual(lambda, gamma, omega, t, n).unwrap();
                assert!(r <= 1e-8, "residual {r} at t={t}");
            }
        }
    }

    #[test]
    fn wrong_sign_of_rotation_is_not_a_solution() {
        // the derivative with the opposite carrier differs from L(rho)
        let lambda = c(2.0, 0.0);
        let n = auto_truncation(lambda, 1e-24);
        let psi = damped_coherent_analytic(lambda, 1.0, 1.0, 0.5, n).unwrap();
        let v = psi.amplitudes();
        let rho = v * v.adjoint();
        let rhs = lindblad_rhs(&rho, -1.0, 1.0);
        let lhs = analytic_derivative(lambda, 1.0, 1.0, 0.5, n).unwrap();
        assert!((lhs - rhs).iter().map(|x| x.norm()).fold(0.0, f64::max) > 1e-2);
    }

    #[test]
    fn exchange_solution_matches_coherent_projector() {
        let lambda = c(1.5, -0.5);
        let n = auto_truncation(lambda, TAIL_TOL);
        let psi0 = FockVector::coherent(lambda, n).unwrap();
        let rho = analytic_reduced_state(&psi0, 1.0, 0.4, 0.8).unwrap();
        let target = damped_coherent_analytic(lambda, 1.0, 0.4, 0.8, n).unwrap();
        assert_abs_diff_eq!(rho.fidelity_pure(&target), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn rhs_is_trace_free() {
        let psi = FockVector::coherent_truncated(c(1.0, 1.0), 12);
        let v = psi.amplitudes();
        let d = lindblad_rhs(&(v * v.adjoint()), 0.7, 1.3);
        assert!(d.trace().norm() < 1e-14);
    }

    #[test]
    fn loss_amplitudes_reject_negative_rate() {
        assert!(loss_amplitudes(-1.0, 0.0, 1.0).is_err());
        let a = loss_amplitudes(0.0, 1.0, 2.0).unwrap();
        assert_eq!(a.beta().norm(), 0.0);
    }
}
