//! Decoherence of the even cat ("kitten") state `|lambda> + |-lambda>`.
//!
//! After the exchange the system is left in
//!
//! ```text
//! rho_S = w [ |+><+| + |-><-| + D ( |+><-| + |-><+| ) ]
//! ```
//!
//! with `|+/-> = |+/- lambda alpha>`, `w = 1 / (2 (1 + e^{-2|lambda|^2}))` and
//! cross-term damping `D = e^{-2 |lambda beta|^2}`. The environment holds
//! `|+/- lambda beta>`, whose overlap is the same `D`: once it falls below
//! `e^{-10}` the environment has recorded which branch the system is in.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitudes::{AmplitudeModel, ExchangeModel};
use crate::error::{Error, Result};
use crate::exchange::{evolve_system, AmplitudePair};
use crate::fock::{auto_truncation, coherent_amplitudes, DensityMatrix, FockVector, Subsystem, TAIL_TOL};

/// Allowed disagreement between closed-form and traced coherences.
pub const COHERENCE_AGREEMENT_TOL: f64 = 1e-6;
/// Record-state overlap at which the environment counts as a record (`|lambda beta|^2 >= 5`).
pub const RECORD_THRESHOLD: f64 = 4.539_992_976_248_485e-5; // e^{-10}
/// Slack for truncation when checking the trace of the closed form.
const TRUNCATION_SLACK: f64 = 1e-10;
/// Below this relative Gram determinant the two branches coincide and the
/// cross term cannot be separated from the direct terms.
const DEGENERACY_TOL: f64 = 1e-12;

/// Cross-term damping `e^{-2 |lambda beta|^2}`.
pub fn damping_factor(lambda: Complex64, amps: &AmplitudePair) -> f64 {
    (-2.0 * (lambda * amps.beta()).norm_sqr()).exp()
}

/// The four-term reduced state assembled term by term, then divided by its
/// computed trace.
pub fn kitten_reduced_closed_form(
    lambda: Complex64,
    amps: &AmplitudePair,
    n_trunc: usize,
) -> Result<DensityMatrix> {
    let mu = lambda * amps.alpha();
    let plus = coherent_amplitudes(mu, n_trunc);
    let minus = coherent_amplitudes(-mu, n_trunc);
    let overlap_correction = (-2.0 * lambda.norm_sqr()).exp();
    let weight = 1.0 / (2.0 * (1.0 + overlap_correction));
    let damping = damping_factor(lambda, amps);

    let direct = &plus * plus.adjoint() + &minus * minus.adjoint();
    let cross = &plus * minus.adjoint() + &minus * plus.adjoint();
    let rho: DMatrix<Complex64> = (direct + cross.scale(damping)).scale(weight);

    let trace = rho.trace().re;
    if (trace - 1.0).abs() > overlap_correction + TRUNCATION_SLACK {
        return Err(Error::Invariant(format!(
            "closed-form kitten trace {trace} deviates by more than e^(-2|lambda|^2)"
        )));
    }
    DensityMatrix::from_hermitian_part(rho.unscale(trace))
}

/// Brute force: evolve the kitten through the exchange map and trace out the
/// environment.
pub fn kitten_reduced_numeric(
    lambda: Complex64,
    amps: &AmplitudePair,
    n_trunc: usize,
) -> Result<DensityMatrix> {
    let kitten = FockVector::kitten(lambda, n_trunc)?;
    Ok(evolve_system(&kitten, amps).partial_trace(Subsystem::System))
}

/// Recovers the cross-term damping from a reduced state by least-squares
/// projection onto `span{ |+><+| + |-><-|, |+><-| + |-><+| }`.
///
/// Returns `None` when `lambda alpha` is so small that both branches are the
/// vacuum and the state carries no coherence information.
pub fn coherence_metric(rho: &DensityMatrix, lambda: Complex64, amps: &AmplitudePair) -> Option<f64> {
    let n_trunc = rho.n_trunc();
    let mu = lambda * amps.alpha();
    let plus = coherent_amplitudes(mu, n_trunc);
    let minus = coherent_amplitudes(-mu, n_trunc);
    let direct = &plus * plus.adjoint() + &minus * minus.adjoint();
    let cross = &plus * minus.adjoint() + &minus * plus.adjoint();

    // Hilbert-Schmidt inner products of Hermitian operators are real
    let hs = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
    };
    let g11 = hs(&direct, &direct);
    let g22 = hs(&cross, &cross);
    let g12 = hs(&direct, &cross);
    let det = g11 * g22 - g12 * g12;
    if det <= DEGENERACY_TOL * g11 * g22 {
        return None;
    }
    let r1 = hs(&direct, rho.entries());
    let r2 = hs(&cross, rho.entries());
    let direct_weight = (g22 * r1 - g12 * r2) / det;
    let cross_weight = (g11 * r2 - g12 * r1) / det;
    Some(cross_weight / direct_weight)
}

/// Overlap `|<lambda beta | -lambda beta>|` of the environment record states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecordOverlap {
    pub overlap: f64,
    /// `overlap <= e^{-10}`.
    pub recorded: bool,
}

pub fn record_state_overlap(lambda: Complex64, amps: &AmplitudePair) -> RecordOverlap {
    let overlap = damping_factor(lambda, amps);
    RecordOverlap {
        overlap,
        recorded: overlap <= RECORD_THRESHOLD * (1.0 + 1e-12),
    }
}

/// Exact purity of the reduced kitten state,
/// `(2(1+s^2)(1+D^2) + 8 s D) / (4 (1 + s D)^2)` with `s = e^{-2|lambda alpha|^2}`.
pub fn kitten_reduced_purity(lambda: Complex64, amps: &AmplitudePair) -> f64 {
    let s = (-2.0 * (lambda * amps.alpha()).norm_sqr()).exp();
    let d = damping_factor(lambda, amps);
    (2.0 * (1.0 + s * s) * (1.0 + d * d) + 8.0 * s * d) / (4.0 * (1.0 + s * d).powi(2))
}

/// One time point of a kitten decoherence run.
#[derive(Clone, Debug, PartialEq)]
pub struct KittenReport {
    pub t: f64,
    pub coherence_closed_form: f64,
    /// `None` where the branches are indistinguishable (`lambda alpha ~ 0`).
    pub coherence_numeric: Option<f64>,
    pub purity: f64,
    pub entropy_bits: f64,
    pub record_overlap: f64,
}

/// Runs the kitten pipeline at every time point, in parallel.
///
/// Fails if the traced and closed-form coherences disagree beyond
/// [`COHERENCE_AGREEMENT_TOL`] anywhere.
pub fn kitten_timeline(
    lambda: Complex64,
    model: &ExchangeModel,
    times: &[f64],
) -> Result<Vec<KittenReport>> {
    kitten_timeline_truncated(lambda, model, times, auto_truncation(lambda, TAIL_TOL))
}

/// [`kitten_timeline`] with an explicit truncation, which must hold the kitten.
pub fn kitten_timeline_truncated(
    lambda: Complex64,
    model: &ExchangeModel,
    times: &[f64],
    n_trunc: usize,
) -> Result<Vec<KittenReport>> {
    let kitten = FockVector::kitten(lambda, n_trunc)?;
    times
        .par_iter()
        .map(|&t| {
            let amps = model.amplitudes(t);
            let rho = evolve_system(&kitten, &amps).partial_trace(Subsystem::System);
            let closed = damping_factor(lambda, &amps);
            let numeric = coherence_metric(&rho, lambda, &amps);
            if let Some(c) = numeric {
                if (c - closed).abs() > COHERENCE_AGREEMENT_TOL {
                    return Err(Error::Invariant(format!(
                        "coherence mismatch at t={t}: closed form {closed}, traced {c}"
                    )));
                }
            }
            Ok(KittenReport {
                t,
                coherence_closed_form: closed,
                coherence_numeric: numeric,
                purity: rho.purity(),
                entropy_bits: rho.entropy_bits(),
                record_overlap: record_state_overlap(lambda, &amps).overlap,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::{MarkovModel, RabiModel};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn no_coupling_gives_pure_kitten() {
        let lambda = real(2.0);
        let n = auto_truncation(lambda, TAIL_TOL);
        let rho = kitten_reduced_closed_form(lambda, &AmplitudePair::identity(), n).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
        let kitten = FockVector::kitten(lambda, n).unwrap();
        assert!(rho.fidelity_pure(&kitten) > 1.0 - 1e-10);
    }

    #[test]
    fn full_transfer_mixture() {
        let lambda = real(3.0);
        let amps = AmplitudePair::from_transfer(1.0).unwrap();
        assert!(damping_factor(lambda, &amps) <= (-18f64).exp() * (1.0 + 1e-12));
        let n = auto_truncation(lambda, TAIL_TOL);
        // system ends in vacuum: both branches collapse, purity is one
        let rho = kitten_reduced_closed_form(lambda, &amps, n).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
        // with the kitten still mostly in the system the mixture has purity 1/2
        let amps = AmplitudePair::from_transfer(0.6).unwrap();
        let rho = kitten_reduced_closed_form(lambda, &amps, n).unwrap();
        assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-3);
        assert_abs_diff_eq!(rho.purity(), kitten_reduced_purity(lambda, &amps), epsilon = 1e-10);
    }

    #[test]
    fn damping_example() {
        let amps = AmplitudePair::from_transfer(0.25).unwrap();
        let d = damping_factor(real(2.0), &amps);
        assert_abs_diff_eq!(d, (-2f64).exp(), epsilon = 1e-15);
        let n = auto_truncation(real(2.0), TAIL_TOL);
        let closed = kitten_reduced_closed_form(real(2.0), &amps, n).unwrap();
        let numeric = kitten_reduced_numeric(real(2.0), &amps, n).unwrap();
        assert!(closed.max_entry_distance(&numeric).unwrap() < 1e-6);
        let c = coherence_metric(&numeric, real(2.0), &amps).unwrap();
        assert_abs_diff_eq!(c, (-2f64).exp(), epsilon = 1e-6);
    }

    #[test]
    fn metric_on_closed_form_inputs() {
        let lambda = real(2.0);
        let n = auto_truncation(lambda, TAIL_TOL);
        let amps = AmplitudePair::identity();
        let rho = kitten_reduced_closed_form(lambda, &amps, n).unwrap();
        assert_abs_diff_eq!(coherence_metric(&rho, lambda, &amps).unwrap(), 1.0, epsilon = 1e-6);
        // |lambda beta|^2 = 5
        let amps = AmplitudePair::from_transfer(5.0 / 9.0).unwrap();
        let lambda = real(3.0);
        let n = auto_truncation(lambda, TAIL_TOL);
        let rho = kitten_reduced_closed_form(lambda, &amps, n).unwrap();
        let c = coherence_metric(&rho, lambda, &amps).unwrap();
        assert!((c - (-10f64).exp()).abs() < 1e-6 * (-10f64).exp() + 1e-15);
    }

    #[test]
    fn degenerate_branches_have_no_metric() {
        let lambda = real(1.0);
        let amps = AmplitudePair::from_transfer(1.0).unwrap();
        let rho = kitten_reduced_numeric(lambda, &amps, 20).unwrap();
        assert_eq!(coherence_metric(&rho, lambda, &amps), None);
    }

    #[test]
    fn record_states() {
        let r = record_state_overlap(real(2.0), &AmplitudePair::identity());
        assert_eq!(r.overlap, 1.0);
        assert!(!r.recorded);
        let amps = AmplitudePair::from_transfer(5.0 / 9.0).unwrap();
        let r = record_state_overlap(real(3.0), &amps);
        assert_abs_diff_eq!(r.overlap, (-10f64).exp(), epsilon = 1e-16);
        assert!(r.recorded);
        // one transferred photon on average does not suffice
        let amps = AmplitudePair::from_transfer(0.25).unwrap();
        let r = record_state_overlap(real(2.0), &amps);
        assert_abs_diff_eq!(r.overlap, (-2f64).exp(), epsilon = 1e-15);
        assert!(!r.recorded);
    }

    #[test]
    fn markov_timeline_examples() {
        let m = ExchangeModel::from(MarkovModel::new(1.0, 0.0).unwrap());
        let reports = kitten_timeline(real(2.0), &m, &[0.0]).unwrap();
        assert_abs_diff_eq!(reports[0].coherence_closed_form, 1.0);
        assert_abs_diff_eq!(reports[0].coherence_numeric.unwrap(), 1.0, epsilon = 1e-6);

        let reports = kitten_timeline(real(3.0), &m, &[2.0]).unwrap();
        let expected = (-2.0 * 9.0 * (1.0 - (-2f64).exp())).exp();
        assert_abs_diff_eq!(reports[0].coherence_closed_form, expected, epsilon = 1e-15);
    }

    #[test]
    fn rabi_eraser_revival() {
        let m = ExchangeModel::from(RabiModel::new(0.0, 1.0).unwrap());
        let times = [0.0, PI / 4.0, PI];
        let r = kitten_timeline(real(2.0), &m, &times).unwrap();
        assert!(r[1].coherence_closed_form < 0.2);
        assert_abs_diff_eq!(r[2].coherence_closed_form, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r[2].coherence_numeric.unwrap(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r[2].purity, r[0].purity, epsilon = 1e-6);
        assert_abs_diff_eq!(r[2].entropy_bits, r[0].entropy_bits, epsilon = 1e-6);
    }

    #[test]
    fn zero_lambda_is_trivial() {
        let m = ExchangeModel::from(MarkovModel::new(1.0, 0.0).unwrap());
        let r = kitten_timeline(real(0.0), &m, &[0.0, 1.0, 2.0]).unwrap();
        for row in r {
            assert_eq!(row.coherence_closed_form, 1.0);
            assert_eq!(row.coherence_numeric, None);
            assert_abs_diff_eq!(row.purity, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(row.entropy_bits, 0.0, epsilon = 1e-12);
        }
    }
}
