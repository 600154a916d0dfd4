//! Excitation exchange between a system mode and an environment mode that
//! starts in vacuum.
//!
//! A single excitation evolves as `|1,0> -> alpha |1,0> + beta |0,1>`. Bosonic
//! symmetry extends this to `|n,0> -> sum_m sqrt(C(n,m)) alpha^m beta^(n-m) |m, n-m>`,
//! and linearity to arbitrary system states.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ln_binomial, ln_factorials, FockVector, Subsystem, TwoModeState};

/// Survival and transfer amplitudes of one excitation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudePair {
    alpha: Complex64,
    beta: Complex64,
}

/// Allowed deviation of `|alpha|^2 + |beta|^2` from one.
pub const AMPLITUDE_TOL: f64 = 1e-10;

impl AmplitudePair {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let sum = alpha.norm_sqr() + beta.norm_sqr();
        if !sum.is_finite() || (sum - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::AmplitudeSum { sum });
        }
        Ok(Self { alpha, beta })
    }

    /// Real amplitudes with `|beta|^2 = transfer`.
    pub fn from_transfer(transfer: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transfer) {
            return Err(Error::InvalidParameter(format!(
                "transferred fraction {transfer} outside [0, 1]"
            )));
        }
        Self::new(
            Complex64::new((1.0 - transfer).sqrt(), 0.0),
            Complex64::new(transfer.sqrt(), 0.0),
        )
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// `sqrt(C(n,m)) alpha^m beta^(n-m)`, evaluated in log space.
fn branch_amplitude(ln_fact: &[f64], n: usize, m: usize, amps: &AmplitudePair) -> Complex64 {
    let k = n - m;
    let (a, b) = (amps.alpha, amps.beta);
    if (m > 0 && a.norm() == 0.0) || (k > 0 && b.norm() == 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    let mut ln_mag = 0.5 * ln_binomial(ln_fact, n, m);
    let mut phase = 0.0;
    if m > 0 {
        ln_mag += m as f64 * a.norm().ln();
        phase += m as f64 * a.arg();
    }
    if k > 0 {
        ln_mag += k as f64 * b.norm().ln();
        phase += k as f64 * b.arg();
    }
    Complex64::from_polar(ln_mag.exp(), phase)
}

/// Evolves `|n_S> (x) |0_E>` on a `(n_trunc+1) x (n_trunc+1)` grid.
pub fn evolve_fock(n: usize, amps: &AmplitudePair, n_trunc: usize) -> Result<TwoModeState> {
    if n > n_trunc {
        return Err(Error::Dimension(format!(
            "Fock level {n} exceeds truncation {n_trunc}"
        )));
    }
    let ln_fact = ln_factorials(n);
    let mut out = DMatrix::from_element(n_trunc + 1, n_trunc + 1, Complex64::new(0.0, 0.0));
    for m in 0..=n {
        out[(m, n - m)] = branch_amplitude(&ln_fact, n, m, amps);
    }
    TwoModeState::new(out)
}

/// Linear extension of [`evolve_fock`] over the Fock expansion of `psi`.
/// Both output axes share the truncation of `psi`.
pub fn evolve_system(psi: &FockVector, amps: &AmplitudePair) -> TwoModeState {
    let n_trunc = psi.n_trunc();
    let ln_fact = ln_factorials(n_trunc);
    let mut out = DMatrix::from_element(n_trunc + 1, n_trunc + 1, Complex64::new(0.0, 0.0));
    for (n, &c) in psi.amplitudes().iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for m in 0..=n {
            out[(m, n - m)] += c * branch_amplitude(&ln_fact, n, m, amps);
        }
    }
    TwoModeState::new(out).expect("exchange map preserves the norm")
}

/// Purity of the system after the exchange; one for pointer states.
pub fn factorization_check(psi: &FockVector, amps: &AmplitudePair) -> f64 {
    evolve_system(psi, amps)
        .partial_trace(Subsystem::System)
        .purity()
}
