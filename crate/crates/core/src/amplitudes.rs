//! Time-dependent exchange amplitudes.
//!
//! Phase convention: states evolve as `exp(-i H t)`, so the carrier of both
//! models is `exp(-i omega t)`. Reduced-state purities, coherences and
//! entropies depend only on `|alpha|^2` and `|beta|^2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exchange::AmplitudePair;

pub trait AmplitudeModel {
    fn amplitudes(&self, t: f64) -> AmplitudePair;

    /// Characteristic rate used to scale time grids.
    fn rate(&self) -> f64;
}

/// Two resonant oscillators with coupling `kappa`: the excitation precesses
/// between system and environment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiModel {
    omega: f64,
    kappa: f64,
}

impl RabiModel {
    pub fn new(omega: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Rabi coupling must be positive and finite (kappa={kappa}, omega={omega})"
            )));
        }
        Ok(Self { omega, kappa })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// One-excitation block of `omega (n_S + n_E) + i kappa (a_E^dag a_S - a_E a_S^dag)`
    /// in the basis `{|1_S 0_E>, |0_S 1_E>}`.
    pub fn one_excitation_hamiltonian(&self) -> DMatrix<Complex64> {
        let (w, k) = (self.omega, self.kappa);
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(w, 0.0),
                Complex64::new(0.0, -k),
                Complex64::new(0.0, k),
                Complex64::new(w, 0.0),
            ],
        )
    }
}

impl AmplitudeModel for RabiModel {
    fn amplitudes(&self, t: f64) -> AmplitudePair {
        let carrier = Complex64::from_polar(1.0, -self.omega * t);
        let (s, c) = (self.kappa * t).sin_cos();
        AmplitudePair::new(carrier * c, carrier * s).expect("cos^2 + sin^2 = 1")
    }

    fn rate(&self) -> f64 {
        self.kappa
    }
}

/// Memory-free loss at rate `gamma`: `|alpha(t)|^2 = exp(-gamma t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkovModel {
    gamma: f64,
    omega: f64,
}

impl MarkovModel {
    pub fn new(gamma: f64, omega: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "loss rate must be positive and finite (gamma={gamma}, omega={omega})"
            )));
        }
        Ok(Self { gamma, omega })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

impl AmplitudeModel for MarkovModel {
    /// `alpha = exp(-i omega t - gamma t / 2)`, `beta = exp(-i omega t) sqrt(1 - exp(-gamma t))`.
    fn amplitudes(&self, t: f64) -> AmplitudePair {
        let carrier = Complex64::from_polar(1.0, -self.omega * t);
        let survival = (-self.gamma * t).exp();
        let transfer = -(-self.gamma * t).exp_m1();
        AmplitudePair::new(carrier * survival.sqrt(), carrier * transfer.sqrt())
            .expect("survival + transfer = 1")
    }

    fn rate(&self) -> f64 {
        self.gamma
    }
}

/// Either exchange regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExchangeModel {
    Rabi(RabiModel),
    Markov(MarkovModel),
}

impl AmplitudeModel for ExchangeModel {
    fn amplitudes(&self, t: f64) -> AmplitudePair {
        match self {
            ExchangeModel::Rabi(m) => m.amplitudes(t),
            ExchangeModel::Markov(m) => m.amplitudes(t),
        }
    }

    fn rate(&self) -> f64 {
        match self {
            ExchangeModel::Rabi(m) => m.rate(),
            ExchangeModel::Markov(m) => m.rate(),
        }
    }
}

impl From<RabiModel> for ExchangeModel {
    fn from(m: RabiModel) -> Self {
        ExchangeModel::Rabi(m)
    }
}

impl From<MarkovModel> for ExchangeModel {
    fn from(m: MarkovModel) -> Self {
        ExchangeModel::Markov(m)
    }
}

/// Outcome of [`rabi_eigencheck`].
#[derive(Clone, Debug)]
pub struct EigencheckReport {
    /// Eigenvalues of the one-excitation block, ascending.
    pub eigenvalues: [f64; 2],
    /// Largest `|H v - E v|` over the two states `|1,0> -/+ i|0,1>`.
    pub eigen_residual: f64,
    /// Largest amplitude mismatch between `exp(-iHt)|1,0>` and the model.
    pub propagation_residual: f64,
    pub passed: bool,
}

pub const EIGENCHECK_TOL: f64 = 1e-10;

/// Checks that `|1_S 0_E> +/- i |0_S 1_E>` have energies `omega +/- kappa` and
/// that exponentiating the block reproduces [`RabiModel::amplitudes`] at
/// `kappa t` in `{0.1, 0.7, 2.0}`.
pub fn rabi_eigencheck(model: &RabiModel) -> EigencheckReport {
    let h = model.one_excitation_hamiltonian();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut eigen_residual: f64 = 0.0;
    for (sign, energy) in [(1.0, model.omega + model.kappa), (-1.0, model.omega - model.kappa)] {
        let v = DVector::from_column_slice(&[
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(0.0, sign * inv_sqrt2),
        ]);
        let r = (&h * &v - v.scale(energy)).norm();
        eigen_residual = eigen_residual.max(r);
    }
    let mut eigenvalues: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));

    let mut propagation_residual: f64 = 0.0;
    for kt in [0.1, 0.7, 2.0] {
        let t = kt / model.kappa;
        let u = (h.scale(-t) * Complex64::i()).exp();
        let start = DVector::from_column_slice(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let evolved = u * start;
        let amps = model.amplitudes(t);
        let r = (evolved[0] - amps.alpha())
            .norm()
            .max((evolved[1] - amps.beta()).norm());
        propagation_residual = propagation_residual.max(r);
    }
    EigencheckReport {
        eigenvalues: [eigenvalues[0], eigenvalues[1]],
        eigen_residual,
        propagation_residual,
        passed: eigen_residual <= EIGENCHECK_TOL && propagation_residual <= EIGENCHECK_TOL,
    }
}
