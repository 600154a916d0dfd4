//! Truncated Fock-space state algebra.
//!
//! A single mode is represented on occupation numbers `0..=n_trunc`; a pair of
//! modes (system, environment) as a matrix of amplitudes with the system
//! occupation on the rows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Allowed deviation of a squared norm from one.
pub const NORM_TOL: f64 = 1e-10;
/// Default Poisson tail mass tolerated when truncating a coherent state.
pub const TAIL_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
/// Eigenvalues in `[-EIGEN_CLIP, 0)` are rounding noise and clipped to zero.
pub const EIGEN_CLIP: f64 = 1e-8;
/// Probabilities below this contribute nothing to an entropy.
pub const ENTROPY_FLOOR: f64 = 1e-12;
/// Schmidt coefficients below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ln k!` for `k = 0..=n_max`.
pub fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n_max {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Natural log of the binomial coefficient `n choose m`, from a factorial table.
pub fn ln_binomial(ln_fact: &[f64], n: usize, m: usize) -> f64 {
    ln_fact[n] - ln_fact[m] - ln_fact[n - m]
}

/// Poisson probabilities `e^{-mu} mu^n / n!` for `n` until the terms are
/// negligible against `floor`, evaluated in log space.
fn poisson_terms(mean: f64, floor: f64) -> Vec<f64> {
    if mean == 0.0 {
        return vec![1.0];
    }
    let ln_mean = mean.ln();
    let ln_floor = floor.ln() - 40.0;
    let mut terms = Vec::new();
    let mut ln_p = -mean;
    let mut n = 0usize;
    loop {
        terms.push(ln_p.exp());
        if (n as f64) > mean && ln_p < ln_floor {
            break;
        }
        n += 1;
        ln_p += ln_mean - (n as f64).ln();
    }
    terms
}

/// Poisson mass above `n_trunc` for mean occupation `mean`.
pub fn poisson_tail(mean: f64, n_trunc: usize) -> f64 {
    let terms = poisson_terms(mean, TAIL_TOL.min(1e-30));
    // summed from the small end for accuracy
    terms.iter().skip(n_trunc + 1).rev().sum()
}

/// Smallest `N` whose Poisson tail `sum_{n>N} e^{-|l|^2}|l|^{2n}/n!` is below `tail_tol`.
pub fn auto_truncation(lambda: Complex64, tail_tol: f64) -> usize {
    let terms = poisson_terms(lambda.norm_sqr(), tail_tol);
    let mut suffix = vec![0.0; terms.len() + 1];
    for n in (0..terms.len()).rev() {
        suffix[n] = suffix[n + 1] + terms[n];
    }
    (0..terms.len())
        .find(|&n| suffix[n + 1] < tail_tol)
        .unwrap_or(terms.len() - 1)
}

/// Coherent-state amplitudes `e^{-|l|^2/2} l^n / sqrt(n!)` on `0..=n_trunc`,
/// without renormalisation.
pub fn coherent_amplitudes(lambda: Complex64, n_trunc: usize) -> DVector<Complex64> {
    let mut out = DVector::from_element(n_trunc + 1, ZERO);
    let r = lambda.norm();
    if r == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let ln_fact = ln_factorials(n_trunc);
    let (ln_r, phase) = (r.ln(), lambda.arg());
    for n in 0..=n_trunc {
        let nf = n as f64;
        let magnitude = (-0.5 * r * r + nf * ln_r - 0.5 * ln_fact[n]).exp();
        out[n] = Complex64::from_polar(magnitude, nf * phase);
    }
    out
}

fn check_tail(lambda: Complex64, n_trunc: usize) -> Result<()> {
    let tail = poisson_tail(lambda.norm_sqr(), n_trunc);
    if tail > TAIL_TOL {
        return Err(Error::TruncationTooSmall {
            n_trunc,
            tail,
            threshold: TAIL_TOL,
        });
    }
    Ok(())
}

fn norm_sq(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Apply the annihilation operator: `c'_n = sqrt(n+1) c_{n+1}`, top entry zero.
pub fn annihilate_amplitudes(v: &DVector<Complex64>) -> DVector<Complex64> {
    let dim = v.len();
    DVector::from_fn(dim, |n, _| {
        if n + 1 < dim {
            v[n + 1] * ((n + 1) as f64).sqrt()
        } else {
            ZERO
        }
    })
}

/// Pure state of a single truncated mode.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: DVector<Complex64>,
}

impl FockVector {
    /// Wraps amplitudes that are already unit norm.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty amplitude vector".into()));
        }
        let n = norm_sq(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let n = norm_sq(&amplitudes);
        if amplitudes.is_empty() || !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(n.sqrt()),
        })
    }

    pub fn fock(n: usize, n_trunc: usize) -> Result<Self> {
        if n > n_trunc {
            return Err(Error::Dimension(format!(
                "Fock level {n} exceeds truncation {n_trunc}"
            )));
        }
        let mut amplitudes = DVector::from_element(n_trunc + 1, ZERO);
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn vacuum(n_trunc: usize) -> Self {
        Self::fock(0, n_trunc).expect("vacuum fits any truncation")
    }

    /// Coherent state `|lambda>`; rejects truncations whose Poisson tail
    /// exceeds [`TAIL_TOL`].
    pub fn coherent(lambda: Complex64, n_trunc: usize) -> Result<Self> {
        check_tail(lambda, n_trunc)?;
        Ok(Self::coherent_truncated(lambda, n_trunc))
    }

    /// Coherent state on an explicitly accepted, possibly lossy, truncation.
    pub fn coherent_truncated(lambda: Complex64, n_trunc: usize) -> Self {
        Self::normalized(coherent_amplitudes(lambda, n_trunc))
            .expect("the vacuum component of a coherent state is nonzero")
    }

    /// Coherent state on the default automatic truncation.
    pub fn coherent_auto(lambda: Complex64) -> Self {
        Self::coherent_truncated(lambda, auto_truncation(lambda, TAIL_TOL))
    }

    /// Even cat state `(|lambda> + |-lambda>) / sqrt(2(1 + e^{-2|lambda|^2}))`.
    pub fn kitten(lambda: Complex64, n_trunc: usize) -> Result<Self> {
        check_tail(lambda, n_trunc)?;
        Ok(Self::kitten_truncated(lambda, n_trunc))
    }

    pub fn kitten_truncated(lambda: Complex64, n_trunc: usize) -> Self {
        let r2 = lambda.norm_sqr();
        let prefactor = 1.0 / (2.0 * (1.0 + (-2.0 * r2).exp())).sqrt();
        let mut amps = coherent_amplitudes(lambda, n_trunc);
        for (n, c) in amps.iter_mut().enumerate() {
            // odd terms of lambda^n + (-lambda)^n cancel exactly
            *c = if n % 2 == 0 { *c * (2.0 * prefactor) } else { ZERO };
        }
        Self::normalized(amps).expect("kitten amplitudes are nonzero at n=0")
    }

    pub fn kitten_auto(lambda: Complex64) -> Self {
        Self::kitten_truncated(lambda, auto_truncation(lambda, TAIL_TOL))
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn n_trunc(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amplitudes)
    }

    /// `<self|other>`; the shorter vector is zero-padded.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn mean_occupation(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// `a|psi>`, not renormalised.
    pub fn annihilate(&self) -> DVector<Complex64> {
        annihilate_amplitudes(&self.amplitudes)
    }
}

/// Which factor of a two-mode state survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Environment,
}

/// Joint pure state of system and environment; rows index the system
/// occupation, columns the environment occupation.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amplitudes: DMatrix<Complex64>,
}

impl TwoModeState {
    pub fn new(amplitudes: DMatrix<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty two-mode state".into()));
        }
        let n = amplitudes.norm_squared();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: DMatrix<Complex64>) -> Result<Self> {
        let n = amplitudes.norm_squared();
        if amplitudes.is_empty() || !(n > 0.0) {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(n.sqrt()),
        })
    }

    /// `|system> (x) |environment>`.
    pub fn product(system: &FockVector, environment: &FockVector) -> Self {
        Self {
            amplitudes: system.amplitudes() * environment.amplitudes().transpose(),
        }
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    pub fn n_trunc_s(&self) -> usize {
        self.amplitudes.nrows() - 1
    }

    pub fn n_trunc_e(&self) -> usize {
        self.amplitudes.ncols() - 1
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Mean occupations `(<n_S>, <n_E>)`.
    pub fn mean_occupations(&self) -> (f64, f64) {
        let mut ns = 0.0;
        let mut ne = 0.0;
        for j in 0..self.amplitudes.ncols() {
            for i in 0..self.amplitudes.nrows() {
                let p = self.amplitudes[(i, j)].norm_sqr();
                ns += i as f64 * p;
                ne += j as f64 * p;
            }
        }
        (ns, ne)
    }

    pub fn partial_trace(&self, keep: Subsystem) -> DensityMatrix {
        partial_trace(self, keep)
    }

    pub fn schmidt(&self) -> SchmidtDecomposition {
        schmidt(self)
    }
}

/// Reduced state of one factor of a pure two-mode state.
pub fn partial_trace(state: &TwoModeState, keep: Subsystem) -> DensityMatrix {
    let a = state.amplitudes();
    let gram = match keep {
        Subsystem::System => a * a.adjoint(),
        Subsystem::Environment => a.transpose() * a.conjugate(),
    };
    DensityMatrix::from_entries_unchecked(hermitian_part(&gram))
}

fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Mixed state on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.is_empty() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let deviation = (&entries - entries.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let rho = Self { entries };
        rho.validate()?;
        Ok(rho)
    }

    /// Hermitizes `(M + M^dagger)/2`, then validates.
    pub fn from_hermitian_part(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.is_empty() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        let rho = Self {
            entries: hermitian_part(&entries),
        };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_entries_unchecked(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    /// Trace and spectrum checks.
    pub fn validate(&self) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace });
        }
        let min = self
            .raw_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -EIGEN_CLIP {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(())
    }

    pub fn pure(state: &FockVector) -> Self {
        let v = state.amplitudes();
        Self {
            entries: v * v.adjoint(),
        }
    }

    /// `|0><0|` on `0..=n_trunc`.
    pub fn vacuum(n_trunc: usize) -> Self {
        Self::pure(&FockVector::vacuum(n_trunc))
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_trunc(&self) -> usize {
        self.dim() - 1
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    fn raw_eigenvalues(&self) -> Vec<f64> {
        self.entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    /// Spectrum in non-increasing order, with rounding-level negatives clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .raw_eigenvalues()
            .into_iter()
            .map(|x| if x < 0.0 { 0.0 } else { x })
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn entropy_bits(&self) -> f64 {
        von_neumann_entropy(self)
    }

    pub fn mean_occupation(&self) -> f64 {
        (0..self.dim())
            .map(|n| n as f64 * self.entries[(n, n)].re)
            .sum()
    }

    /// `Tr(a rho) = sum_n sqrt(n+1) rho_{n+1,n}`.
    pub fn expect_annihilation(&self) -> Complex64 {
        (0..self.dim().saturating_sub(1))
            .map(|n| self.entries[(n + 1, n)] * ((n + 1) as f64).sqrt())
            .sum()
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_pure(&self, state: &FockVector) -> f64 {
        let v = pad(state.amplitudes(), self.dim());
        (v.adjoint() * &self.entries * &v)[(0, 0)].re
    }

    /// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
    pub fn fidelity(&self, other: &DensityMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        let root = psd_sqrt(&self.entries);
        let inner = &root * &other.entries * &root;
        let s: f64 = hermitian_part(&inner)
            .symmetric_eigenvalues()
            .iter()
            .map(|&x| x.max(0.0).sqrt())
            .sum();
        Ok(s * s)
    }

    /// `(1/2) sum |eig(rho - sigma)|`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        let diff = hermitian_part(&(&self.entries - &other.entries));
        Ok(0.5 * diff.symmetric_eigenvalues().iter().map(|x| x.abs()).sum::<f64>())
    }

    pub fn max_entry_distance(&self, other: &DensityMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok((&self.entries - &other.entries)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max))
    }

    fn check_same_dim(&self, other: &DensityMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "density matrices of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

fn pad(v: &DVector<Complex64>, dim: usize) -> DVector<Complex64> {
    DVector::from_fn(dim, |i, _| if i < v.len() { v[i] } else { ZERO })
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let roots = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0)));
    &eig.eigenvectors * roots * eig.eigenvectors.adjoint()
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.entries().iter().map(|c| c.norm_sqr()).sum()
}

/// Shannon entropy in bits; `0 log 0 := 0` below [`ENTROPY_FLOOR`].
pub fn entropy_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = probabilities
        .into_iter()
        .filter(|&p| p > ENTROPY_FLOOR)
        .map(|p| -p * p.log2())
        .sum();
    s.max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(rho.eigenvalues())
}

/// Biorthogonal expansion `sum_i k_i |u_i>|v_i>` of a two-mode pure state.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Non-increasing, above [`SCHMIDT_CUTOFF`].
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<DVector<Complex64>>,
    pub right_vectors: Vec<DVector<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn leading(&self) -> f64 {
        self.coefficients.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(self.coefficients.iter().map(|k| k * k))
    }

    /// `sum_i k_i u_i v_i^T`.
    pub fn reconstruct(&self, rows: usize, cols: usize) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(rows, cols, ZERO);
        for ((k, u), v) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            out += (u * v.transpose()).scale(*k);
        }
        out
    }
}

pub fn schmidt(state: &TwoModeState) -> SchmidtDecomposition {
    let svd = state.amplitudes().clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut out = SchmidtDecomposition {
        coefficients: Vec::new(),
        left_vectors: Vec::new(),
        right_vectors: Vec::new(),
    };
    for i in order {
        let k = svd.singular_values[i];
        if k <= SCHMIDT_CUTOFF {
            continue;
        }
        out.coefficients.push(k);
        out.left_vectors.push(u.column(i).into_owned());
        out.right_vectors.push(v_t.row(i).transpose());
    }
    out
}
