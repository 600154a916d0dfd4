//! Two-particle wavefunction on a product grid; row index is `x_A`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::scenario::{GridSpec, Packet, Potential, ScatteringScenario};
use crate::error::{Error, Result};
use crate::fock::entropy_bits;

/// Cells at each edge watched by the proximity monitor.
pub const EDGE_CELLS: usize = 5;
/// Marginal density above which a packet counts as touching the edge.
pub const EDGE_DENSITY_TOL: f64 = 1e-8;

/// Normalised Gaussian packet sampled on a grid.
pub fn packet_on_grid(grid: &GridSpec, packet: &Packet) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = grid
        .points()
        .into_iter()
        .map(|x| {
            let d = x - packet.center;
            Complex64::from_polar((-d * d / (4.0 * packet.width * packet.width)).exp(), packet.momentum * x)
        })
        .collect();
    let norm = (v.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.dx()).sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    v
}

#[derive(Clone, Debug)]
pub struct GridWavefunction2D {
    /// Row-major, `psi[i_a * n_b + i_b]`.
    pub psi: Vec<Complex64>,
    pub grid_a: GridSpec,
    pub grid_b: GridSpec,
    pub m_a: f64,
    pub m_b: f64,
}

impl GridWavefunction2D {
    pub fn product(
        grid_a: GridSpec,
        grid_b: GridSpec,
        m_a: f64,
        m_b: f64,
        phi_a: &[Complex64],
        phi_b: &[Complex64],
    ) -> Result<Self> {
        if phi_a.len() != grid_a.n || phi_b.len() != grid_b.n {
            return Err(Error::Dimension("factor lengths do not match the grids".into()));
        }
        let psi = phi_a
            .iter()
            .flat_map(|a| phi_b.iter().map(move |b| a * b))
            .collect();
        Ok(Self { psi, grid_a, grid_b, m_a, m_b })
    }

    /// Product of the two Gaussian packets of a scenario.
    pub fn initial(scenario: &ScatteringScenario) -> Self {
        let a = packet_on_grid(&scenario.grid_a, &scenario.packet_a);
        let b = packet_on_grid(&scenario.grid_b, &scenario.packet_b);
        Self::product(scenario.grid_a, scenario.grid_b, scenario.mass_a, scenario.mass_b, &a, &b)
            .expect("packets sampled on their own grids")
    }

    pub fn n_a(&self) -> usize {
        self.grid_a.n
    }

    pub fn n_b(&self) -> usize {
        self.grid_b.n
    }

    pub fn dx_a(&self) -> f64 {
        self.grid_a.dx()
    }

    pub fn dx_b(&self) -> f64 {
        self.grid_b.dx()
    }

    pub fn cell_area(&self) -> f64 {
        self.dx_a() * self.dx_b()
    }

    pub fn at(&self, i_a: usize, i_b: usize) -> Complex64 {
        self.psi[i_a * self.n_b() + i_b]
    }

    /// `sum |psi|^2 dx_a dx_b`.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.cell_area()
    }

    /// `psi sqrt(dx_a dx_b)` as an `n_a x n_b` matrix: its singular values
    /// squared are the Schmidt weights.
    pub fn scaled_matrix(&self) -> DMatrix<Complex64> {
        let s = self.cell_area().sqrt();
        DMatrix::from_row_iterator(self.n_a(), self.n_b(), self.psi.iter().map(|c| c * s))
    }

    /// Marginal densities `(rho_A(x_a), rho_B(x_b))`.
    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let (n_a, n_b) = (self.n_a(), self.n_b());
        let mut ra = vec![0.0; n_a];
        let mut rb = vec![0.0; n_b];
        for i in 0..n_a {
            for j in 0..n_b {
                let p = self.psi[i * n_b + j].norm_sqr();
                ra[i] += p;
                rb[j] += p;
            }
        }
        ra.iter_mut().for_each(|p| *p *= self.dx_b());
        rb.iter_mut().for_each(|p| *p *= self.dx_a());
        (ra, rb)
    }

    /// `(<x_A>, <x_B>)`.
    pub fn mean_positions(&self) -> (f64, f64) {
        let (ra, rb) = self.marginals();
        let mean = |rho: &[f64], g: &GridSpec| -> f64 {
            let total: f64 = rho.iter().sum();
            rho.iter().enumerate().map(|(i, p)| p * g.x(i)).sum::<f64>() / total
        };
        (mean(&ra, &self.grid_a), mean(&rb, &self.grid_b))
    }

    /// Position spreads `(sigma_A, sigma_B)`.
    pub fn widths(&self) -> (f64, f64) {
        let (ra, rb) = self.marginals();
        let width = |rho: &[f64], g: &GridSpec| -> f64 {
            let total: f64 = rho.iter().sum();
            let m = rho.iter().enumerate().map(|(i, p)| p * g.x(i)).sum::<f64>() / total;
            let v = rho.iter().enumerate().map(|(i, p)| p * (g.x(i) - m).powi(2)).sum::<f64>() / total;
            v.sqrt()
        };
        (width(&ra, &self.grid_a), width(&rb, &self.grid_b))
    }

    /// Fails if either marginal exceeds [`EDGE_DENSITY_TOL`] within
    /// [`EDGE_CELLS`] of a box edge.
    pub fn check_edges(&self, t: f64) -> Result<()> {
        let (ra, rb) = self.marginals();
        for (axis, rho) in [('A', &ra), ('B', &rb)] {
            let n = rho.len();
            let k = EDGE_CELLS.min(n);
            let density = rho[..k]
                .iter()
                .chain(&rho[n - k..])
                .copied()
                .fold(0.0, f64::max);
            if density > EDGE_DENSITY_TOL {
                return Err(Error::EdgeProximity { t, axis, density });
            }
        }
        Ok(())
    }

    /// Entanglement entropy from the singular values of [`Self::scaled_matrix`].
    pub fn entanglement_entropy(&self) -> f64 {
        let sv = self.scaled_matrix().singular_values();
        let weights: Vec<f64> = sv.iter().map(|s| s * s).collect();
        let total: f64 = weights.iter().sum();
        entropy_bits(weights.iter().map(|w| w / total))
    }

    /// Same quantity by diagonalising the traced `rho_A`.
    pub fn entropy_from_reduced_density(&self) -> f64 {
        let m = self.scaled_matrix();
        let rho_a = &m * m.adjoint();
        let herm = (&rho_a + rho_a.adjoint()).scale(0.5);
        let ev = herm.symmetric_eigenvalues();
        let total: f64 = ev.iter().map(|x| x.max(0.0)).sum();
        entropy_bits(ev.iter().map(|x| x.max(0.0) / total))
    }

    /// `<H>` with kinetic terms evaluated spectrally.
    pub fn energy(&self, potential: &Potential) -> f64 {
        let (n_a, n_b) = (self.n_a(), self.n_b());
        let mut planner = FftPlanner::new();
        let fft_b = planner.plan_fft_forward(n_b);
        let fft_a = planner.plan_fft_forward(n_a);
        let (k_a, k_b) = (self.grid_a.wavenumbers(), self.grid_b.wavenumbers());

        let mut rows = self.psi.clone();
        fft_b.process(&mut rows);
        let mut kin_b = 0.0;
        for row in rows.chunks(n_b) {
            kin_b += row
                .iter()
                .zip(&k_b)
                .map(|(c, k)| c.norm_sqr() * k * k)
                .sum::<f64>();
        }
        kin_b *= 0.5 / self.m_b / n_b as f64;

        let mut cols = transpose(&self.psi, n_a, n_b);
        fft_a.process(&mut cols);
        let mut kin_a = 0.0;
        for col in cols.chunks(n_a) {
            kin_a += col
                .iter()
                .zip(&k_a)
                .map(|(c, k)| c.norm_sqr() * k * k)
                .sum::<f64>();
        }
        kin_a *= 0.5 / self.m_a / n_a as f64;

        let (xa, xb) = (self.grid_a.points(), self.grid_b.points());
        let mut pot = 0.0;
        for i in 0..n_a {
            for j in 0..n_b {
                pot += self.psi[i * n_b + j].norm_sqr() * potential.eval(xa[i] - xb[j]);
            }
        }
        (kin_a + kin_b + pot) * self.cell_area()
    }

    /// `|<phi_A phi_B | psi>|^2` for normalised single-particle factors.
    pub fn product_fidelity(&self, phi_a: &[Complex64], phi_b: &[Complex64]) -> f64 {
        let n_b = self.n_b();
        let mut overlap = Complex64::new(0.0, 0.0);
        for (i, a) in phi_a.iter().enumerate() {
            let row = &self.psi[i * n_b..(i + 1) * n_b];
            let inner: Complex64 = row.iter().zip(phi_b).map(|(p, b)| b.conj() * p).sum();
            overlap += a.conj() * inner;
        }
        (overlap * self.cell_area()).norm_sqr()
    }

    /// State with the particle labels exchanged (`psi^T`).
    pub fn swapped(&self) -> Self {
        Self {
            psi: transpose(&self.psi, self.n_a(), self.n_b()),
            grid_a: self.grid_b,
            grid_b: self.grid_a,
            m_a: self.m_b,
            m_b: self.m_a,
        }
    }
}

/// Row-major `rows x cols` to row-major `cols x rows`.
pub(crate) fn transpose(src: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    transpose_into(src, &mut out, rows, cols);
    out
}

pub(crate) fn transpose_into(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    for r0 in (0..rows).step_by(BLOCK) {
        for c0 in (0..cols).step_by(BLOCK) {
            for r in r0..(r0 + BLOCK).min(rows) {
                for c in c0..(c0 + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

pub(crate) fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize, length: f64) -> GridSpec {
        GridSpec { n, length, center: 0.0 }
    }

    #[test]
    fn product_state_has_no_entropy() {
        let g = grid(64, 20.0);
        let a = packet_on_grid(&g, &Packet { center: -1.0, width: 1.0, momentum: 0.5 });
        let b = packet_on_grid(&g, &Packet { center: 2.0, width: 0.8, momentum: -1.0 });
        let psi = GridWavefunction2D::product(g, g, 1.0, 1.0, &a, &b).unwrap();
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
        assert!(psi.entanglement_entropy() <= 1e-8);
        assert!(psi.entropy_from_reduced_density() <= 1e-8);
    }

    #[test]
    fn two_term_superposition_is_one_bit() {
        let g = grid(64, 20.0);
        let g1 = packet_on_grid(&g, &Packet { center: -5.0, width: 0.7, momentum: 0.0 });
        let g2 = packet_on_grid(&g, &Packet { center: 5.0, width: 0.7, momentum: 0.0 });
        let h1 = packet_on_grid(&g, &Packet { center: 0.0, width: 1.0, momentum: 0.0 });
        // odd first excited profile, orthogonal to h1
        let h2: Vec<Complex64> = {
            let raw: Vec<Complex64> = g.points().iter().zip(&h1).map(|(x, c)| c * *x).collect();
            let n = (raw.iter().map(|c| c.norm_sqr()).sum::<f64>() * g.dx()).sqrt();
            raw.into_iter().map(|c| c / n).collect()
        };
        let p1 = GridWavefunction2D::product(g, g, 1.0, 1.0, &g1, &h1).unwrap();
        let p2 = GridWavefunction2D::product(g, g, 1.0, 1.0, &g2, &h2).unwrap();
        let psi = GridWavefunction2D {
            psi: p1.psi.iter().zip(&p2.psi).map(|(x, y)| (x + y) * std::f64::consts::FRAC_1_SQRT_2).collect(),
            ..p1
        };
        assert_abs_diff_eq!(psi.entanglement_entropy(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(psi.entropy_from_reduced_density(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn free_packet_energy() {
        // E = p^2 / 2m + 1 / (8 m sigma^2) per particle
        let g = grid(256, 40.0);
        let (pa, pb) = (
            Packet { center: -3.0, width: 1.0, momentum: 1.5 },
            Packet { center: 3.0, width: 0.5, momentum: -0.5 },
        );
        let a = packet_on_grid(&g, &pa);
        let b = packet_on_grid(&g, &pb);
        let psi = GridWavefunction2D::product(g, g, 2.0, 3.0, &a, &b).unwrap();
        let expected = 1.5 * 1.5 / 4.0 + 1.0 / 16.0 + 0.25 / 6.0 + 1.0 / (24.0 * 0.25);
        assert_abs_diff_eq!(psi.energy(&Potential::None), expected, epsilon = 1e-10);
        let (xa, xb) = psi.mean_positions();
        assert_abs_diff_eq!(xa, -3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(xb, 3.0, epsilon = 1e-10);
    }

    #[test]
    fn edge_monitor_trips() {
        let g = grid(64, 10.0);
        let near = packet_on_grid(&g, &Packet { center: 4.0, width: 0.5, momentum: 0.0 });
        let mid = packet_on_grid(&g, &Packet { center: 0.0, width: 0.5, momentum: 0.0 });
        let ok = GridWavefunction2D::product(g, g, 1.0, 1.0, &mid, &mid).unwrap();
        assert!(ok.check_edges(0.0).is_ok());
        let bad = GridWavefunction2D::product(g, g, 1.0, 1.0, &mid, &near).unwrap();
        assert!(matches!(bad.check_edges(0.5), Err(Error::EdgeProximity { axis: 'B', .. })));
    }

    #[test]
    fn transpose_round_trip() {
        let src: Vec<Complex64> = (0..35).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let t = transpose(&src, 5, 7);
        for (r, c) in [(0, 0), (0, 1), (3, 6), (4, 2)] {
            assert_eq!(t[c * 5 + r], src[r * 7 + c]);
        }
        assert_eq!(transpose(&t, 7, 5), src);
    }
}
