//! Quick oracle checks behind `--selftest`.

use num_complex::Complex64;

use crate::amplitudes::{rabi_eigencheck, AmplitudeModel, RabiModel};
use crate::error::Result;
use crate::exchange::{evolve_system, AmplitudePair};
use crate::fock::{auto_truncation, DensityMatrix, FockVector, Subsystem, TAIL_TOL};
use crate::kitten::{coherence_metric, damping_factor, kitten_reduced_closed_form, kitten_reduced_numeric};
use crate::lindblad::{
    analytic_residual, damped_coherent_analytic, integrate_master, run_trajectories, TrajectoryConfig,
};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn transfers() -> impl Iterator<Item = f64> {
    (0..=10).map(|k| k as f64 / 10.0)
}

fn pointer_purity() -> Result<Check> {
    let lambdas = [real(1.0), real(2.0), real(3.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0)];
    let mut worst: f64 = 1.0;
    for lambda in lambdas {
        let psi = FockVector::coherent(lambda, auto_truncation(lambda, TAIL_TOL))?;
        for p in transfers() {
            let amps = AmplitudePair::from_transfer(p)?;
            worst = worst.min(evolve_system(&psi, &amps).partial_trace(Subsystem::System).purity());
        }
    }
    Ok(Check {
        name: "coherent inputs stay pure",
        passed: worst >= 1.0 - 1e-8,
        detail: format!("min purity {worst:.12}"),
    })
}

fn kitten_closed_vs_numeric() -> Result<Check> {
    let mut worst_entry: f64 = 0.0;
    let mut worst_metric: f64 = 0.0;
    for lambda in [real(1.0), real(2.0), real(3.0)] {
        let n = auto_truncation(lambda, TAIL_TOL);
        for p in transfers() {
            let amps = AmplitudePair::from_transfer(p)?;
            let closed = kitten_reduced_closed_form(lambda, &amps, n)?;
            let numeric = kitten_reduced_numeric(lambda, &amps, n)?;
            worst_entry = worst_entry.max(closed.max_entry_distance(&numeric)?);
            let d = damping_factor(lambda, &amps);
            if let Some(c) = coherence_metric(&numeric, lambda, &amps) {
                if d >= 1e-12 {
                    worst_metric = worst_metric.max((c - d).abs() / d);
                }
            }
        }
    }
    Ok(Check {
        name: "kitten closed form matches partial trace",
        passed: worst_entry <= 1e-6 && worst_metric <= 1e-4,
        detail: format!("max entry distance {worst_entry:.2e}, max damping relative error {worst_metric:.2e}"),
    })
}

fn eraser() -> Result<Check> {
    let model = RabiModel::new(0.0, 1.0)?;
    let eig = rabi_eigencheck(&model);
    let lambda = real(2.0);
    let n = auto_truncation(lambda, TAIL_TOL);
    let kitten = FockVector::kitten(lambda, n)?;
    let revived = model.amplitudes(std::f64::consts::PI);
    let rho = evolve_system(&kitten, &revived).partial_trace(Subsystem::System);
    let coherence = coherence_metric(&rho, lambda, &revived).unwrap_or(f64::NAN);
    let swapped = evolve_system(&kitten, &model.amplitudes(std::f64::consts::FRAC_PI_2));
    let env = swapped.partial_trace(Subsystem::Environment);
    let env_fidelity = env.fidelity_pure(&kitten);
    let passed = eig.passed && (coherence - 1.0).abs() <= 1e-6 && (env_fidelity - 1.0).abs() <= 1e-6;
    Ok(Check {
        name: "Rabi eraser and swap",
        passed,
        detail: format!(
            "eigen residual {:.1e}, coherence at pi {coherence:.9}, environment kitten fidelity {env_fidelity:.9}",
            eig.eigen_residual.max(eig.propagation_residual)
        ),
    })
}

fn oracle_triangle() -> Result<Check> {
    let lambda = real(2.0);
    let n = auto_truncation(lambda, TAIL_TOL);
    let psi0 = FockVector::coherent(lambda, n)?;
    let times: Vec<f64> = (0..=6).map(|i| 0.5 * i as f64).collect();
    let master = integrate_master(&DensityMatrix::pure(&psi0), 0.0, 1.0, &times)?;
    let config = TrajectoryConfig {
        gamma: 1.0,
        omega: 0.0,
        dt: 0.002,
        t_max: 3.0,
        n_traj: 2000,
        master_seed: 20_240_601,
    };
    let mc = run_trajectories(&psi0, &config, &times)?;
    let residual_n = auto_truncation(lambda, 1e-24);
    let mut min_fid: f64 = 1.0;
    let mut max_residual: f64 = 0.0;
    let mut max_td: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let target = damped_coherent_analytic(lambda, 1.0, 0.0, t, n)?;
        min_fid = min_fid.min(master.states[i].fidelity_pure(&target));
        max_residual = max_residual.max(analytic_residual(lambda, 1.0, 0.0, t, residual_n)?);
        max_td = max_td.max(master.states[i].trace_distance(&mc.states[i])?);
    }
    // 2000 trajectories: allow the 10^4-trajectory bound scaled by sqrt(5)
    let td_bound = 0.03 * 5f64.sqrt();
    Ok(Check {
        name: "damped-mode oracle triangle",
        passed: min_fid >= 1.0 - 1e-6 && max_residual <= 1e-8 && max_td <= td_bound,
        detail: format!(
            "min fidelity {min_fid:.10}, max residual {max_residual:.1e}, max trace distance {max_td:.4} (bound {td_bound:.4})"
        ),
    })
}

/// Runs every check, stopping at none; a check that errors counts as failed.
pub fn run_selftest() -> Vec<Check> {
    let checks: [(&'static str, fn() -> Result<Check>); 4] = [
        ("coherent inputs stay pure", pointer_purity),
        ("kitten closed form matches partial trace", kitten_closed_vs_numeric),
        ("Rabi eraser and swap", eraser),
        ("damped-mode oracle triangle", oracle_triangle),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            f().unwrap_or_else(|e| Check {
                name,
                passed: false,
                detail: format!("error: {e}"),
            })
        })
        .collect()
}
