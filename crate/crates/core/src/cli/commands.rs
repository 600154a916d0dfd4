//! The four subcommands. Each builds a [`Table`] plus its parameter record.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::args::{InitialKind, InputKind, KittenArgs, LindbladArgs, ModelKind, PointerArgs, Truncation, TwobodyArgs};
use super::output::{Cell, Table};
use crate::amplitudes::{ExchangeModel, MarkovModel, RabiModel};
use crate::error::{Error, Result};
use crate::exchange::{evolve_system, AmplitudePair};
use crate::fock::{auto_truncation, ln_factorials, DensityMatrix, FockVector, Subsystem, TAIL_TOL};
use crate::kitten::{kitten_reduced_purity, kitten_timeline_truncated};
use crate::lindblad::{
    analytic_reduced_state, damped_coherent_analytic, integrate_master, run_trajectories, TrajectoryConfig,
};
use crate::twobody::{run_scenario, RunOptions, ScatteringScenario};

pub struct CommandOutput {
    pub subcommand: &'static str,
    pub params: Value,
    pub seed: u64,
    pub table: Table,
    pub units: &'static str,
}

pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn resolve_truncation(trunc: Truncation, lambda: Complex64) -> usize {
    match trunc {
        Truncation::Auto => auto_truncation(lambda, TAIL_TOL),
        Truncation::Fixed(n) => n,
    }
}

fn require(cond: bool, message: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(message()))
    }
}

pub fn kitten(args: &KittenArgs) -> Result<CommandOutput> {
    require(args.dt > 0.0 && args.dt.is_finite(), || format!("--dt must be positive, got {}", args.dt))?;
    require(args.tmax >= 0.0 && args.tmax.is_finite(), || format!("--tmax must be non-negative, got {}", args.tmax))?;
    let model: ExchangeModel = match args.model {
        ModelKind::Rabi => RabiModel::new(args.omega, args.kappa)?.into(),
        ModelKind::Markov => MarkovModel::new(args.gamma, args.omega)?.into(),
    };
    let n_trunc = resolve_truncation(args.trunc, args.lambda);
    let n_rows = (args.tmax / args.dt).round() as usize;
    let times: Vec<f64> = (0..n_rows).map(|i| i as f64 * args.dt).collect();
    let reports = kitten_timeline_truncated(args.lambda, &model, &times, n_trunc)?;

    let mut table = Table::new(&[
        "t",
        "coherence_closed_form",
        "coherence_numeric",
        "purity",
        "entropy_bits",
        "record_overlap",
    ]);
    for r in reports {
        table.push(vec![
            r.t.into(),
            r.coherence_closed_form.into(),
            r.coherence_numeric.unwrap_or(f64::NAN).into(),
            r.purity.into(),
            r.entropy_bits.into(),
            r.record_overlap.into(),
        ]);
    }
    let model_params = match args.model {
        ModelKind::Rabi => json!({"name": "rabi", "kappa": args.kappa, "omega": args.omega}),
        ModelKind::Markov => json!({"name": "markov", "gamma": args.gamma, "omega": args.omega}),
    };
    Ok(CommandOutput {
        subcommand: "kitten",
        params: json!({
            "lambda": format_complex(args.lambda),
            "model": model_params,
            "tmax": args.tmax,
            "dt": args.dt,
            "n_trunc": n_trunc,
        }),
        seed: args.output.seed,
        table,
        units: "t in units of 1/rate (hbar = 1); entropy in bits; coherence_numeric nan where undefined",
    })
}

/// Purity of `|n>` after the exchange: `sum_m [C(n,m) q^m (1-q)^(n-m)]^2`, `q = |alpha|^2`.
fn fock_exchange_purity(n: usize, transfer: f64) -> f64 {
    let ln_fact = ln_factorials(n);
    let q = 1.0 - transfer;
    (0..=n)
        .map(|m| {
            let c = (ln_fact[n] - ln_fact[m] - ln_fact[n - m]).exp();
            let w = c * q.powi(m as i32) * (1.0 - q).powi((n - m) as i32);
            w * w
        })
        .sum()
}

pub fn pointer(args: &PointerArgs) -> Result<CommandOutput> {
    require(args.steps >= 1, || "--steps must be at least 1".into())?;
    let lambdas: Vec<Complex64> = match args.input {
        InputKind::Fock => vec![Complex64::new(0.0, 0.0)],
        _ if args.lambda.is_empty() => vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(1.0, 2.0),
        ],
        _ => args.lambda.clone(),
    };
    let label = match args.input {
        InputKind::Coherent => "coherent",
        InputKind::Fock => "fock",
        InputKind::Kitten => "kitten",
    };
    let mut table = Table::new(&[
        "input",
        "lambda_re",
        "lambda_im",
        "beta_sq",
        "purity",
        "schmidt_leading",
        "expected_purity",
    ]);
    let mut truncations = Vec::new();
    for &lambda in &lambdas {
        let psi = match args.input {
            InputKind::Coherent => FockVector::coherent(lambda, resolve_truncation(args.trunc, lambda))?,
            InputKind::Kitten => FockVector::kitten(lambda, resolve_truncation(args.trunc, lambda))?,
            InputKind::Fock => {
                let n_trunc = match args.trunc {
                    Truncation::Auto => args.fock_n,
                    Truncation::Fixed(n) => n,
                };
                require(n_trunc >= args.fock_n, || {
                    format!("--trunc {n_trunc} cannot hold the Fock state |{}>", args.fock_n)
                })?;
                FockVector::fock(args.fock_n, n_trunc)?
            }
        };
        truncations.push(psi.n_trunc());
        for k in 0..=args.steps {
            let transfer = k as f64 / args.steps as f64;
            let amps = AmplitudePair::from_transfer(transfer)?;
            let joint = evolve_system(&psi, &amps);
            let purity = joint.partial_trace(Subsystem::System).purity();
            let expected = match args.input {
                InputKind::Coherent => 1.0,
                InputKind::Fock => fock_exchange_purity(args.fock_n, transfer),
                InputKind::Kitten => kitten_reduced_purity(lambda, &amps),
            };
            table.push(vec![
                label.into(),
                lambda.re.into(),
                lambda.im.into(),
                transfer.into(),
                purity.into(),
                joint.schmidt().leading().into(),
                expected.into(),
            ]);
        }
    }
    Ok(CommandOutput {
        subcommand: "pointer",
        params: json!({
            "input": label,
            "lambda": lambdas.iter().map(|z| format_complex(*z)).collect::<Vec<_>>(),
            "fock_n": args.fock_n,
            "steps": args.steps,
            "n_trunc": truncations,
        }),
        seed: args.output.seed,
        table,
        units: "beta_sq = |beta|^2 transferred fraction; purity = Tr rho_S^2",
    })
}

pub fn lindblad(args: &LindbladArgs) -> Result<CommandOutput> {
    require(args.gamma >= 0.0 && args.gamma.is_finite(), || format!("--gamma must be non-negative, got {}", args.gamma))?;
    require(args.tmax >= 0.0 && args.tmax.is_finite(), || format!("--tmax must be non-negative, got {}", args.tmax))?;
    require(args.dt > 0.0 && args.sample_dt > 0.0, || "--dt and --sample-dt must be positive".into())?;
    let ratio = args.sample_dt / args.dt;
    require((ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) && ratio.round() >= 1.0, || {
        format!("--sample-dt {} must be a multiple of --dt {}", args.sample_dt, args.dt)
    })?;
    require(args.ntraj >= 1, || "--ntraj must be at least 1".into())?;

    let psi0 = match args.initial {
        InitialKind::Coherent => FockVector::coherent(args.lambda, resolve_truncation(args.trunc, args.lambda))?,
        InitialKind::Fock => {
            let n_trunc = match args.trunc {
                Truncation::Auto => args.fock_n,
                Truncation::Fixed(n) => n,
            };
            require(n_trunc >= args.fock_n, || {
                format!("--trunc {n_trunc} cannot hold the Fock state |{}>", args.fock_n)
            })?;
            FockVector::fock(args.fock_n, n_trunc)?
        }
    };
    let n_trunc = psi0.n_trunc();
    let budget = args.dt * args.gamma * n_trunc as f64;
    require(budget < 0.1, || {
        format!("--dt too large: dt * gamma * n_trunc = {budget} must stay below 0.1")
    })?;

    let steps_per_sample = ratio.round() as usize;
    let n_samples = (args.tmax / args.sample_dt).round() as usize;
    let times: Vec<f64> = (0..=n_samples)
        .map(|k| (k * steps_per_sample) as f64 * args.dt)
        .collect();
    let t_last = *times.last().expect("at least t = 0");

    let rho0 = DensityMatrix::pure(&psi0);
    let master = integrate_master(&rho0, args.omega, args.gamma, &times)?;
    let config = TrajectoryConfig {
        gamma: args.gamma,
        omega: args.omega,
        dt: args.dt,
        t_max: t_last,
        n_traj: args.ntraj,
        master_seed: args.output.seed,
    };
    let mc = run_trajectories(&psi0, &config, &times)?;
    let n0 = psi0.mean_occupation();

    let mut table = Table::new(&[
        "t",
        "mean_n_analytic",
        "mean_n_master",
        "mean_n_mc",
        "trace_distance_master_mc",
        "fidelity_master_analytic",
    ]);
    for (i, &t) in times.iter().enumerate() {
        let rho_m = &master.states[i];
        let fidelity = match args.initial {
            InitialKind::Coherent => {
                rho_m.fidelity_pure(&damped_coherent_analytic(args.lambda, args.gamma, args.omega, t, n_trunc)?)
            }
            InitialKind::Fock => rho_m.fidelity(&analytic_reduced_state(&psi0, args.gamma, args.omega, t)?)?,
        };
        table.push(vec![
            t.into(),
            (n0 * (-args.gamma * t).exp()).into(),
            rho_m.mean_occupation().into(),
            mc.states[i].mean_occupation().into(),
            rho_m.trace_distance(&mc.states[i])?.into(),
            fidelity.into(),
        ]);
    }
    let initial = match args.initial {
        InitialKind::Coherent => json!({"kind": "coherent", "lambda": format_complex(args.lambda)}),
        InitialKind::Fock => json!({"kind": "fock", "n": args.fock_n}),
    };
    Ok(CommandOutput {
        subcommand: "lindblad",
        params: json!({
            "initial": initial,
            "gamma": args.gamma,
            "omega": args.omega,
            "tmax": args.tmax,
            "dt": args.dt,
            "sample_dt": args.sample_dt,
            "ntraj": args.ntraj,
            "n_trunc": n_trunc,
        }),
        seed: args.output.seed,
        table,
        units: "t in units of 1/gamma when gamma = 1 (hbar = 1); mean_n in quanta",
    })
}

pub fn twobody(args: &TwobodyArgs) -> Result<CommandOutput> {
    let text = std::fs::read_to_string(&args.scenario).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot read scenario {}: {e}", args.scenario.display()),
        ))
    })?;
    let scenario = ScatteringScenario::parse(&text)?;
    let run = run_scenario(&scenario, RunOptions::default())?;
    let mut table = Table::new(&["t", "entropy_bits", "norm", "energy", "x_a_mean", "x_b_mean"]);
    for s in &run.samples {
        table.push(
            [s.t, s.entropy_bits, s.norm, s.energy, s.x_a_mean, s.x_b_mean]
                .into_iter()
                .map(Cell::from)
                .collect(),
        );
    }
    Ok(CommandOutput {
        subcommand: "twobody",
        params: json!({
            "scenario_file": args.scenario.display().to_string(),
            "scenario": scenario.to_config_string(),
        }),
        seed: args.output.seed,
        table,
        units: "hbar = 1; lengths, masses and times in scenario units; entropy in bits",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fock_purity_formula() {
        assert_abs_diff_eq!(fock_exchange_purity(1, 0.5), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(fock_exchange_purity(1, 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fock_exchange_purity(2, 1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fock_exchange_purity(2, 0.5), 0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(fock_exchange_purity(0, 0.3), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex64::new(1.0, -2.0)), "1-2i");
        assert_eq!(format_complex(Complex64::new(2.0, 0.0)), "2+0i");
    }
}
