//! Two-particle scattering on small grids: symmetries, conservation laws and
//! the entropy cross-check.

use pointerlab::twobody::{
    classical_trajectory, free_gaussian_width, run_scenario, RunOptions, ScatteringScenario,
};

const COLLISION: &str = "
mass_a = 1
mass_b = 1
grid_a = 96 24 0
grid_b = 96 24 0
packet_a = -3 0.6 3
packet_b = 3 0.6 -3
potential = gaussian 6 0.7
dt = 0.001
t_max = 1.2
sample_stride = 100
";

const FREE: &str = "
mass_a = 1
mass_b = 2
grid_a = 128 30 0
grid_b = 128 30 0
packet_a = -2 1 0.5
packet_b = 2 1 -0.5
potential = none
dt = 0.01
t_max = 2
sample_stride = 20
";

fn collision() -> ScatteringScenario {
    ScatteringScenario::parse(COLLISION).unwrap()
}

#[test]
fn swapping_particles_leaves_entropy_unchanged() {
    let s = collision();
    let opts = RunOptions::default();
    let a = run_scenario(&s, opts).unwrap();
    let b = run_scenario(&s.swapped(), opts).unwrap();
    assert_eq!(a.samples.len(), b.samples.len());
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert!((x.entropy_bits - y.entropy_bits).abs() <= 1e-8, "{x:?} vs {y:?}");
    }
}

#[test]
fn collision_conserves_norm_and_energy() {
    let run = run_scenario(&collision(), RunOptions::default()).unwrap();
    assert!(run.max_norm_drift() <= 1e-10, "{}", run.max_norm_drift());
    assert!(run.max_relative_energy_drift() <= 1e-6, "{}", run.max_relative_energy_drift());
    assert!(run.max_entropy() > 0.05, "collision should entangle: {}", run.max_entropy());
}

#[test]
fn svd_entropy_matches_reduced_density_matrix() {
    let opts = RunOptions { cross_check_entropy: true, mean_field: false };
    let run = run_scenario(&collision(), opts).unwrap();
    for s in &run.samples {
        let reduced = s.entropy_reduced.expect("cross-check requested");
        assert!((reduced - s.entropy_bits).abs() <= 1e-6, "{s:?}");
    }
}

#[test]
fn free_packets_stay_unentangled_and_spread_like_gaussians() {
    let s = ScatteringScenario::parse(FREE).unwrap();
    let opts = RunOptions { cross_check_entropy: false, mean_field: true };
    let run = run_scenario(&s, opts).unwrap();
    assert!(run.max_entropy() <= 1e-8);
    assert!(run.min_mean_field_fidelity().unwrap() >= 1.0 - 1e-10);

    let t = s.t_max;
    let (wa, wb) = run.final_state.widths();
    assert!((wa - free_gaussian_width(1.0, s.mass_a, t)).abs() < 1e-6);
    assert!((wb - free_gaussian_width(1.0, s.mass_b, t)).abs() < 1e-6);

    let last = run.samples.last().unwrap();
    let classical = classical_trajectory(&s, &[t])[0];
    assert!((last.x_a_mean - classical.0).abs() < 1e-6);
    assert!((last.x_b_mean - classical.1).abs() < 1e-6);
}

#[test]
fn scenario_text_round_trips() {
    let s = collision();
    let again = ScatteringScenario::parse(&s.to_config_string()).unwrap();
    assert_eq!(s, again);
}

#[test]
fn malformed_scenarios_report_the_line() {
    let broken = COLLISION.replace("dt = 0.001", "dt = fast");
    let err = ScatteringScenario::parse(&broken).unwrap_err().to_string();
    assert!(err.contains("line"), "{err}");
    let dup = format!("{COLLISION}\nmass_a = 2\n");
    assert!(ScatteringScenario::parse(&dup).is_err());
}

#[test]
fn shipped_scenarios_parse_and_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            ScatteringScenario::from_path(&path).unwrap().validate().unwrap();
            count += 1;
        }
    }
    assert_eq!(count, 5);
}
