//! Point-particle reference trajectories.

use super::scenario::ScatteringScenario;

/// Positions `(x_A, x_B)` of two classical particles under the scenario's
/// interaction, integrated with RK4 at the scenario step and sampled at `times`.
pub fn classical_trajectory(scenario: &ScatteringScenario, times: &[f64]) -> Vec<(f64, f64)> {
    let (ma, mb) = (scenario.mass_a, scenario.mass_b);
    let pot = scenario.potential;
    // y = (x_a, x_b, v_a, v_b)
    let deriv = |y: [f64; 4]| -> [f64; 4] {
        let f = -pot.derivative(y[0] - y[1]);
        [y[2], y[3], f / ma, -f / mb]
    };
    let mut y = [
        scenario.packet_a.center,
        scenario.packet_b.center,
        scenario.packet_a.momentum / ma,
        scenario.packet_b.momentum / mb,
    ];
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target - 1e-12 {
            let h = scenario.dt.min(target - t);
            let k1 = deriv(y);
            let k2 = deriv(add(y, k1, 0.5 * h));
            let k3 = deriv(add(y, k2, 0.5 * h));
            let k4 = deriv(add(y, k3, h));
            for i in 0..4 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += h;
        }
        out.push((y[0], y[1]));
    }
    out
}

/// Straight-line motion without interaction.
pub fn free_trajectory(scenario: &ScatteringScenario, times: &[f64]) -> Vec<(f64, f64)> {
    times
        .iter()
        .map(|t| {
            (
                scenario.packet_a.center + scenario.packet_a.momentum / scenario.mass_a * t,
                scenario.packet_b.center + scenario.packet_b.momentum / scenario.mass_b * t,
            )
        })
        .collect()
}

fn add(y: [f64; 4], k: [f64; 4], h: f64) -> [f64; 4] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobody::scenario::{GridSpec, Packet, Potential};

    #[test]
    fn momentum_and_energy_conserved() {
        let s = ScatteringScenario {
            mass_a: 2.0,
            mass_b: 3.0,
            grid_a: GridSpec { n: 8, length: 1.0, center: 0.0 },
            grid_b: GridSpec { n: 8, length: 1.0, center: 0.0 },
            packet_a: Packet { center: -3.0, width: 0.1, momentum: 4.0 },
            packet_b: Packet { center: 3.0, width: 0.1, momentum: -1.0 },
            potential: Potential::Gaussian { v0: 2.0, width: 1.0 },
            dt: 0.001,
            t_max: 4.0,
            sample_stride: 1,
        };
        let times: Vec<f64> = (0..=40).map(|i| 0.1 * i as f64).collect();
        let traj = classical_trajectory(&s, &times);
        // centre of mass moves uniformly
        for (t, (a, b)) in times.iter().zip(&traj) {
            let com = (2.0 * a + 3.0 * b) / 5.0;
            assert!((com - (0.6 + 0.6 * t)).abs() < 1e-10, "t={t}");
        }
        let free = free_trajectory(&s, &times);
        assert_eq!(free[0], traj[0]);
        assert!((free[40].0 - traj[40].0).abs() > 1e-3);
    }
}
