//! Builds a scenario in code, writes it in the text format read by
//! `pointerlab twobody`, and reads it back.
//!
//!     cargo run --example scenario_file

use pointerlab::twobody::{GridSpec, Packet, Potential, ScatteringScenario};

fn main() -> pointerlab::Result<()> {
    let grid = GridSpec { n: 128, length: 20.0, center: 0.0 };
    let scenario = ScatteringScenario {
        mass_a: 1.0,
        mass_b: 1.0,
        grid_a: grid,
        grid_b: grid,
        packet_a: Packet { center: -3.0, width: 0.6, momentum: 3.0 },
        packet_b: Packet { center: 3.0, width: 0.6, momentum: -3.0 },
        potential: Potential::SoftCoulomb { v0: 2.0, softening: 0.5 },
        dt: 0.002,
        t_max: 1.0,
        sample_stride: 50,
    };
    scenario.validate()?;
    let text = scenario.to_config_string();
    print!("{text}");
    let path = std::env::temp_dir().join("pointerlab_example.cfg");
    std::fs::write(&path, &text)?;
    assert_eq!(ScatteringScenario::from_path(&path)?, scenario);
    println!("# round trip through {} ok", path.display());
    Ok(())
}
