//! Scenario description and its flat `key = value` file format.
//!
//! ```text
//! # comment
//! mass_a = 20
//! mass_b = 20
//! grid_a = 320 8 0          # points, box length, box centre
//! grid_b = 320 8 0
//! packet_a = -2 0.1 80      # centre, width (position std), mean momentum
//! packet_b = 2 0.1 -80
//! potential = gaussian 6.4 1    # or: soft_coulomb V0 s, or: none
//! dt = 0.002
//! t_max = 1
//! sample_stride = 25
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Uniform periodic grid of `n` points on `[center - length/2, center + length/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub length: f64,
    pub center: f64,
}

impl GridSpec {
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.center - 0.5 * self.length + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let dk = 2.0 * std::f64::consts::PI / self.length;
        (0..self.n)
            .map(|i| {
                let j = if i < self.n.div_ceil(2) { i as f64 } else { i as f64 - self.n as f64 };
                j * dk
            })
            .collect()
    }
}

/// Gaussian packet `exp(-(x-c)^2 / (4 w^2) + i p x)`; `width` is the position spread.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Packet {
    pub center: f64,
    pub width: f64,
    pub momentum: f64,
}

/// Interaction as a function of `r = x_A - x_B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Potential {
    None,
    /// `v0 exp(-r^2 / (2 width^2))`
    Gaussian { v0: f64, width: f64 },
    /// `v0 / sqrt(r^2 + softening^2)`
    SoftCoulomb { v0: f64, softening: f64 },
}

impl Potential {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Potential::None => 0.0,
            Potential::Gaussian { v0, width } => v0 * (-0.5 * r * r / (width * width)).exp(),
            Potential::SoftCoulomb { v0, softening } => v0 / (r * r + softening * softening).sqrt(),
        }
    }

    /// `dV/dr`.
    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            Potential::None => 0.0,
            Potential::Gaussian { width, .. } => -r / (width * width) * self.eval(r),
            Potential::SoftCoulomb { v0, softening } => -v0 * r / (r * r + softening * softening).powf(1.5),
        }
    }

    fn describe(&self) -> String {
        match *self {
            Potential::None => "none".into(),
            Potential::Gaussian { v0, width } => format!("gaussian {v0} {width}"),
            Potential::SoftCoulomb { v0, softening } => format!("soft_coulomb {v0} {softening}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringScenario {
    pub mass_a: f64,
    pub mass_b: f64,
    pub grid_a: GridSpec,
    pub grid_b: GridSpec,
    pub packet_a: Packet,
    pub packet_b: Packet,
    pub potential: Potential,
    pub dt: f64,
    pub t_max: f64,
    pub sample_stride: usize,
}

impl ScatteringScenario {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut mass_a = None;
        let mut mass_b = None;
        let mut grid_a = None;
        let mut grid_b = None;
        let mut packet_a = None;
        let mut packet_b = None;
        let mut potential = None;
        let mut dt = None;
        let mut t_max = None;
        let mut sample_stride = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Scenario { line: line_no, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let nums = || -> Result<Vec<f64>> {
                value
                    .split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| err(format!("`{t}` is not a number"))))
                    .collect()
            };
            let exactly = |n: usize| -> Result<Vec<f64>> {
                let v = nums()?;
                if v.len() != n {
                    return Err(err(format!("`{key}` takes {n} numbers, got {}", v.len())));
                }
                Ok(v)
            };
            let slot_err = || err(format!("duplicate key `{key}`"));
            macro_rules! set {
                ($slot:ident, $val:expr) => {{
                    if $slot.is_some() {
                        return Err(slot_err());
                    }
                    $slot = Some($val);
                }};
            }
            match key {
                "mass_a" => set!(mass_a, exactly(1)?[0]),
                "mass_b" => set!(mass_b, exactly(1)?[0]),
                "grid_a" | "grid_b" => {
                    let v = exactly(3)?;
                    if v[0] < 2.0 || v[0].fract() != 0.0 {
                        return Err(err(format!("grid size must be an integer >= 2, got {}", v[0])));
                    }
                    let g = GridSpec { n: v[0] as usize, length: v[1], center: v[2] };
                    if key == "grid_a" {
                        set!(grid_a, g)
                    } else {
                        set!(grid_b, g)
                    }
                }
                "packet_a" | "packet_b" => {
                    let v = exactly(3)?;
                    let p = Packet { center: v[0], width: v[1], momentum: v[2] };
                    if key == "packet_a" {
                        set!(packet_a, p)
                    } else {
                        set!(packet_b, p)
                    }
                }
                "potential" => {
                    let mut parts = value.split_whitespace();
                    let name = parts.next().unwrap_or("");
                    let params: Vec<f64> = parts
                        .map(|t| t.parse::<f64>().map_err(|_| err(format!("`{t}` is not a number"))))
                        .collect::<Result<_>>()?;
                    let pot = match (name, params.as_slice()) {
                        ("none", []) => Potential::None,
                        ("gaussian", &[v0, width]) => Potential::Gaussian { v0, width },
                        ("soft_coulomb", &[v0, softening]) => Potential::SoftCoulomb { v0, softening },
                        _ => {
                            return Err(err(format!(
                                "unknown potential `{value}` (expected `none`, `gaussian V0 w` or `soft_coulomb V0 s`)"
                            )))
                        }
                    };
                    set!(potential, pot)
                }
                "dt" => set!(dt, exactly(1)?[0]),
                "t_max" => set!(t_max, exactly(1)?[0]),
                "sample_stride" => {
                    let v = exactly(1)?[0];
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(err(format!("sample_stride must be a positive integer, got {v}")));
                    }
                    set!(sample_stride, v as usize)
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }

        let missing = |k: &str| Error::Scenario { line: 0, message: format!("missing key `{k}`") };
        let scenario = Self {
            mass_a: mass_a.ok_or_else(|| missing("mass_a"))?,
            mass_b: mass_b.ok_or_else(|| missing("mass_b"))?,
            grid_a: grid_a.ok_or_else(|| missing("grid_a"))?,
            grid_b: grid_b.ok_or_else(|| missing("grid_b"))?,
            packet_a: packet_a.ok_or_else(|| missing("packet_a"))?,
            packet_b: packet_b.ok_or_else(|| missing("packet_b"))?,
            potential: potential.unwrap_or(Potential::None),
            dt: dt.ok_or_else(|| missing("dt"))?,
            t_max: t_max.ok_or_else(|| missing("t_max"))?,
            sample_stride: sample_stride.unwrap_or(1),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        for (label, m) in [("mass_a", self.mass_a), ("mass_b", self.mass_b)] {
            if !(m > 0.0) || !m.is_finite() {
                return bad(format!("{label} must be positive, got {m}"));
            }
        }
        for (label, g) in [("grid_a", &self.grid_a), ("grid_b", &self.grid_b)] {
            if g.n < 2 || !(g.length > 0.0) || !g.center.is_finite() {
                return bad(format!("{label} needs n >= 2 and a positive length"));
            }
        }
        for (label, p) in [("packet_a", &self.packet_a), ("packet_b", &self.packet_b)] {
            if !(p.width > 0.0) || !p.center.is_finite() || !p.momentum.is_finite() {
                return bad(format!("{label} needs a positive width"));
            }
        }
        if !(self.dt > 0.0) || !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return bad(format!("need dt > 0 and t_max >= 0 (dt={}, t_max={})", self.dt, self.t_max));
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be positive".into());
        }
        match self.potential {
            Potential::Gaussian { width, .. } if !(width > 0.0) => bad("gaussian width must be positive".into()),
            Potential::SoftCoulomb { softening, .. } if !(softening > 0.0) => {
                bad("soft_coulomb softening must be positive".into())
            }
            _ => Ok(()),
        }
    }

    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    /// Same physics with the particle labels exchanged. The potential is
    /// mirrored, which leaves both shipped forms unchanged.
    pub fn swapped(&self) -> Self {
        Self {
            mass_a: self.mass_b,
            mass_b: self.mass_a,
            grid_a: self.grid_b,
            grid_b: self.grid_a,
            packet_a: self.packet_b,
            packet_b: self.packet_a,
            ..self.clone()
        }
    }

    /// Halves `dx` on both axes and halves `dt`, sampling at the same times.
    pub fn refined(&self) -> Self {
        let twice = |g: GridSpec| GridSpec { n: 2 * g.n, ..g };
        Self {
            grid_a: twice(self.grid_a),
            grid_b: twice(self.grid_b),
            dt: 0.5 * self.dt,
            sample_stride: 2 * self.sample_stride,
            ..self.clone()
        }
    }

    /// Canonical text form; parses back to an equal scenario.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let g = |g: &GridSpec| format!("{} {} {}", g.n, g.length, g.center);
        let p = |p: &Packet| format!("{} {} {}", p.center, p.width, p.momentum);
        writeln!(s, "mass_a = {}", self.mass_a).unwrap();
        writeln!(s, "mass_b = {}", self.mass_b).unwrap();
        writeln!(s, "grid_a = {}", g(&self.grid_a)).unwrap();
        writeln!(s, "grid_b = {}", g(&self.grid_b)).unwrap();
        writeln!(s, "packet_a = {}", p(&self.packet_a)).unwrap();
        writeln!(s, "packet_b = {}", p(&self.packet_b)).unwrap();
        writeln!(s, "potential = {}", self.potential.describe()).unwrap();
        writeln!(s, "dt = {}", self.dt).unwrap();
        writeln!(s, "t_max = {}", self.t_max).unwrap();
        writeln!(s, "sample_stride = {}", self.sample_stride).unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
# two heavy packets
mass_a = 20
mass_b = 20
grid_a = 64 8 0
grid_b = 64 8 0   # same box
packet_a = -2 0.1 80
packet_b = 2 0.1 -80
potential = gaussian 6.4 1
dt = 0.002
t_max = 1
sample_stride = 25
";

    #[test]
    fn parses_and_round_trips() {
        let s = ScatteringScenario::parse(TEXT).unwrap();
        assert_eq!(s.grid_a.n, 64);
        assert_eq!(s.packet_b.momentum, -80.0);
        assert_eq!(s.potential, Potential::Gaussian { v0: 6.4, width: 1.0 });
        assert_eq!(s.n_steps(), 500);
        let again = ScatteringScenario::parse(&s.to_config_string()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn reports_offending_line() {
        let text = TEXT.replace("dt = 0.002", "dt = fast");
        match ScatteringScenario::parse(&text) {
            Err(Error::Scenario { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
        let text = TEXT.replace("potential = gaussian 6.4 1", "potential = yukawa 1 2");
        assert!(ScatteringScenario::parse(&text).is_err());
        let text = format!("{TEXT}colour = blue\n");
        assert!(ScatteringScenario::parse(&text).is_err());
        let text = TEXT.replace("mass_a = 20\n", "");
        assert!(ScatteringScenario::parse(&text).is_err());
        let text = format!("{TEXT}dt = 0.1\n");
        assert!(ScatteringScenario::parse(&text).is_err());
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec { n: 8, length: 4.0, center: 1.0 };
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.x(0), -1.0);
        assert_eq!(g.x(7), 2.5);
        let k = g.wavenumbers();
        let dk = std::f64::consts::PI / 2.0;
        assert_eq!(k[1], dk);
        assert_eq!(k[4], -4.0 * dk);
        assert_eq!(k[7], -dk);
    }

    #[test]
    fn potential_derivatives() {
        for pot in [
            Potential::Gaussian { v0: 2.0, width: 0.7 },
            Potential::SoftCoulomb { v0: 1.5, softening: 0.3 },
        ] {
            for r in [-1.3, -0.2, 0.0, 0.4, 2.0] {
                let h = 1e-6;
                let fd = (pot.eval(r + h) - pot.eval(r - h)) / (2.0 * h);
                assert!((fd - pot.derivative(r)).abs() < 1e-6);
                assert_eq!(pot.eval(r), pot.eval(-r));
            }
        }
    }

    #[test]
    fn swap_and_refine() {
        let s = ScatteringScenario::parse(TEXT).unwrap();
        let w = s.swapped();
        assert_eq!(w.packet_a, s.packet_b);
        assert_eq!(w.swapped(), s);
        let r = s.refined();
        assert_eq!(r.grid_a.n, 128);
        assert_eq!(r.n_steps(), 1000);
        assert_eq!(r.sample_stride, 50);
    }
}
