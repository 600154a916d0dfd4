//! Command-line vocabulary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "pointerlab", version, about = "Coherent pointer states, kitten decoherence and damped-mode cross-checks")]
pub struct Cli {
    /// Run the built-in oracle checks and exit (status 4 on failure).
    #[arg(long)]
    pub selftest: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kitten decoherence time series under Rabi or Markov exchange.
    Kitten(KittenArgs),
    /// Purity sweep of coherent, Fock and kitten inputs over lambda and |beta|^2.
    Pointer(PointerArgs),
    /// Damped mode: analytic vs master equation vs quantum trajectories.
    Lindblad(LindbladArgs),
    /// Run a two-particle scenario file.
    Twobody(TwobodyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// CSV output path; a `<out>.manifest.json` is written next to it.
    /// Without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also emit the rows as JSON (`<out>.json`, or stdout instead of CSV).
    #[arg(long)]
    pub json: bool,

    /// Master seed for stochastic parts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Rabi,
    Markov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Auto,
    Fixed(usize),
}

#[derive(Args, Debug, Clone)]
pub struct KittenArgs {
    /// Kitten amplitude, e.g. `2`, `1+2i`, `-0.5i`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Complex64,
    #[arg(long, value_enum, default_value_t = ModelKind::Markov)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 5.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Fock truncation: `auto` or a maximum occupation.
    #[arg(long, value_parser = parse_truncation, default_value = "auto")]
    pub trunc: Truncation,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Coherent,
    Fock,
    Kitten,
}

#[derive(Args, Debug, Clone)]
pub struct PointerArgs {
    /// Input family.
    #[arg(long, value_enum, default_value_t = InputKind::Coherent)]
    pub input: InputKind,
    /// Amplitudes to sweep (repeatable); defaults to 1, 2, 3, 2i, 1+2i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Vec<Complex64>,
    /// Occupation of the Fock input.
    #[arg(long, default_value_t = 1)]
    pub fock_n: usize,
    /// Number of intervals on the |beta|^2 grid over [0, 1].
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, value_parser = parse_truncation, default_value = "auto")]
    pub trunc: Truncation,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    Coherent,
    Fock,
}

#[derive(Args, Debug, Clone)]
pub struct LindbladArgs {
    #[arg(long, value_enum, default_value_t = InitialKind::Coherent)]
    pub initial: InitialKind,
    #[arg(long, value_parser = parse_complex, default_value = "2", allow_hyphen_values = true)]
    pub lambda: Complex64,
    #[arg(long, default_value_t = 1)]
    pub fock_n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 3.0)]
    pub tmax: f64,
    /// Trajectory time step.
    #[arg(long, default_value_t = 0.001)]
    pub dt: f64,
    /// Spacing of the output rows; a multiple of `--dt`.
    #[arg(long, default_value_t = 0.1)]
    pub sample_dt: f64,
    #[arg(long, default_value_t = 10_000)]
    pub ntraj: usize,
    #[arg(long, value_parser = parse_truncation, default_value = "auto")]
    pub trunc: Truncation,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct TwobodyArgs {
    /// Scenario file (`key = value` lines).
    pub scenario: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `re`, `imi`, `re+imi` or `re-imi` (`i` alone means one).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{s}` is not a complex number of the form re+imi");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return match t.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn parse_truncation(s: &str) -> Result<Truncation, String> {
    if s == "auto" {
        return Ok(Truncation::Auto);
    }
    s.parse::<usize>()
        .map(Truncation::Fixed)
        .map_err(|_| format!("`{s}` is neither `auto` nor a non-negative integer"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("-1.5-0.5i").unwrap(), c(-1.5, -0.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3+i").unwrap(), c(3.0, 1.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        for bad in ["", "x", "1+2j", "1++2i", "nan"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn truncation_forms() {
        assert_eq!(parse_truncation("auto").unwrap(), Truncation::Auto);
        assert_eq!(parse_truncation("40").unwrap(), Truncation::Fixed(40));
        assert!(parse_truncation("-1").is_err());
    }
}
