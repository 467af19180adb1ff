//! Scenario files: a TOML document holding one or more `[[scenario]]` tables.

use hopjc::{Complex, QubitState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Default grid size for a sweep axis when `n_points` is omitted.
pub const DEFAULT_SWEEP_POINTS: usize = 101;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub scenario: Vec<Scenario>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    ConcurrenceSeries,
    ReciprocationForward,
    ReciprocationFull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Alpha,
    DeltaOverG,
    JOverG,
}

impl SweepParameter {
    /// CSV column header for the swept value.
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::DeltaOverG => "Delta_over_g",
            SweepParameter::JOverG => "J_over_g",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedQubits {
    Eg,
    Ge,
    Gg,
    Ee,
    BellPlus,
}

/// Either a named state or four `[re, im]` pairs in the order `ee, eg, ge, gg`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialQubits {
    Named(NamedQubits),
    Amplitudes([[f64; 2]; 4]),
}

impl InitialQubits {
    pub fn to_state(&self) -> QubitState<f64> {
        match self {
            InitialQubits::Named(NamedQubits::Eg) => QubitState::Eg,
            InitialQubits::Named(NamedQubits::Ge) => QubitState::Ge,
            InitialQubits::Named(NamedQubits::Gg) => QubitState::Gg,
            InitialQubits::Named(NamedQubits::Ee) => QubitState::Ee,
            InitialQubits::Named(NamedQubits::BellPlus) => QubitState::BellPlus,
            InitialQubits::Amplitudes(a) => QubitState::Amplitudes(a.map(|[re, im]| Complex::new(re, im))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    #[serde(default = "default_sweep_points")]
    pub n_points: usize,
}

fn default_sweep_points() -> usize {
    DEFAULT_SWEEP_POINTS
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.n_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub initial_qubits: InitialQubits,
    pub alpha: f64,
    pub delta_over_g: f64,
    pub j_over_g: f64,
    pub t_max_over_pi: f64,
    pub n_steps: usize,
    pub protocol: Protocol,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub truncation_override: Option<usize>,
    /// Independent second-pair grid for `reciprocation_full`; without it `t′ = t`.
    #[serde(default)]
    pub t_prime_max_over_pi: Option<f64>,
    #[serde(default)]
    pub n_prime_steps: Option<usize>,
}

/// One point of a sweep: the physical parameters with the axis value applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub alpha: f64,
    pub delta: f64,
    pub j: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(format!("scenario '{}': {msg}", self.name)));
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return fail("name must be non-empty and use only [A-Za-z0-9_-]".into());
        }
        if self.n_steps < 2 {
            return fail(format!("n_steps must be at least 2, got {}", self.n_steps));
        }
        for (key, v) in [
            ("alpha", self.alpha),
            ("delta_over_g", self.delta_over_g),
            ("j_over_g", self.j_over_g),
            ("t_max_over_pi", self.t_max_over_pi),
        ] {
            if !v.is_finite() {
                return fail(format!("{key} must be finite"));
            }
        }
        if self.alpha < 0.0 {
            return fail("alpha must be non-negative".into());
        }
        if self.t_max_over_pi < 0.0 {
            return fail("t_max_over_pi must be non-negative".into());
        }
        if let Some(sweep) = &self.sweep {
            if sweep.n_points < 2 {
                return fail("sweep.n_points must be at least 2".into());
            }
            if !sweep.min.is_finite() || !sweep.max.is_finite() || sweep.max < sweep.min {
                return fail("sweep needs finite min <= max".into());
            }
            if sweep.parameter == SweepParameter::Alpha && sweep.min < 0.0 {
                return fail("an alpha sweep must stay non-negative".into());
            }
            if self.protocol != Protocol::ConcurrenceSeries && sweep.parameter != SweepParameter::Alpha {
                return fail("reciprocation protocols can only sweep alpha".into());
            }
        }
        match (self.t_prime_max_over_pi, self.n_prime_steps) {
            (None, None) => {}
            (Some(tp), Some(n)) => {
                if self.protocol != Protocol::ReciprocationFull {
                    return fail("a second-pair time grid only applies to reciprocation_full".into());
                }
                if !tp.is_finite() || tp < 0.0 || n < 2 {
                    return fail("t_prime_max_over_pi must be finite and non-negative, n_prime_steps >= 2".into());
                }
            }
            _ => return fail("t_prime_max_over_pi and n_prime_steps go together".into()),
        }
        if self.protocol != Protocol::ConcurrenceSeries
            && self.initial_qubits != InitialQubits::Named(NamedQubits::BellPlus)
        {
            return fail("reciprocation protocols start from initial_qubits = \"bell_plus\"".into());
        }
        if let InitialQubits::Amplitudes(a) = &self.initial_qubits {
            let norm: f64 = a.iter().map(|[re, im]| re * re + im * im).sum();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
                return fail(format!("initial amplitudes must be normalized, squared norm is {norm}"));
            }
        }
        Ok(())
    }

    /// Sweep points in order; a single point when there is no sweep.
    pub fn points(&self) -> Vec<Point> {
        let base = Point {
            alpha: self.alpha,
            delta: self.delta_over_g,
            j: self.j_over_g,
        };
        match &self.sweep {
            None => vec![base],
            Some(s) => s
                .values()
                .into_iter()
                .map(|v| match s.parameter {
                    SweepParameter::Alpha => Point { alpha: v, ..base },
                    SweepParameter::DeltaOverG => Point { delta: v, ..base },
                    SweepParameter::JOverG => Point { j: v, ..base },
                })
                .collect(),
        }
    }

    /// `gt/π` values of the first-pair grid.
    pub fn times_over_pi(&self) -> Vec<f64> {
        linspace(0.0, self.t_max_over_pi, self.n_steps)
    }

    pub fn prime_times_over_pi(&self) -> Option<Vec<f64>> {
        Some(linspace(0.0, self.t_prime_max_over_pi?, self.n_prime_steps?))
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive, with exact endpoints.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 })
        .collect()
}

pub fn parse(text: &str) -> Result<Vec<Scenario>, CliError> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if file.scenario.is_empty() {
        return Err(CliError::Config("no [[scenario]] entries".into()));
    }
    for s in &file.scenario {
        s.validate()?;
    }
    let mut names: Vec<&str> = file.scenario.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Config(format!("duplicate scenario name '{}'", w[0])));
    }
    Ok(file.scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [[scenario]]
        name = "demo"
        initial_qubits = "bell_plus"
        alpha = 1.0
        delta_over_g = 0.0
        j_over_g = 10.0
        t_max_over_pi = 2.0
        n_steps = 5
        protocol = "concurrence_series"
    "#;

    #[test]
    fn parses_minimal_scenario() {
        let s = &parse(MINIMAL).unwrap()[0];
        assert_eq!(s.initial_qubits, InitialQubits::Named(NamedQubits::BellPlus));
        assert_eq!(s.times_over_pi(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(s.points().len(), 1);
    }

    #[test]
    fn parses_explicit_amplitudes_and_default_sweep_size() {
        let text = MINIMAL.replace(
            "initial_qubits = \"bell_plus\"",
            "initial_qubits = [[0.0, 0.0], [0.6, 0.0], [0.0, 0.8], [0.0, 0.0]]\nsweep = { parameter = \"j_over_g\", min = 0.0, max = 10.0 }",
        );
        let s = &parse(&text).unwrap()[0];
        assert!(matches!(s.initial_qubits, InitialQubits::Amplitudes(_)));
        assert_eq!(s.points().len(), DEFAULT_SWEEP_POINTS);
        assert_eq!(s.points()[100].j, 10.0);
    }

    #[test]
    fn rejects_bad_scenarios() {
        assert!(parse("").is_err());
        assert!(parse(&MINIMAL.replace("n_steps = 5", "n_steps = 1")).is_err());
        assert!(parse(&MINIMAL.replace("bell_plus", "werner")).is_err());
        assert!(parse(&MINIMAL.replace("alpha = 1.0", "alpha = -1.0")).is_err());
        let recip_j_sweep = MINIMAL.replace("concurrence_series", "reciprocation_forward")
            + "sweep = { parameter = \"j_over_g\", min = 0.0, max = 1.0 }\n";
        assert!(parse(&recip_j_sweep).is_err());
        assert!(parse(&format!("{MINIMAL}\n{MINIMAL}")).is_err());
    }
}
