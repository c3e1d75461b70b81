//! Run configuration: schema, parsing (JSON or TOML by extension), semantic
//! checks with field paths, and conversion into core types.

use std::f64::consts::PI;
use std::path::Path;

use ndde_core::divisors::Frequency;
use ndde_core::{
    Complex, FourierSeries, History, Interval, LinearCoefficients, MonotoneSpline, NddeProblem, Neutral,
    Nonlinearity, SourceSpec,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ToolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate,
    Spectrum,
    Diagram,
    Divisors,
    Periodic,
    Validate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<FrequencyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicConfig>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub c: i64,
    pub f: NonlinearityConfig,
    pub g: NonlinearityConfig,
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub history: HistoryConfig,
    /// Interval on which hypotheses are certified.
    #[serde(default = "default_validity")]
    pub validity: [f64; 2],
}

fn default_validity() -> [f64; 2] {
    [-10.0, 10.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearityConfig {
    Linear { slope: f64 },
    LinearPlusCubic { slope: f64, cubic: f64 },
    ScaledTanh { amplitude: f64, rate: f64 },
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k: u32,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    #[default]
    Zero,
    Constant { value: f64 },
    /// `amplitude * cos(omega t + phase)`.
    Monochromatic {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Nonnegative modes of `Σ s_k exp(i k omega t)`; the rest follow by
    /// conjugation.
    Fourier { omega: f64, modes: Vec<Mode> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub k: u32,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HistoryConfig {
    Constant { value: f64 },
    /// `Σ cos·cos(kπt) + sin·sin(kπt)` on `[-1, 0]`.
    Trigonometric { terms: Vec<TrigTerm> },
    /// `base + amplitude · sin³(πt)`, which joins a constant state without
    /// derivative jumps.
    FlatBump { base: f64, amplitude: f64 },
    /// Samples on a uniform grid of `[-1, 0]`; derivatives by differences
    /// when omitted.
    Samples {
        values: Vec<f64>,
        #[serde(default)]
        derivs: Option<Vec<f64>>,
    },
}

impl Default for HistoryConfig {
    fn default() -> Self {
        HistoryConfig::Constant { value: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearConfig {
    pub a: f64,
    pub b: f64,
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramConfig {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub step: f64,
    #[serde(default = "both_signs")]
    pub c: Vec<i64>,
}

fn both_signs() -> Vec<i64> {
    vec![1, -1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum FrequencyConfig {
    Rational { p: u64, q: u64 },
    Angular { omega: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicMethod {
    /// Per-mode division by the linear multiplier.
    Multiplier,
    /// Collocation of the reduced ODE for periods `1/n`.
    Reduced,
    /// Damped fixed-point iteration for small sources.
    Picard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicConfig {
    pub method: PeriodicMethod,
    /// For `reduced`: the source period is `1/n`.
    #[serde(default = "one")]
    pub n: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// Grid points per unit delay.
    pub n: i64,
    pub t_end: f64,
    pub n_max: i64,
    /// Fourier truncation order.
    pub k: i64,
    pub k_max: i64,
    pub tol: f64,
    pub max_iter: i64,
    /// Validation samples.
    pub samples: i64,
    /// Evaluation points per period.
    pub points: i64,
    pub classify_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            n: 64,
            t_end: 100.0,
            n_max: 20,
            k: 64,
            k_max: 200,
            tol: 1e-10,
            max_iter: 200,
            samples: 1000,
            points: 256,
            classify_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Used when `--out` is not given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: None,
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

fn bad(path: &str, msg: impl Into<String>) -> ToolError {
    ToolError::Config {
        path: path.to_string(),
        message: msg.into(),
    }
}

/// Parses `text` as TOML or JSON.
pub fn parse_config(text: &str, toml: bool) -> Result<RunConfig, ToolError> {
    let cfg: RunConfig = if toml {
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|e| bad(&e.path().to_string(), e.inner().message()))?
    } else {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg = serde_path_to_error::deserialize(&mut de).map_err(|e| bad(&e.path().to_string(), e.inner().to_string()))?;
        de.end().map_err(|e| bad(".", e.to_string()))?;
        cfg
    };
    cfg.check()?;
    Ok(cfg)
}

/// Reads a config file; the format follows the extension (`.toml` or `.json`).
pub fn load_config(path: &Path) -> Result<RunConfig, ToolError> {
    let toml = match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => true,
        Some("json") => false,
        _ => return Err(bad(".", format!("{}: extension must be .toml or .json", path.display()))),
    };
    let text = std::fs::read_to_string(path).map_err(|e| ToolError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text, toml)
}

fn positive(path: &str, v: f64) -> Result<(), ToolError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be positive and finite, got {v}")))
    }
}

fn at_least(path: &str, v: i64, min: i64) -> Result<(), ToolError> {
    if v >= min {
        Ok(())
    } else {
        Err(bad(path, format!("must be at least {min}, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<(), ToolError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be finite, got {v}")))
    }
}

fn sign(path: &str, c: i64) -> Result<Neutral, ToolError> {
    Neutral::from_int(c).map_err(|_| bad(path, format!("must be 1 or -1, got {c}")))
}

impl RunConfig {
    /// Semantic checks beyond the schema: ranges, and the blocks each
    /// command needs.
    pub fn check(&self) -> Result<(), ToolError> {
        let n = &self.numerics;
        at_least("numerics.n", n.n, 8)?;
        positive("numerics.t_end", n.t_end)?;
        at_least("numerics.n_max", n.n_max, 1)?;
        at_least("numerics.k", n.k, 1)?;
        at_least("numerics.k_max", n.k_max, 1)?;
        positive("numerics.tol", n.tol)?;
        at_least("numerics.max_iter", n.max_iter, 1)?;
        at_least("numerics.samples", n.samples, 100)?;
        at_least("numerics.points", n.points, 8)?;
        positive("numerics.classify_tol", n.classify_tol)?;
        if self.output.formats.is_empty() {
            return Err(bad("output.formats", "must name at least one format"));
        }
        if let Some(p) = &self.problem {
            p.check()?;
        }
        if let Some(l) = &self.linear {
            finite("linear.a", l.a)?;
            finite("linear.b", l.b)?;
            sign("linear.c", l.c)?;
        }
        if let Some(d) = &self.diagram {
            d.check()?;
        }
        if let Some(f) = &self.frequency {
            match *f {
                FrequencyConfig::Rational { p, q } => {
                    if p == 0 || q == 0 {
                        return Err(bad("frequency", "p and q must be positive"));
                    }
                    if num_integer::gcd(p, q) != 1 {
                        return Err(bad("frequency", format!("p = {p} and q = {q} must be coprime")));
                    }
                }
                FrequencyConfig::Angular { omega } => positive("frequency.omega", omega)?,
            }
        }
        if let Some(p) = &self.periodic {
            if p.n == 0 {
                return Err(bad("periodic.n", "must be at least 1"));
            }
        }
        let need = |present: bool, block: &str| {
            if present {
                Ok(())
            } else {
                Err(bad(block, format!("required by command {:?}", self.command)))
            }
        };
        match self.command {
            Command::Simulate | Command::Validate => need(self.problem.is_some(), "problem"),
            Command::Spectrum => need(self.linear.is_some(), "linear"),
            Command::Diagram => need(self.diagram.is_some(), "diagram"),
            Command::Divisors => {
                need(self.linear.is_some(), "linear")?;
                need(self.frequency.is_some(), "frequency")
            }
            Command::Periodic => {
                need(self.problem.is_some(), "problem")?;
                need(self.periodic.is_some(), "periodic")
            }
        }
    }

    /// SHA-256 of the canonical JSON form of the configuration.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }
}

impl ProblemConfig {
    fn check(&self) -> Result<(), ToolError> {
        sign("problem.c", self.c)?;
        self.f.check("problem.f")?;
        self.g.check("problem.g")?;
        let [lo, hi] = self.validity;
        finite("problem.validity", lo)?;
        finite("problem.validity", hi)?;
        if lo >= hi {
            return Err(bad("problem.validity", format!("[{lo}, {hi}] has no interior")));
        }
        match &self.source {
            SourceConfig::Zero => {}
            SourceConfig::Constant { value } => finite("problem.source.value", *value)?,
            SourceConfig::Monochromatic { amplitude, omega, phase } => {
                finite("problem.source.amplitude", *amplitude)?;
                positive("problem.source.omega", *omega)?;
                finite("problem.source.phase", *phase)?;
            }
            SourceConfig::Fourier { omega, modes } => {
                positive("problem.source.omega", *omega)?;
                for (i, m) in modes.iter().enumerate() {
                    finite(&format!("problem.source.modes[{i}].re"), m.re)?;
                    finite(&format!("problem.source.modes[{i}].im"), m.im)?;
                    if m.k == 0 && m.im != 0.0 {
                        return Err(bad(&format!("problem.source.modes[{i}].im"), "mean mode must be real"));
                    }
                }
            }
        }
        match &self.history {
            HistoryConfig::Constant { value } => finite("problem.history.value", *value)?,
            HistoryConfig::Trigonometric { terms } => {
                for (i, t) in terms.iter().enumerate() {
                    finite(&format!("problem.history.terms[{i}].cos"), t.cos)?;
                    finite(&format!("problem.history.terms[{i}].sin"), t.sin)?;
                }
            }
            HistoryConfig::FlatBump { base, amplitude } => {
                finite("problem.history.base", *base)?;
                finite("problem.history.amplitude", *amplitude)?;
            }
            HistoryConfig::Samples { values, derivs } => {
                if values.len() < 3 {
                    return Err(bad("problem.history.values", "needs at least 3 samples"));
                }
                if let Some(d) = derivs {
                    if d.len() != values.len() {
                        return Err(bad("problem.history.derivs", "length must match values"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn neutral(&self) -> Neutral {
        Neutral::from_int(self.c).expect("checked")
    }

    pub fn validity(&self) -> Interval {
        Interval::new(self.validity[0], self.validity[1]).expect("checked")
    }

    pub fn source(&self) -> Result<SourceSpec, ToolError> {
        let s = match &self.source {
            SourceConfig::Zero => SourceSpec::Zero,
            SourceConfig::Constant { value } => SourceSpec::Constant(*value),
            SourceConfig::Monochromatic { amplitude, omega, phase } => {
                SourceSpec::monochromatic(*amplitude, *omega, *phase).map_err(|e| bad("problem.source", e.to_string()))?
            }
            SourceConfig::Fourier { omega, modes } => {
                let modes: Vec<(u32, Complex)> = modes.iter().map(|m| (m.k, Complex::new(m.re, m.im))).collect();
                SourceSpec::FourierSeries(
                    FourierSeries::from_nonnegative(*omega, &modes).map_err(|e| bad("problem.source", e.to_string()))?,
                )
            }
        };
        Ok(s)
    }

    pub fn build(&self) -> Result<NddeProblem, ToolError> {
        let f = self.f.build("problem.f")?;
        let g = self.g.build("problem.g")?;
        NddeProblem::new(self.neutral(), f, g, self.source()?, self.validity())
            .map_err(|e| bad("problem.validity", e.to_string()))
    }

    /// The history sampled with `n` intervals on `[-1, 0]` (sampled
    /// histories keep their own grid; the stepper resamples them).
    pub fn history(&self, n: usize) -> Result<History, ToolError> {
        let h = match &self.history {
            HistoryConfig::Constant { value } => History::constant(n, *value),
            HistoryConfig::Trigonometric { terms } => History::from_fn(
                n,
                |t| {
                    terms
                        .iter()
                        .map(|w| {
                            let x = w.k as f64 * PI * t;
                            w.cos * x.cos() + w.sin * x.sin()
                        })
                        .sum()
                },
                |t| {
                    terms
                        .iter()
                        .map(|w| {
                            let k = w.k as f64 * PI;
                            k * (w.sin * (k * t).cos() - w.cos * (k * t).sin())
                        })
                        .sum()
                },
            ),
            HistoryConfig::FlatBump { base, amplitude } => History::from_fn(
                n,
                |t| base + amplitude * (PI * t).sin().powi(3),
                |t| 3.0 * amplitude * PI * (PI * t).sin().powi(2) * (PI * t).cos(),
            ),
            HistoryConfig::Samples { values, derivs: None } => History::from_values(values.clone()),
            HistoryConfig::Samples {
                values,
                derivs: Some(d),
            } => History::from_samples(values.clone(), d.clone()),
        };
        h.map_err(|e| bad("problem.history", e.to_string()))
    }
}

impl NonlinearityConfig {
    fn check(&self, path: &str) -> Result<(), ToolError> {
        let params: Vec<(&str, f64)> = match self {
            NonlinearityConfig::Linear { slope } => vec![("slope", *slope)],
            NonlinearityConfig::LinearPlusCubic { slope, cubic } => vec![("slope", *slope), ("cubic", *cubic)],
            NonlinearityConfig::ScaledTanh { amplitude, rate } => vec![("amplitude", *amplitude), ("rate", *rate)],
            NonlinearityConfig::Tabulated { .. } => vec![],
        };
        for (name, v) in params {
            finite(&format!("{path}.{name}"), v)?;
        }
        self.build(path).map(|_| ())
    }

    pub fn build(&self, path: &str) -> Result<Nonlinearity, ToolError> {
        Ok(match self {
            NonlinearityConfig::Linear { slope } => Nonlinearity::linear(*slope),
            NonlinearityConfig::LinearPlusCubic { slope, cubic } => Nonlinearity::linear_plus_cubic(*slope, *cubic),
            NonlinearityConfig::ScaledTanh { amplitude, rate } => Nonlinearity::scaled_tanh(*amplitude, *rate),
            NonlinearityConfig::Tabulated { knots, values } => Nonlinearity::Tabulated(
                MonotoneSpline::new(knots.clone(), values.clone()).map_err(|e| bad(path, e.to_string()))?,
            ),
        })
    }
}

impl LinearConfig {
    pub fn coefficients(&self) -> LinearCoefficients {
        LinearCoefficients::new(self.a, self.b, Neutral::from_int(self.c).expect("checked"))
    }
}

impl DiagramConfig {
    fn check(&self) -> Result<(), ToolError> {
        for (name, v) in [
            ("a_min", self.a_min),
            ("a_max", self.a_max),
            ("b_min", self.b_min),
            ("b_max", self.b_max),
        ] {
            finite(&format!("diagram.{name}"), v)?;
        }
        positive("diagram.step", self.step)?;
        if self.a_min > self.a_max {
            return Err(bad("diagram.a_max", "must not be below a_min"));
        }
        if self.b_min > self.b_max {
            return Err(bad("diagram.b_max", "must not be below b_min"));
        }
        if self.c.is_empty() {
            return Err(bad("diagram.c", "must list at least one sign"));
        }
        for (i, &c) in self.c.iter().enumerate() {
            sign(&format!("diagram.c[{i}]"), c)?;
        }
        if self.axis(self.a_min, self.a_max).len() * self.axis(self.b_min, self.b_max).len() > 1_000_000 {
            return Err(bad("diagram.step", "grid exceeds one million points"));
        }
        Ok(())
    }

    /// Grid values `min + i·step`, snapped to the step so that `0` and the
    /// endpoints are hit exactly when they lie on the lattice.
    pub fn axis(&self, lo: f64, hi: f64) -> Vec<f64> {
        let count = ((hi - lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| lo + i as f64 * self.step).collect()
    }

    /// Points in row order: `c` as listed, then `a`, then `b`.
    pub fn points(&self) -> Vec<LinearCoefficients> {
        let (aa, bb) = (self.axis(self.a_min, self.a_max), self.axis(self.b_min, self.b_max));
        let mut out = Vec::with_capacity(self.c.len() * aa.len() * bb.len());
        for &c in &self.c {
            let c = Neutral::from_int(c).expect("checked");
            for &a in &aa {
                for &b in &bb {
                    out.push(LinearCoefficients::new(a, b, c));
                }
            }
        }
        out
    }
}

impl FrequencyConfig {
    pub fn frequency(&self) -> Frequency {
        match *self {
            FrequencyConfig::Rational { p, q } => Frequency::RationalPeriod { p, q },
            FrequencyConfig::Angular { omega } => Frequency::Angular(omega),
        }
    }
}
