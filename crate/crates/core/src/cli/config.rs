use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self { key: key.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Deuteron,
    Diffraction,
    Spectral,
    KernelsCheck,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Deuteron => "deuteron",
            Mode::Diffraction => "diffraction",
            Mode::Spectral => "spectral",
            Mode::KernelsCheck => "kernels-check",
        }
    }

    /// Keys accepted in the config file for this mode.
    fn allowed_keys(&self) -> &'static [&'static str] {
        const TIME: [&str; 4] = ["times", "t_start", "t_end", "t_steps"];
        match self {
            Mode::Deuteron => &["omega", "field", "k_com", "propagation", "slice_points", "slice_half_width", TIME[0], TIME[1], TIME[2], TIME[3]],
            Mode::Diffraction => &["k", "t", "x_min", "x_max", "x_points", "cornu_u_min", "cornu_u_max", "cornu_points"],
            Mode::Spectral => &[
                "basis", "omega", "box_length", "n_basis", "nu", "perturbation", "slope", "field",
                "step_height", "step_position", "grid_min", "grid_max", "grid_points", "convergence_sizes", TIME[0], TIME[1], TIME[2], TIME[3],
            ],
            Mode::KernelsCheck => &[],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "deuteron" => Ok(Mode::Deuteron),
            "diffraction" => Ok(Mode::Diffraction),
            "spectral" => Ok(Mode::Spectral),
            "kernels-check" => Ok(Mode::KernelsCheck),
            other => Err(ConfigError::new(
                "mode",
                format!("unknown mode `{other}` (expected deuteron, diffraction, spectral or kernels-check)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(ConfigError::new("format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

/// Parsed scenario: the mode, its raw `key = value` parameters and where the
/// output goes (`None` means stdout).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub params: BTreeMap<String, String>,
    pub format: OutputFormat,
    pub out: Option<String>,
}

impl ScenarioConfig {
    /// Parses `key = value` lines; `#` starts a comment. The optional keys
    /// `mode`, `format` and `out` are lifted out of the parameter map; any
    /// other key must belong to the mode.
    pub fn parse(mode: Mode, text: &str) -> Result<Self, ConfigError> {
        let mut params = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::new(format!("line {}", lineno + 1), format!("expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(ConfigError::new(format!("line {}", lineno + 1), "empty key"));
            }
            if params.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(ConfigError::new(key, "given more than once"));
            }
        }
        if let Some(m) = params.remove("mode") {
            if m.parse::<Mode>()? != mode {
                return Err(ConfigError::new("mode", format!("config says `{m}` but `{mode}` was requested")));
            }
        }
        let format = match params.remove("format") {
            Some(f) => f.parse()?,
            None => OutputFormat::default(),
        };
        let out = params.remove("out");
        let allowed = mode.allowed_keys();
        if let Some(key) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(ConfigError::new(key.clone(), format!("not a parameter of mode {mode}")));
        }
        Ok(Self { mode, params, format, out })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.params.contains_key(key)
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::new(key, "required but missing"))
    }

    pub fn scalar(&self, key: &str) -> Result<f64, ConfigError> {
        parse_scalar(self.require(key)?).map_err(|m| ConfigError::new(key, m))
    }

    pub fn scalar_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        if self.has(key) {
            self.scalar(key)
        } else {
            Ok(default)
        }
    }

    pub fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.scalar(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(ConfigError::new(key, format!("must be positive, got {v}")))
        }
    }

    pub fn count(&self, key: &str) -> Result<usize, ConfigError> {
        let raw = self.require(key)?;
        raw.parse().map_err(|_| ConfigError::new(key, format!("expected a non-negative integer, got `{raw}`")))
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        if self.has(key) {
            self.count(key)
        } else {
            Ok(default)
        }
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.require(key)?
            .split(',')
            .map(|item| parse_scalar(item).map_err(|m| ConfigError::new(key, m)))
            .collect()
    }

    /// Either `times = t0, t1, …` or the inclusive range `t_start`, `t_end`
    /// with `t_steps` intervals. Times must be non-negative.
    pub fn times(&self) -> Result<Vec<f64>, ConfigError> {
        let times = if self.has("times") {
            if ["t_start", "t_end", "t_steps"].iter().any(|k| self.has(k)) {
                return Err(ConfigError::new("times", "give either `times` or a t_start/t_end/t_steps range, not both"));
            }
            self.list("times")?
        } else {
            let start = self.scalar_or("t_start", 0.0)?;
            let end = self.scalar("t_end")?;
            let steps = self.count("t_steps")?;
            if steps == 0 {
                return Err(ConfigError::new("t_steps", "must be at least 1"));
            }
            if !(end > start) {
                return Err(ConfigError::new("t_end", format!("must exceed t_start = {start}")));
            }
            (0..=steps).map(|j| start + (end - start) * j as f64 / steps as f64).collect()
        };
        if let Some(bad) = times.iter().find(|t| !(**t >= 0.0)) {
            return Err(ConfigError::new("times", format!("times must be non-negative, got {bad}")));
        }
        Ok(times)
    }
}

/// A number, optionally written with `pi` factors: `0.5`, `pi`, `2pi`,
/// `2*pi`, `pi/50`, `-3*pi/4`.
pub fn parse_scalar(text: &str) -> Result<f64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s),
    };
    let (numerator, denominator) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut value = sign * product(numerator)?;
    if let Some(d) = denominator {
        let d = product(d)?;
        if d == 0.0 {
            return Err(format!("division by zero in `{s}`"));
        }
        value /= d;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

fn product(text: &str) -> Result<f64, String> {
    text.split('*').map(factor).product()
}

fn factor(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Some(coeff) = t.strip_suffix("pi") {
        let coeff = coeff.trim();
        return if coeff.is_empty() { Ok(PI) } else { factor(coeff).map(|c| c * PI) };
    }
    t.parse::<f64>().map_err(|_| format!("cannot parse `{t}` as a number"))
}
