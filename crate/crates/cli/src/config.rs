//! Flat `key = value` run configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use spinengine::figures;
use spinengine::sweep;
use spinengine::CycleSpec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    pub fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cycle,
    Fig2,
    Fig3,
    Fig4,
    Validate,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Cycle => "cycle",
            Mode::Fig2 => "fig2",
            Mode::Fig3 => "fig3",
            Mode::Fig4 => "fig4",
            Mode::Validate => "validate",
        }
    }
}

/// Every setting a run can take; `None`/empty means "use the mode default".
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub gap_a: Option<f64>,
    pub gap_b: Option<f64>,
    pub beta_h: Option<f64>,
    pub beta_c: Option<f64>,
    pub n: Option<usize>,
    pub eta_c: Vec<f64>,
    pub r_list: Vec<f64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_steps: Option<usize>,
    pub pole_eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub corrupt_cold_sign: bool,
}

impl Settings {
    /// Fields set in `other` win.
    pub fn overlay(mut self, other: Settings) -> Settings {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(gap_a, gap_b, beta_h, beta_c, n, r_min, r_max, r_steps, pole_eps, out);
        if !other.eta_c.is_empty() {
            self.eta_c = other.eta_c;
        }
        if !other.r_list.is_empty() {
            self.r_list = other.r_list;
        }
        self.corrupt_cold_sign |= other.corrupt_cold_sign;
        self
    }
}

fn parse_f64(field: &str, raw: &str) -> Result<f64, ConfigError> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| ConfigError::invalid(field, format!("not a number: {raw:?}")))
}

fn parse_list(field: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_f64(field, s))
        .collect()
}

/// Parses a config file body. `mode`, when present, must equal `expected`.
pub fn parse_config(text: &str, expected: Mode) -> Result<Settings, ConfigError> {
    let mut s = Settings::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::invalid(&format!("line {}", lineno + 1), "expected key = value"))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "mode" => {
                if value != expected.as_str() {
                    return Err(ConfigError::invalid(
                        "mode",
                        format!("config is for {value:?}, running {:?}", expected.as_str()),
                    ));
                }
            }
            "gap_a" => s.gap_a = Some(parse_f64("gap_a", value)?),
            "gap_b" => s.gap_b = Some(parse_f64("gap_b", value)?),
            "beta_h" => s.beta_h = Some(parse_f64("beta_h", value)?),
            "beta_c" => s.beta_c = Some(parse_f64("beta_c", value)?),
            "n" => {
                s.n = Some(
                    value
                        .parse()
                        .map_err(|_| ConfigError::invalid("n", format!("not a positive integer: {value:?}")))?,
                )
            }
            "eta_c" => s.eta_c = parse_list("eta_c", value)?,
            "r_list" => s.r_list = parse_list("r_list", value)?,
            "r_min" => s.r_min = Some(parse_f64("r_min", value)?),
            "r_max" => s.r_max = Some(parse_f64("r_max", value)?),
            "r_steps" => {
                s.r_steps = Some(
                    value
                        .parse()
                        .map_err(|_| ConfigError::invalid("r_steps", format!("not a positive integer: {value:?}")))?,
                )
            }
            "pole_eps" => s.pole_eps = Some(parse_f64("pole_eps", value)?),
            "out" => s.out = Some(PathBuf::from(value)),
            "corrupt_cold_sign" => s.corrupt_cold_sign = value == "true",
            other => return Err(ConfigError::invalid(other, "unknown configuration key")),
        }
    }
    Ok(s)
}

pub fn load_config(path: &Path, expected: Mode) -> Result<Settings, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, expected)
}

pub const DEFAULT_GAP_A: f64 = 4.0;
pub const DEFAULT_GAP_B: f64 = 2.0;
pub const DEFAULT_BETA_H: f64 = 0.5;
pub const DEFAULT_BETA_C: f64 = 1.0;
pub const DEFAULT_N: usize = 3;

/// Settings with every mode default filled in and checked.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub spec: CycleSpec,
    pub eta_c: Vec<f64>,
    pub ratios: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub pole_eps: f64,
    pub out: Option<PathBuf>,
    pub corrupt_cold_sign: bool,
}

fn resolve_spec(s: &Settings) -> Result<CycleSpec, ConfigError> {
    let gap_a = s.gap_a.unwrap_or(DEFAULT_GAP_A);
    let gap_b = s.gap_b.unwrap_or(DEFAULT_GAP_B);
    let beta_h = s.beta_h.unwrap_or(DEFAULT_BETA_H);
    let beta_c = s.beta_c.unwrap_or(DEFAULT_BETA_C);
    let n = s.n.unwrap_or(DEFAULT_N);
    CycleSpec::new(gap_a, gap_b, beta_h, beta_c, n).map_err(|e| {
        let field = match e {
            spinengine::Error::Domain { name, .. } => match name {
                "inverse temperature" => {
                    if !(beta_h > 0.0 && beta_h.is_finite()) {
                        "beta_h"
                    } else {
                        "beta_c"
                    }
                }
                other => other,
            },
            _ => "cycle",
        };
        ConfigError::invalid(field, e.to_string())
    })
}

fn check_eta(list: &[f64]) -> Result<(), ConfigError> {
    if list.is_empty() {
        return Err(ConfigError::invalid("eta_c", "list is empty"));
    }
    match list.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        Some(bad) => Err(ConfigError::invalid("eta_c", format!("{bad} is outside (0, 1)"))),
        None => Ok(()),
    }
}

fn check_steps(steps: usize) -> Result<(), ConfigError> {
    if steps == 0 {
        return Err(ConfigError::invalid("r_steps", "must be at least 1"));
    }
    Ok(())
}

pub fn resolve(mode: Mode, s: Settings) -> Result<RunConfig, ConfigError> {
    let spec = resolve_spec(&s)?;
    let pole_eps = s.pole_eps.unwrap_or(figures::DEFAULT_POLE_EPS);
    if !(pole_eps >= 0.0) {
        return Err(ConfigError::invalid("pole_eps", "must be non-negative"));
    }
    let (eta_c, ratios, r_min, r_max, r_steps) = match mode {
        Mode::Cycle | Mode::Validate => (Vec::new(), Vec::new(), 0.0, 0.0, 0),
        Mode::Fig2 => {
            let eta = if s.eta_c.is_empty() {
                figures::default_fig2_eta_grid()
            } else {
                s.eta_c.clone()
            };
            check_eta(&eta)?;
            let ratios = if !s.r_list.is_empty() {
                s.r_list.clone()
            } else if s.r_min.is_some() || s.r_max.is_some() || s.r_steps.is_some() {
                let (lo, hi) = (s.r_min.unwrap_or(0.0), s.r_max.unwrap_or(10.0));
                let steps = s.r_steps.unwrap_or(4);
                check_steps(steps)?;
                sweep::linspace(lo, hi, steps)
            } else {
                figures::default_fig2_ratios()
            };
            if let Some(bad) = ratios.iter().find(|&&r| !(r >= 0.0)) {
                return Err(ConfigError::invalid("r", format!("{bad} is negative")));
            }
            let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let count = ratios.len();
            (eta, ratios, lo, hi, count)
        }
        Mode::Fig3 => {
            let eta = if s.eta_c.is_empty() {
                figures::default_eta_pair()
            } else {
                s.eta_c.clone()
            };
            check_eta(&eta)?;
            let lo = s.r_min.unwrap_or(1e-3);
            let hi = s.r_max.unwrap_or(1e3);
            let steps = s.r_steps.unwrap_or(60);
            check_steps(steps)?;
            if !(lo > 0.0) {
                return Err(ConfigError::invalid(
                    "r_min",
                    "must be positive for the positive branch",
                ));
            }
            if !(hi >= lo) {
                return Err(ConfigError::invalid("r_max", "must not be below r_min"));
            }
            (eta, sweep::logspace(lo, hi, steps), lo, hi, steps)
        }
        Mode::Fig4 => {
            let eta = if s.eta_c.is_empty() {
                figures::default_eta_pair()
            } else {
                s.eta_c.clone()
            };
            check_eta(&eta)?;
            let (dlo, dhi) = figures::default_fig4_range(&eta);
            let lo = s.r_min.unwrap_or(dlo);
            let hi = s.r_max.unwrap_or(dhi);
            let steps = s.r_steps.unwrap_or(figures::DEFAULT_FIG4_STEPS);
            check_steps(steps)?;
            if !(hi < 0.0) {
                return Err(ConfigError::invalid(
                    "r_max",
                    "must be negative for the negative branch",
                ));
            }
            if !(lo <= hi) {
                return Err(ConfigError::invalid("r_min", "must not exceed r_max"));
            }
            (
                eta.clone(),
                figures::fig4_ratio_grid(&eta, lo, hi, steps),
                lo,
                hi,
                steps,
            )
        }
    };
    Ok(RunConfig {
        mode,
        spec,
        eta_c,
        ratios,
        r_min,
        r_max,
        r_steps,
        pole_eps,
        out: s.out,
        corrupt_cold_sign: s.corrupt_cold_sign,
    })
}

impl RunConfig {
    /// Config-file text that reproduces this run.
    pub fn to_config_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut m: BTreeMap<&str, String> = BTreeMap::new();
        m.insert("mode", self.mode.as_str().to_string());
        match self.mode {
            Mode::Cycle | Mode::Validate => {
                m.insert("gap_a", self.spec.gap_a().to_string());
                m.insert("gap_b", self.spec.gap_b().to_string());
                m.insert("beta_h", self.spec.hot().inv_temp().to_string());
                m.insert("beta_c", self.spec.cold().inv_temp().to_string());
                m.insert("n", self.spec.n().to_string());
                m.insert("corrupt_cold_sign", self.corrupt_cold_sign.to_string());
            }
            Mode::Fig2 => {
                m.insert("eta_c", list(&self.eta_c));
                m.insert("r_list", list(&self.ratios));
            }
            Mode::Fig3 => {
                m.insert("eta_c", list(&self.eta_c));
                m.insert("r_min", self.r_min.to_string());
                m.insert("r_max", self.r_max.to_string());
                m.insert("r_steps", self.r_steps.to_string());
            }
            Mode::Fig4 => {
                m.insert("eta_c", list(&self.eta_c));
                m.insert("r_min", self.r_min.to_string());
                m.insert("r_max", self.r_max.to_string());
                m.insert("r_steps", self.r_steps.to_string());
                m.insert("pole_eps", self.pole_eps.to_string());
            }
        }
        let mut out = String::new();
        for (k, v) in m {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
