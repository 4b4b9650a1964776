//! Flat `key = value` configuration files.
//!
//! ```text
//! # three-step model
//! d[-1,1] = 1/3
//! d[0,1]  = 1/3
//! d[1,-1] = 1/3
//! t = 157/512
//! ```
//!
//! Weights must be exact rationals. `t` may also be a decimal, converted to
//! the nearest dyadic `p/2^k` with `k` large enough to keep every digit.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use qwalk::kernel::StepWeights;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}, field `{field}`: {msg}")]
    Field { line: usize, field: String, msg: String },
    #[error("missing required field `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "text" => Ok(ReportFormat::Text),
            other => Err(format!("unknown report format `{}` (expected json or text)", other)),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Text => "text",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisConfig {
    /// `((i, j), weight)` as written, before normalization.
    pub weights: Vec<((i32, i32), BigRational)>,
    pub t: BigRational,
    /// The decimal text of `t` when it was not given as a rational.
    pub t_decimal: Option<String>,
    pub precision_bits: u32,
    pub max_bits: u32,
    pub orbit_bound: u64,
    pub series_order: usize,
    pub report_format: ReportFormat,
}

impl AnalysisConfig {
    pub fn new(weights: Vec<((i32, i32), BigRational)>, t: BigRational) -> Self {
        AnalysisConfig {
            weights,
            t,
            t_decimal: None,
            precision_bits: 128,
            max_bits: 4096,
            orbit_bound: 200,
            series_order: 24,
            report_format: ReportFormat::Json,
        }
    }

    pub fn step_weights(&self) -> Result<StepWeights, ConfigError> {
        StepWeights::new(&self.weights).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        text.parse()
    }

    /// Render back to the file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((i, j), w) in &self.weights {
            out.push_str(&format!("d[{},{}] = {}\n", i, j, w));
        }
        match &self.t_decimal {
            Some(d) => out.push_str(&format!("t = {}\n", d)),
            None => out.push_str(&format!("t = {}\n", self.t)),
        }
        out.push_str(&format!("precision_bits = {}\n", self.precision_bits));
        out.push_str(&format!("max_bits = {}\n", self.max_bits));
        out.push_str(&format!("orbit_bound = {}\n", self.orbit_bound));
        out.push_str(&format!("series_order = {}\n", self.series_order));
        out.push_str(&format!("report_format = {}\n", self.report_format));
        out
    }
}

fn parse_weight_key(key: &str) -> Option<(i32, i32)> {
    let inner = key.strip_prefix("d[")?.strip_suffix(']')?;
    let (a, b) = inner.split_once(',')?;
    let i: i32 = a.trim().parse().ok()?;
    let j: i32 = b.trim().parse().ok()?;
    ((-1..=1).contains(&i) && (-1..=1).contains(&j)).then_some((i, j))
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("`{}` is not an exact rational", s))?;
    let d: BigInt = d.parse().map_err(|_| format!("`{}` is not an exact rational", s))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

/// A decimal `a.b` as the nearest `p / 2^k`, `2^k >= 16 * 10^digits`.
pub fn parse_decimal_dyadic(s: &str) -> Result<BigRational, String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').ok_or_else(|| format!("`{}` is not a decimal", s))?;
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("`{}` is not a decimal", s));
    }
    let digits = frac.len() as u32;
    let mant: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac).parse().map_err(|_| s.to_string())?;
    let exact = BigRational::new(mant, BigInt::from(10).pow(digits));
    let mut k = 0u32;
    while BigInt::one() << k < BigInt::from(16) * BigInt::from(10).pow(digits) {
        k += 1;
    }
    let scale = BigInt::one() << k;
    let p = (exact * BigRational::from_integer(scale.clone())).round().to_integer();
    let v = BigRational::new(p, scale);
    Ok(if neg { -v } else { v })
}

impl FromStr for AnalysisConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut weights: Vec<((i32, i32), BigRational)> = Vec::new();
        let mut cfg = AnalysisConfig::new(Vec::new(), BigRational::zero());
        let mut seen: Vec<String> = Vec::new();
        let mut have_t = false;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{}`", content) })?;
            let key: String = key.trim().trim_matches('"').chars().filter(|c| !c.is_whitespace()).collect();
            let value = value.trim().trim_matches('"').trim();
            if seen.contains(&key) {
                return Err(ConfigError::Field { line, field: key, msg: "duplicate entry".into() });
            }
            seen.push(key.clone());
            let field_err = |msg: String| ConfigError::Field { line, field: key.clone(), msg };
            let int = |v: &str| v.parse::<u64>().map_err(|_| format!("`{}` is not a nonnegative integer", v));
            match key.as_str() {
                k if k.starts_with("d[") => {
                    let p = parse_weight_key(k).ok_or_else(|| field_err("expected d[i,j] with i, j in {-1,0,1}".into()))?;
                    if value.contains('.') || value.contains('e') || value.contains('E') {
                        return Err(field_err("decimal weights are not accepted; write an exact rational".into()));
                    }
                    let w = parse_rational(value).map_err(field_err)?;
                    if w.is_negative() {
                        return Err(field_err("weights must be nonnegative".into()));
                    }
                    weights.push((p, w));
                }
                "t" => {
                    cfg.t = if value.contains('.') {
                        cfg.t_decimal = Some(value.to_string());
                        parse_decimal_dyadic(value).map_err(field_err)?
                    } else {
                        parse_rational(value).map_err(field_err)?
                    };
                    if cfg.t <= BigRational::zero() || cfg.t >= BigRational::one() {
                        return Err(field_err("t must lie strictly between 0 and 1".into()));
                    }
                    have_t = true;
                }
                "precision_bits" => cfg.precision_bits = int(value).map_err(field_err)? as u32,
                "max_bits" => cfg.max_bits = int(value).map_err(field_err)? as u32,
                "orbit_bound" => cfg.orbit_bound = int(value).map_err(field_err)?,
                "series_order" => cfg.series_order = int(value).map_err(field_err)? as usize,
                "report_format" => cfg.report_format = value.parse().map_err(field_err)?,
                _ => return Err(field_err("unknown field".into())),
            }
        }
        if !have_t {
            return Err(ConfigError::Missing("t"));
        }
        if weights.iter().all(|(_, w)| w.is_zero()) {
            return Err(ConfigError::Invalid("no positive step weight given".into()));
        }
        if cfg.precision_bits < 16 {
            return Err(ConfigError::Invalid("precision_bits must be at least 16".into()));
        }
        cfg.max_bits = cfg.max_bits.max(cfg.precision_bits);
        cfg.weights = weights;
        Ok(cfg)
    }
}
