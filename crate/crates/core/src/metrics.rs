//! Success rate under a tolerance band and per-metric MSE.
//!
//! An invalid generation fails at every tolerance and contributes squared
//! error 1 to both the voltage-ratio and the efficiency MSE. Sums use a fixed
//! pairwise reduction, so results are reproducible bit for bit.

use std::io::{BufRead, Write};
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::circuit::Spec;

/// Slack absorbing representation error at the closed band edge.
const BAND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Invalid,
    Measured { voltage_ratio: f64, efficiency: f64 },
}

impl Outcome {
    pub fn measured(voltage_ratio: f64, efficiency: f64) -> Result<Self, MetricsError> {
        if !voltage_ratio.is_finite() || !efficiency.is_finite() {
            return Err(MetricsError::NonFinite);
        }
        Ok(Outcome::Measured {
            voltage_ratio,
            efficiency,
        })
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Outcome::Invalid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRecord {
    pub target: Spec,
    pub outcome: Outcome,
}

impl EvalRecord {
    pub fn new(target: Spec, outcome: Outcome) -> Self {
        Self { target, outcome }
    }

    fn within(&self, t: f64) -> bool {
        match self.outcome {
            Outcome::Invalid => false,
            Outcome::Measured {
                voltage_ratio,
                efficiency,
            } => {
                (voltage_ratio - self.target.voltage_ratio()).abs() <= t + BAND_SLACK
                    && (efficiency - self.target.efficiency()).abs() <= t + BAND_SLACK
            }
        }
    }

    fn squared_errors(&self) -> (f64, f64) {
        match self.outcome {
            Outcome::Invalid => (1.0, 1.0),
            Outcome::Measured {
                voltage_ratio,
                efficiency,
            } => {
                let dv = voltage_ratio - self.target.voltage_ratio();
                let de = efficiency - self.target.efficiency();
                (dv * dv, de * de)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let outcome = match self.outcome {
            Outcome::Invalid => json!("invalid"),
            Outcome::Measured {
                voltage_ratio,
                efficiency,
            } => json!({"ratio": voltage_ratio, "eff": efficiency}),
        };
        json!({
            "target": {"ratio": self.target.voltage_ratio(), "eff": self.target.efficiency()},
            "outcome": outcome,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, String> {
        let pair = |v: &Value, what: &str| -> Result<(f64, f64), String> {
            let get = |k: &str| {
                v.get(k)
                    .and_then(Value::as_f64)
                    .ok_or_else(|| format!("{what}.{k} must be a number"))
            };
            Ok((get("ratio")?, get("eff")?))
        };
        let target = value.get("target").ok_or("missing `target`")?;
        let (r, e) = pair(target, "target")?;
        let target = Spec::new(r, e).map_err(|e| e.to_string())?;
        let outcome = match value.get("outcome").ok_or("missing `outcome`")? {
            Value::String(s) if s == "invalid" => Outcome::Invalid,
            v @ Value::Object(_) => {
                let (r, e) = pair(v, "outcome")?;
                Outcome::measured(r, e).map_err(|e| e.to_string())?
            }
            _ => return Err("outcome must be \"invalid\" or {\"ratio\", \"eff\"}".into()),
        };
        Ok(Self { target, outcome })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("no records")]
    Empty,
    #[error("tolerance {0} must be positive")]
    NonPositiveTolerance(f64),
    #[error("measured values must be finite")]
    NonFinite,
    #[error("invalid tolerance sweep: {0}")]
    Sweep(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

/// Tolerances, strictly increasing within `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceSweep {
    tolerances: Vec<f64>,
}

impl ToleranceSweep {
    pub fn new(tolerances: Vec<f64>) -> Result<Self, MetricsError> {
        if tolerances.is_empty() {
            return Err(MetricsError::Sweep("empty".into()));
        }
        if let Some(&t) = tolerances.iter().find(|&&t| !(t > 0.0 && t <= 1.0)) {
            return Err(MetricsError::Sweep(format!("{t} outside (0, 1]")));
        }
        if tolerances.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MetricsError::Sweep("not strictly increasing".into()));
        }
        Ok(Self { tolerances })
    }

    pub fn tolerances(&self) -> &[f64] {
        &self.tolerances
    }
}

impl Default for ToleranceSweep {
    /// 0.01, 0.02, ..., 0.10.
    fn default() -> Self {
        "0.01:0.1:0.01".parse().expect("default sweep")
    }
}

impl FromStr for ToleranceSweep {
    type Err = MetricsError;

    /// `start:stop:step`, both ends inclusive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| MetricsError::Sweep(format!("`{s}` is not start:stop:step")))?;
        let [start, stop, step] = parts[..] else {
            return Err(MetricsError::Sweep(format!("`{s}` is not start:stop:step")));
        };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(MetricsError::Sweep(format!("`{s}` describes no tolerances")));
        }
        let steps = ((stop - start) / step + 1e-9).floor() as usize;
        let round = |x: f64| (x * 1e12).round() / 1e12;
        ToleranceSweep::new((0..=steps).map(|i| round(start + i as f64 * step)).collect())
    }
}

/// Deterministic pairwise sum.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().fold(0.0, |acc, x| acc + x)
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

pub fn success_rate(records: &[EvalRecord], t: f64) -> Result<f64, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Empty);
    }
    if t.is_nan() || t <= 0.0 {
        return Err(MetricsError::NonPositiveTolerance(t));
    }
    let hits = records.iter().filter(|r| r.within(t)).count();
    Ok(hits as f64 / records.len() as f64)
}

/// `(voltage_mse, efficiency_mse)`.
pub fn mse(records: &[EvalRecord]) -> Result<(f64, f64), MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Empty);
    }
    let (v, e): (Vec<f64>, Vec<f64>) = records.iter().map(EvalRecord::squared_errors).unzip();
    let n = records.len() as f64;
    Ok((pairwise_sum(&v) / n, pairwise_sum(&e) / n))
}

pub fn sweep(records: &[EvalRecord], tolerances: &ToleranceSweep) -> Result<Vec<(f64, f64)>, MetricsError> {
    tolerances
        .tolerances()
        .iter()
        .map(|&t| success_rate(records, t).map(|r| (t, r)))
        .collect()
}

/// Reads a results file, one JSON object per non-blank line.
pub fn read_results(reader: impl BufRead) -> Result<Vec<EvalRecord>, MetricsError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| MetricsError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let at = |message: String| MetricsError::Line { line: i + 1, message };
        let value: Value = serde_json::from_str(&line).map_err(|e| at(e.to_string()))?;
        records.push(EvalRecord::from_json(&value).map_err(at)?);
    }
    Ok(records)
}

pub fn write_results(mut writer: impl Write, records: &[EvalRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(writer, "{}", r.to_json())?;
    }
    Ok(())
}
