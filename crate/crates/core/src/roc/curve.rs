use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// A monotone ROC curve on a fixed grid of false-positive rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    auc: f64,
}

impl RocCurve {
    /// Builds a curve with a known AUC. Values must be nondecreasing within
    /// floating tolerance and lie in `[0, 1]`.
    pub fn new(grid: Vec<f64>, values: Vec<f64>, auc: f64) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::input("a ROC curve needs matching grid and values of length >= 2"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("ROC grid must be strictly increasing"));
        }
        if values.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::input("ROC values must lie in [0, 1]"));
        }
        if values.windows(2).any(|w| w[1] < w[0] - 1e-12) {
            return Err(Error::input("ROC values must be nondecreasing"));
        }
        if !(0.0..=1.0).contains(&auc) {
            return Err(Error::input(format!("AUC {auc} outside [0, 1]")));
        }
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(Self { grid, values, auc })
    }

    /// Builds a curve whose AUC is the trapezoidal area under `values`.
    pub fn from_values(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let auc = super::trapezoid(&grid, &values).clamp(0.0, 1.0);
        Self::new(grid, values, auc)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn auc(&self) -> f64 {
        self.auc
    }

    /// Trapezoidal area under the stored values.
    pub fn trapezoid_auc(&self) -> f64 {
        super::trapezoid(&self.grid, &self.values)
    }

    pub fn concavity_violations(&self) -> usize {
        super::concavity_violations(&self.grid, &self.values, super::CONCAVITY_TOL)
    }

    /// True when some part of the curve lies below the chance line.
    pub fn crosses_chance_line(&self, tol: f64) -> bool {
        self.grid.iter().zip(&self.values).any(|(t, v)| *v < t - tol)
    }
}

/// Writes `t,roc` rows with six decimals.
pub fn write_curve_csv<W: Write>(curve: &RocCurve, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["t", "roc"])?;
    for (t, v) in curve.grid.iter().zip(&curve.values) {
        w.write_record([format!("{t:.6}"), format!("{v:.6}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `t,roc` file. The AUC is recomputed by the trapezoid rule.
pub fn read_curve_csv<R: Read>(input: R) -> Result<RocCurve> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "roc" {
        return Err(Error::input("ROC CSV header must be `t,roc`"));
    }
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::input(format!("bad number `{s}`: {e}")));
        grid.push(parse(&rec[0])?);
        values.push(parse(&rec[1])?);
    }
    RocCurve::from_values(grid, values)
}
