//! Hurst exponent from the log-log structure function.
//!
//! `M₂(Δ) = mean_i (X_{i+Δ} - X_i)²` over overlapping increments; for a
//! self-similar Gaussian log-price `M₂(Δ) ∝ Δ^{2H}`, so half the least-squares
//! slope of `log M₂` against `log Δ` estimates `H`.

use std::io::Write;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::stats::ols;

pub const DEFAULT_MAX_SCALE: usize = 20;
pub const DEFAULT_FIT_RANGE: RangeInclusive<usize> = 1..=5;

/// Largest change in local log-log slope still read as a straight line.
pub const LINEARITY_TOLERANCE: f64 = 0.5;

/// `1..=20`.
pub fn default_scales() -> Vec<usize> {
    (1..=DEFAULT_MAX_SCALE).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureFunction {
    pub scales: Vec<usize>,
    pub moments: Vec<f64>,
    /// Requested scales dropped for being at least the series length.
    pub excluded: Vec<usize>,
}

/// Second moments of overlapping increments at each usable scale.
///
/// Scales must be strictly increasing and positive. Scales `>= len` are
/// dropped with a warning; if none remain the error lists the usable range.
pub fn structure_function(values: &[f64], scales: &[usize]) -> Result<StructureFunction> {
    if let Some(w) = scales.windows(2).find(|w| w[1] <= w[0]) {
        return Err(domain("scales", w[1] as f64, "strictly increasing"));
    }
    if scales.first() == Some(&0) {
        return Err(domain("scale", 0.0, "scale >= 1"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(domain("value", *v, "finite"));
    }
    let (usable, excluded): (Vec<usize>, Vec<usize>) =
        scales.iter().partition(|&&d| d < values.len());
    if !excluded.is_empty() {
        log::warn!(
            "scales {:?} exceed the series length {} and are excluded",
            excluded,
            values.len()
        );
    }
    if usable.is_empty() {
        return Err(Error::InsufficientRange(if values.len() < 2 {
            format!("series of length {} has no usable scale", values.len())
        } else {
            format!(
                "no requested scale fits a series of length {}; usable scales are 1..={}",
                values.len(),
                values.len() - 1
            )
        }));
    }
    let moments = usable
        .iter()
        .map(|&d| {
            let n = values.len() - d;
            values
                .iter()
                .zip(&values[d..])
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                / n as f64
        })
        .collect();
    Ok(StructureFunction {
        scales: usable,
        moments,
        excluded,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogCurve {
    pub scales: Vec<usize>,
    pub moments: Vec<f64>,
    pub fit_range: RangeInclusive<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub hurst_estimate: f64,
}

impl LogLogCurve {
    pub fn in_fit_range(&self, scale: usize) -> bool {
        self.fit_range.contains(&scale)
    }

    /// `(log2 Δ, log2 M₂)` for each scale with a positive moment.
    pub fn log2_points(&self) -> Vec<(usize, f64, f64)> {
        self.scales
            .iter()
            .zip(&self.moments)
            .filter(|(_, m)| **m > 0.0)
            .map(|(d, m)| (*d, (*d as f64).log2(), m.log2()))
            .collect()
    }

    /// Changes in local slope between consecutive pairs of log-log points.
    ///
    /// Entry `k` is `s_{k+1} - s_k`, with `s_k` the slope of the chord from
    /// point `k` to `k + 1`; all vanish on an exact power law.
    pub fn second_differences(&self) -> Vec<f64> {
        let pts = self.log2_points();
        let slopes: Vec<f64> = pts
            .windows(2)
            .map(|w| (w[1].2 - w[0].2) / (w[1].1 - w[0].1))
            .collect();
        slopes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_abs_second_difference(&self) -> f64 {
        self.second_differences()
            .iter()
            .fold(0.0, |acc, d| acc.max(d.abs()))
    }

    pub fn is_linear(&self) -> bool {
        self.max_abs_second_difference() <= LINEARITY_TOLERANCE
    }

    /// Header `log2_scale,log2_moment,in_fit_range`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["log2_scale", "log2_moment", "in_fit_range"])?;
        for (d, x, y) in self.log2_points() {
            w.write_record([
                format!("{x:?}"),
                format!("{y:?}"),
                self.in_fit_range(d).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        #[derive(Serialize)]
        struct Report<'a> {
            scales: &'a [usize],
            moments: &'a [f64],
            fit_range: [usize; 2],
            slope: f64,
            intercept: f64,
            hurst: f64,
            second_differences: Vec<f64>,
            max_abs_second_difference: f64,
            linear: bool,
        }
        let report = Report {
            scales: &self.scales,
            moments: &self.moments,
            fit_range: [*self.fit_range.start(), *self.fit_range.end()],
            slope: self.slope,
            intercept: self.intercept,
            hurst: self.hurst_estimate,
            second_differences: self.second_differences(),
            max_abs_second_difference: self.max_abs_second_difference(),
            linear: self.is_linear(),
        };
        serde_json::to_writer_pretty(writer, &report)?;
        Ok(())
    }
}

/// OLS of `log M₂` on `log Δ` over the scales inside `fit_range`.
pub fn estimate_hurst(
    sf: &StructureFunction,
    fit_range: RangeInclusive<usize>,
) -> Result<LogLogCurve> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (&d, &m) in sf.scales.iter().zip(&sf.moments) {
        if !fit_range.contains(&d) {
            continue;
        }
        if !(m > 0.0) {
            return Err(Error::DegenerateMoment(d));
        }
        x.push((d as f64).ln());
        y.push(m.ln());
    }
    if x.len() < 2 {
        return Err(Error::InsufficientRange(format!(
            "{} scale(s) of {:?} in the fit range {}..={}, need 2",
            x.len(),
            sf.scales,
            fit_range.start(),
            fit_range.end()
        )));
    }
    let (slope, intercept) = ols(&x, &y);
    Ok(LogLogCurve {
        scales: sf.scales.clone(),
        moments: sf.moments.clone(),
        fit_range,
        slope,
        intercept,
        hurst_estimate: slope / 2.0,
    })
}

/// Structure function and fit in one step.
pub fn hurst_from_log_prices(
    values: &[f64],
    scales: &[usize],
    fit_range: RangeInclusive<usize>,
) -> Result<LogLogCurve> {
    estimate_hurst(&structure_function(values, scales)?, fit_range)
}
