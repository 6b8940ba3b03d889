//! Least-squares power-law fits `y = a * x^k` in log-log space.

use serde::Serialize;

use crate::dataset::RankedSeries;
use crate::error::{Error, Result};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    #[serde(rename = "a")]
    pub prefactor: f64,
    #[serde(rename = "k")]
    pub exponent: f64,
    /// Coefficient of determination of the log-log regression.
    #[serde(rename = "r2")]
    pub r_squared: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn eval(&self, x: f64) -> Result<f64> {
        eval_power_law(self, x)
    }
}

/// Fits arbitrary positive `(x, y)` pairs by ordinary least squares on
/// `(ln x, ln y)`.
pub fn fit_points(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            context: "power-law fit".into(),
            needed: 2,
            got: points.len(),
        });
    }
    let mut lx = Vec::with_capacity(points.len());
    let mut ly = Vec::with_capacity(points.len());
    for (i, &(x, y)) in points.iter().enumerate() {
        if !(x > 0.0) {
            return Err(Error::NonPositiveX(x));
        }
        if !(y > 0.0) {
            return Err(Error::NonPositive {
                rank: i + 1,
                label: format!("x={x}"),
                value: y,
            });
        }
        lx.push(x.ln());
        ly.push(y.ln());
    }
    let line = stats::ols(&lx, &ly)?;
    Ok(PowerLawFit {
        prefactor: line.intercept.exp(),
        exponent: line.slope,
        r_squared: line.r_squared,
        n_points: points.len(),
    })
}

fn check_series(series: &RankedSeries) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::InsufficientData {
            context: format!("power-law fit of {}", series.label),
            needed: 2,
            got: series.len(),
        });
    }
    match series.entries.iter().find(|e| !(e.value > 0.0)) {
        Some(e) => Err(Error::NonPositive {
            rank: e.rank,
            label: e.name.clone(),
            value: e.value,
        }),
        None => Ok(()),
    }
}

/// Fits value against rank for every point of the series.
pub fn fit_power_law(series: &RankedSeries) -> Result<PowerLawFit> {
    check_series(series)?;
    let points: Vec<(f64, f64)> = series
        .entries
        .iter()
        .map(|e| (e.rank as f64, e.value))
        .collect();
    fit_points(&points)
}

pub fn eval_power_law(fit: &PowerLawFit, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveX(x));
    }
    Ok(fit.prefactor * x.powf(fit.exponent))
}

/// `ln(value) - ln(a * rank^k)` for every rank of the series.
pub fn residuals_log(series: &RankedSeries, fit: &PowerLawFit) -> Result<Vec<(usize, f64)>> {
    check_series(series)?;
    let ln_a = fit.prefactor.ln();
    Ok(series
        .entries
        .iter()
        .map(|e| {
            let model = ln_a + fit.exponent * (e.rank as f64).ln();
            (e.rank, e.value.ln() - model)
        })
        .collect())
}
