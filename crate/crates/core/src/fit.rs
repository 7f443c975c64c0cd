//! Ordinary least squares on (log2 scale, log2 value) pairs.
//!
//! Every scaling exponent in the crate is realized as such a slope; the
//! liminf definitions become OLS fits over a caller-selected level range.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One usable point of a log-log regression.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitPoint {
    pub level: u32,
    pub log2_scale: f64,
    pub log2_value: f64,
}

/// Slope/intercept fit with OLS standard error of the slope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r2: f64,
    /// Level interval requested, [j1, j2].
    pub j1: u32,
    pub j2: u32,
    pub points: Vec<FitPoint>,
    /// Levels inside [j1, j2] dropped because the value was zero,
    /// non-finite or invalid (clipped windows, empty levels).
    pub n_excluded: usize,
}

/// Minimum number of usable points for a fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Fit log2_value against log2_scale.
///
/// `points` are the usable pairs; `n_excluded` records how many candidate
/// levels were dropped before the call.
pub fn fit_log2(points: Vec<FitPoint>, j1: u32, j2: u32, n_excluded: usize) -> Result<RegressionFit> {
    if j1 >= j2 {
        return Err(Error::InvalidParameter(format!(
            "fit range [{j1}, {j2}] must satisfy j1 < j2"
        )));
    }
    let n = points.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            what: format!("regression points in [{j1}, {j2}]"),
            needed: MIN_FIT_POINTS,
            got: n,
        });
    }
    if points
        .iter()
        .any(|p| !p.log2_scale.is_finite() || !p.log2_value.is_finite())
    {
        return Err(Error::InvalidInput(
            "non-finite regression point".to_string(),
        ));
    }

    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.log2_scale).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.log2_value).sum::<f64>() / nf;
    let sxx: f64 = points
        .iter()
        .map(|p| (p.log2_scale - mean_x).powi(2))
        .sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.log2_scale - mean_x) * (p.log2_value - mean_y))
        .sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidInput(
            "degenerate abscissa in regression".to_string(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let r = p.log2_value - (slope * p.log2_scale + intercept);
            r * r
        })
        .sum();
    let ss_tot: f64 = points
        .iter()
        .map(|p| (p.log2_value - mean_y).powi(2))
        .sum();
    let stderr = (ss_res / (nf - 2.0) / sxx).sqrt();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };

    Ok(RegressionFit {
        slope,
        intercept,
        stderr,
        r2,
        j1,
        j2,
        points,
        n_excluded,
    })
}
