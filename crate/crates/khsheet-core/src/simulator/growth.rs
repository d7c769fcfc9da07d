use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::evolve::Trajectory;
use crate::error::{Error, Result};

pub const DEFAULT_DISCARD: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub rate: f64,
    pub intercept: f64,
    /// Growth of the fitted line over the fitting window, in e-folds.
    pub e_folds: f64,
    /// Fewer than two e-folds of growth were fitted.
    pub low_confidence: bool,
}

/// Least-squares slope of `log_norm` against `t` after dropping the leading
/// `discard` fraction of the samples.
pub fn fit_log_slope(t: &[f64], log_norm: &[f64], discard: f64) -> Result<GrowthFit> {
    if t.len() != log_norm.len() {
        return Err(Error::argument("time and value series differ in length"));
    }
    if !(0.0..1.0).contains(&discard) {
        return Err(Error::Domain { what: "discard fraction", value: discard });
    }
    let skip = (discard * t.len() as f64).floor() as usize;
    let pts: Vec<(f64, f64)> = t[skip..].iter().copied().zip(log_norm[skip..].iter().copied()).filter(|p| p.1.is_finite()).collect();
    if pts.len() < 2 {
        return Err(Error::argument("need at least two finite samples to fit a rate"));
    }
    let m = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::argument("samples span no time"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    let rate = sxy / sxx;
    let span = pts[pts.len() - 1].0 - pts[0].0;
    let e_folds = rate * span;
    Ok(GrowthFit { rate, intercept: ym - rate * tm, e_folds, low_confidence: e_folds < 2.0 })
}

pub fn measure_growth(series: &Trajectory) -> Result<GrowthFit> {
    fit_log_slope(&series.times(), &series.log_norms(), DEFAULT_DISCARD)
}
