//! Ordinary least squares on `(log ε, log y)`.

use serde::Serialize;

use super::ProbeError;

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fit `log y = slope · log ε + intercept`, dropping magnitudes at or below
/// the floor. Requires at least three usable points.
pub fn fit_slope(eps: &[f64], ys: &[f64], floor: f64) -> Result<FitResult, ProbeError> {
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > floor)
        .map(|(&e, &y)| (e.ln(), y.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(ProbeError::TooFewPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy > 0.0 {
        (sxy * sxy) / (sxx * syy)
    } else {
        1.0
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points_used: pts.len(),
    })
}
