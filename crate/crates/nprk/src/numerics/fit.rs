use crate::error::{Error, Result};

/// Least-squares slope of log(error) against log(h).
///
/// Pairs with a non-positive entry are rejected; at least two valid pairs are
/// required.
pub fn fit_loglog_slope(hs: &[f64], errors: &[f64]) -> Result<f64> {
    if hs.len() != errors.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} step sizes vs {} errors",
            hs.len(),
            errors.len()
        )));
    }
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(errors)
        .filter(|(h, e)| **h > 0.0 && **e > 0.0 && h.is_finite() && e.is_finite())
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData("need at least two positive (h, error) pairs"));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return Err(Error::InsufficientData("all step sizes identical"));
    }
    Ok((n * sxy - sx * sy) / denom)
}
