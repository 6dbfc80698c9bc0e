//! Least-squares fits of power laws and exponentials.

use crate::error::{Error, Result};

/// Straight-line least-squares fit `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of a sample from the line.
    pub max_residual: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::param(
            "samples",
            y.len() as f64,
            "x and y lengths differ",
        ));
    }
    if x.len() < 2 {
        return Err(Error::param(
            "samples",
            x.len() as f64,
            "need at least two points to fit",
        ));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::param("samples", f64::NAN, "non-finite sample"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::param("samples", mx, "all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).abs())
        .fold(0.0, f64::max);
    Ok(LineFit {
        slope,
        intercept,
        max_residual,
    })
}

/// Fitted scaling law `y = coefficient * x^exponent` (power) or
/// `y = coefficient * exp(exponent * x)` (exponential).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub coefficient: f64,
    /// Smallest and largest abscissa used.
    pub window: (f64, f64),
    /// Max deviation in log space.
    pub residual: f64,
}

fn window(x: &[f64]) -> (f64, f64) {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn logs(name: &'static str, v: &[f64]) -> Result<Vec<f64>> {
    v.iter()
        .map(|&a| {
            if a > 0.0 {
                Ok(a.ln())
            } else {
                Err(Error::param(name, a, "log fit needs positive values"))
            }
        })
        .collect()
}

/// Fit `log y` against `log x`.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<ScalingFit> {
    let f = fit_line(&logs("x", x)?, &logs("y", y)?)?;
    Ok(ScalingFit {
        exponent: f.slope,
        coefficient: f.intercept.exp(),
        window: window(x),
        residual: f.max_residual,
    })
}

/// Fit `log y` against `x`.
pub fn fit_exponential(x: &[f64], y: &[f64]) -> Result<ScalingFit> {
    let f = fit_line(x, &logs("y", y)?)?;
    Ok(ScalingFit {
        exponent: f.slope,
        coefficient: f.intercept.exp(),
        window: window(x),
        residual: f.max_residual,
    })
}
