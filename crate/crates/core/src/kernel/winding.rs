use std::f64::consts::PI;

use super::Complex;
use crate::config::Config;
use crate::error::{Error, Result};

pub fn winding_number(samples: &[Complex]) -> Result<i64> {
    winding_number_with(samples, &Config::default())
}

/// Winding number about 0 of the closed polygon through `samples`
/// (the last sample connects back to the first).
pub fn winding_number_with(samples: &[Complex], cfg: &Config) -> Result<i64> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("empty curve".into()));
    }
    if samples.iter().any(|s| !(s.re.is_finite() && s.im.is_finite())) {
        return Err(Error::NonFinite("curve sample"));
    }
    let min = samples.iter().map(|s| s.norm()).fold(f64::INFINITY, f64::min);
    if min < cfg.winding_min_modulus {
        return Err(Error::CurveThroughOrigin { modulus: min });
    }
    let mut total = 0.0;
    for (i, &a) in samples.iter().enumerate() {
        let b = samples[(i + 1) % samples.len()];
        let step = (b / a).arg();
        if step.abs() >= PI * (1.0 - 1e-12) {
            return Err(Error::UndersampledCurve { increment: step.abs() });
        }
        total += step;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// `n` samples of `f(e^{iθ})` at uniform `θ = 2πk/n`.
pub fn sample_circle(n: usize, radius: f64, f: impl Fn(Complex) -> Complex) -> Vec<Complex> {
    (0..n)
        .map(|k| f(Complex::from_polar(radius, 2.0 * PI * k as f64 / n as f64)))
        .collect()
}
