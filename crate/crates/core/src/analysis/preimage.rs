//! Circle preimages of the auxiliary map `g(z) = z² + t z⁴ + (t²/3) z⁶`.
//!
//! `g(z) - g(a) = (z² - a²)·Q(z²)` with `Q` quadratic, whose roots `λ1, λ2`
//! have closed forms. Beyond `±a`, each unimodular `λ` adds its two square roots.

use std::f64::consts::PI;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::kernel::{find_roots_with, Complex, ComplexPoly};

pub fn auxiliary_map(t: f64, z: Complex) -> Complex {
    let z2 = z * z;
    z2 * (1.0 + z2 * (t + z2 * (t * t / 3.0)))
}

fn check_domain(t: f64, psi: f64) -> Result<()> {
    if !(t.is_finite() && (0.0..1.0).contains(&t)) {
        return Err(Error::InvalidParameter(format!("t must lie in [0, 1), got {t}")));
    }
    if !(psi.is_finite() && (0.0..2.0 * PI).contains(&psi)) {
        return Err(Error::InvalidParameter(format!("psi must lie in [0, 2π), got {psi}")));
    }
    Ok(())
}

/// Roots `λ1, λ2` of `Q` for `a = e^{iψ}`, `t > 0`.
pub fn preimage_lambdas(t: f64, psi: f64) -> [Complex; 2] {
    let b = Complex::from_polar(1.0, 2.0 * psi);
    let centre = -(1.0 + b * (t / 3.0)) * (1.5 / t);
    let spread = Complex::new(0.0, 3f64.sqrt() / (2.0 * t)) * (1.0 + b * t);
    [centre + spread, centre - spread]
}

/// Number of solutions of `g(z) = g(e^{iψ})` on the unit circle, from the
/// closed-form roots.
pub fn preimage_count(t: f64, psi: f64) -> Result<usize> {
    check_domain(t, psi)?;
    if t == 0.0 {
        return Ok(2);
    }
    let tol = Config::default().preimage_circle_tol;
    let extra = preimage_lambdas(t, psi)
        .iter()
        .filter(|l| (l.norm().sqrt() - 1.0).abs() <= tol)
        .count();
    Ok(2 + 2 * extra)
}

/// The same count from all six roots of `g(z) - g(a)`.
pub fn brute_force_preimage_count(t: f64, psi: f64) -> Result<usize> {
    check_domain(t, psi)?;
    let cfg = Config::default();
    let ga = auxiliary_map(t, Complex::from_polar(1.0, psi));
    let zero = Complex::new(0.0, 0.0);
    let q = ComplexPoly::new(vec![
        -ga,
        zero,
        Complex::new(1.0, 0.0),
        zero,
        Complex::new(t, 0.0),
        zero,
        Complex::new(t * t / 3.0, 0.0),
    ]);
    let roots = find_roots_with(&q, &cfg)?;
    Ok(roots.count_where(|z| (z.norm() - 1.0).abs() <= cfg.preimage_circle_tol))
}

/// Angles `ψ ∈ [0, 2π)` at which one of `λ1, λ2` is unimodular:
/// `3/t + 2√3 cos(2ψ ∓ π/6) = 0`. Empty for `t < √3/2`; at the threshold each
/// branch has one tangential solution per period `π`.
pub fn unit_modulus_angles(t: f64) -> Vec<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Vec::new();
    }
    let c = -3f64.sqrt() / (2.0 * t);
    if c < -1.0 - 1e-15 {
        return Vec::new();
    }
    let x = c.max(-1.0).acos();
    let mut out: Vec<f64> = Vec::new();
    for shift in [PI / 6.0, -PI / 6.0] {
        for s in [x, -x] {
            for m in 0..3 {
                let psi = ((s + shift + 2.0 * PI * m as f64) / 2.0).rem_euclid(2.0 * PI);
                if !out.iter().any(|&o| (o - psi).abs() < 1e-12 || (2.0 * PI - (o - psi).abs()) < 1e-12) {
                    out.push(psi);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Whether some `ψ` has four circle preimages, confirmed by the count.
pub fn exists_four_preimages(t: f64) -> bool {
    unit_modulus_angles(t)
        .into_iter()
        .any(|psi| matches!(preimage_count(t, psi), Ok(n) if n >= 4))
}

/// Minimum over `x` of `3 cos x - √3 sin x`, by grid search and golden-section refinement.
pub fn constraint_minimum() -> f64 {
    let f = |x: f64| 3.0 * x.cos() - 3f64.sqrt() * x.sin();
    let n = 4096;
    let h = 2.0 * PI / n as f64;
    let best = (0..n).map(|i| i as f64 * h).min_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap_or(0.0);
    let (mut lo, mut hi) = (best - h, best + h);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (a, b) = (hi - r * (hi - lo), lo + r * (hi - lo));
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

/// Smallest `t` with a unimodular `λ`: `3/t + min_x(3 cos x - √3 sin x) = 0`.
pub fn min_preimage_threshold() -> f64 {
    -3.0 / constraint_minimum()
}
