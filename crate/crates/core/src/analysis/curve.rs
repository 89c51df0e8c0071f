use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::kernel::{Complex, HermitianPoly};

/// Two circle angles with equal curve value. `refined` is false for
/// near-misses whose residual could not be driven below tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoincidencePair {
    pub theta1: f64,
    pub theta2: f64,
    pub refined: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveAnalysis {
    pub k: u32,
    pub j: u32,
    pub samples: usize,
    /// Smallest `P > 0` with `C(θ + P) = C(θ)`; shifts by `P` are enforced coincidences.
    pub period: f64,
    pub coincidence_pairs: Vec<CoincidencePair>,
    pub min_arc_gap: f64,
    pub property_star_star: bool,
    pub threshold_arc: f64,
}

/// `C(θ) = p(e^{iθ}, e^{-iθ}) e^{-ikθ} = Σ c_n e^{-2inθ}` for homogeneous `p`.
struct BoundaryCurve {
    terms: Vec<(f64, Complex)>,
}

impl BoundaryCurve {
    fn new(p: &HermitianPoly) -> Self {
        Self { terms: p.terms().iter().map(|(&(_, n), &c)| (n as f64, c)).collect() }
    }

    fn eval(&self, theta: f64) -> Complex {
        self.terms.iter().map(|&(n, c)| c * Complex::from_polar(1.0, -2.0 * n * theta)).sum()
    }

    fn deriv(&self, theta: f64) -> Complex {
        self.terms
            .iter()
            .map(|&(n, c)| c * Complex::new(0.0, -2.0 * n) * Complex::from_polar(1.0, -2.0 * n * theta))
            .sum()
    }

    fn scale(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum::<f64>().max(1.0)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distance between angles on a circle of circumference `period`.
fn circ_dist(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

pub fn curve_analysis(p: &HermitianPoly, j: u32, samples: usize) -> Result<CurveAnalysis> {
    curve_analysis_with(p, j, samples, &Config::default())
}

/// Coincidences `C(θ1) = C(θ2)` of the boundary curve and the arc-gap test
/// `min gap ≥ π/(k - j + 1)`.
///
/// Candidates are discrete local minima of `|C_a - C_b|` among sample pairs
/// that share a spatial-hash neighbourhood; each is refined by damped Newton
/// on `(θ1, θ2)`.
pub fn curve_analysis_with(p: &HermitianPoly, j: u32, samples: usize, cfg: &Config) -> Result<CurveAnalysis> {
    let k = p.degree();
    if !p.is_homogeneous() || p.is_zero() {
        return Err(Error::DegenerateInput("boundary curve needs a nonzero homogeneous polynomial".into()));
    }
    if !(k > j && j >= 1) {
        return Err(Error::InvalidParameter(format!("need k > j >= 1, got k = {k}, j = {j}")));
    }
    if samples < 16 {
        return Err(Error::InvalidParameter(format!("need at least 16 samples, got {samples}")));
    }
    let g = p.terms().keys().filter(|&&(_, n)| n > 0).fold(0u64, |acc, &(_, n)| gcd(acc, 2 * n as u64));
    if g == 0 {
        return Err(Error::DegenerateInput("boundary curve is constant".into()));
    }
    let curve = BoundaryCurve::new(p);
    let period = 2.0 * PI / g as f64;
    let n = (samples / g as usize).max(64);
    let step = period / n as f64;
    let pts: Vec<Complex> = (0..n).map(|i| curve.eval(i as f64 * step)).collect();

    let (mut lo, mut hi) = (pts[0], pts[0]);
    for z in &pts {
        lo = Complex::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let diameter = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let cell = 10.0 * diameter / samples as f64;
    let max_step = (0..n).map(|i| (pts[(i + 1) % n] - pts[i]).norm()).fold(0.0, f64::max);
    if max_step > 2.0 * cell {
        return Err(Error::Undersampled(format!(
            "curve step {max_step:.3e} exceeds two hash cells of {cell:.3e}"
        )));
    }

    let key = |z: Complex| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
    let mut hash: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &z) in pts.iter().enumerate() {
        hash.entry(key(z)).or_default().push(i);
    }
    let d = |a: isize, b: isize| {
        let m = n as isize;
        (pts[a.rem_euclid(m) as usize] - pts[b.rem_euclid(m) as usize]).norm()
    };
    let mut candidates = Vec::new();
    for (i, &z) in pts.iter().enumerate() {
        let (kx, ky) = key(z);
        for dx in -2..=2 {
            for dy in -2..=2 {
                let Some(bucket) = hash.get(&(kx + dx, ky + dy)) else { continue };
                for &jj in bucket {
                    let sep = jj.abs_diff(i).min(n - jj.abs_diff(i));
                    if jj <= i || sep < 2 {
                        continue;
                    }
                    let (a, b) = (i as isize, jj as isize);
                    let here = d(a, b);
                    let is_min = (-1..=1)
                        .flat_map(|u| (-1..=1).map(move |v| (u, v)))
                        .filter(|&uv| uv != (0, 0))
                        .all(|(u, v)| here <= d(a + u, b + v));
                    if is_min {
                        candidates.push((i as f64 * step, jj as f64 * step));
                    }
                }
            }
        }
    }

    let tol = cfg.curve_residual * curve.scale();
    let mut pairs: Vec<CoincidencePair> = Vec::new();
    for (t1, t2) in candidates {
        let (a, b, res) = refine(&curve, t1, t2, tol);
        let refined = res <= tol && circ_dist(a, b, period) > 1e-7;
        let (a, b) = (a.rem_euclid(period), b.rem_euclid(period));
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        // Representative of the second angle closest to the first on the full circle.
        let b = (0..g)
            .map(|m| b + m as f64 * period)
            .min_by(|x, y| circ_dist(a, *x, 2.0 * PI).total_cmp(&circ_dist(a, *y, 2.0 * PI)))
            .unwrap_or(b);
        let pair = CoincidencePair { theta1: a, theta2: b, refined, residual: res };
        let dup = pairs.iter_mut().find(|q| {
            circ_dist(q.theta1, pair.theta1, period) < 1e-8 && circ_dist(q.theta2, pair.theta2, period) < 1e-8
        });
        match dup {
            Some(q) if !q.refined && pair.refined => *q = pair,
            Some(_) => {}
            None => pairs.push(pair),
        }
    }
    pairs.sort_by(|x, y| x.theta1.total_cmp(&y.theta1).then(x.theta2.total_cmp(&y.theta2)));

    let min_arc_gap = pairs
        .iter()
        .filter(|q| q.refined)
        .map(|q| circ_dist(q.theta1, q.theta2, 2.0 * PI))
        .fold(period, f64::min);
    let threshold_arc = PI / (k - j + 1) as f64;
    Ok(CurveAnalysis {
        k,
        j,
        samples,
        period,
        coincidence_pairs: pairs,
        min_arc_gap,
        property_star_star: min_arc_gap >= threshold_arc - 1e-9,
        threshold_arc,
    })
}

/// Levenberg–Marquardt on `(Re, Im)(C(θ1) - C(θ2)) = 0`; damping keeps the
/// step defined where the Jacobian is singular (tangential coincidences).
fn refine(curve: &BoundaryCurve, t1: f64, t2: f64, tol: f64) -> (f64, f64, f64) {
    let resid = |a: f64, b: f64| curve.eval(a) - curve.eval(b);
    let (mut a, mut b) = (t1, t2);
    let mut r = resid(a, b);
    let mut mu = 1e-3;
    for _ in 0..200 {
        if r.norm() <= tol * 1e-3 {
            break;
        }
        let (c1, c2) = (curve.deriv(a), -curve.deriv(b));
        // Normal equations of the 2x2 real Jacobian [[Re c1, Re c2], [Im c1, Im c2]].
        let j11 = c1.re * c1.re + c1.im * c1.im;
        let j22 = c2.re * c2.re + c2.im * c2.im;
        let j12 = c1.re * c2.re + c1.im * c2.im;
        let g1 = c1.re * r.re + c1.im * r.im;
        let g2 = c2.re * r.re + c2.im * r.im;
        let mut accepted = false;
        while mu < 1e14 {
            let damp = mu * (j11 + j22).max(1e-30);
            let (m11, m22) = (j11 + damp, j22 + damp);
            let det = m11 * m22 - j12 * j12;
            let da = -(m22 * g1 - j12 * g2) / det;
            let db = -(m11 * g2 - j12 * g1) / det;
            let trial = resid(a + da, b + db);
            if trial.norm() < r.norm() {
                a += da;
                b += db;
                r = trial;
                mu = (mu * 0.3).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    (a, b, r.norm())
}

/// Writes `theta,re_C,im_C` for `samples` angles over the full circle.
pub fn write_curve_csv<W: Write>(p: &HermitianPoly, samples: usize, mut out: W) -> std::io::Result<()> {
    let curve = BoundaryCurve::new(p);
    writeln!(out, "theta,re_C,im_C")?;
    for i in 0..samples {
        let theta = 2.0 * PI * i as f64 / samples as f64;
        let c = curve.eval(theta);
        writeln!(out, "{theta:e},{:e},{:e}", c.re, c.im)?;
    }
    Ok(())
}

/// Writes `theta1,theta2,refined,residual` for every coincidence pair.
pub fn write_coincidences_csv<W: Write>(analysis: &CurveAnalysis, mut out: W) -> std::io::Result<()> {
    writeln!(out, "theta1,theta2,refined,residual")?;
    for q in &analysis.coincidence_pairs {
        writeln!(out, "{:e},{:e},{},{:e}", q.theta1, q.theta2, q.refined, q.residual)?;
    }
    Ok(())
}
