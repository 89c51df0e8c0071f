//! Sampling checks of separation certificates for unions of three totally-real
//! planes: a polynomial `P` maps `K0 = P0 ∩ B` and `K1 ∪ K2` into plane
//! regions meeting only at 0, and its zero fiber on the union is a finite union
//! of real segments.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::invariants::beta;
use crate::kernel::{c64, Complex, RealMatrix2};
use crate::planes::{family_planes, simultaneous_normal_form_with, weinstock_normal_form_with, TotallyRealPlane};

const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KallinCase {
    /// `z² + w²`; `det A1 = 0`, `det A2 ≥ 0`, `det[A1,A2] > 0`.
    SumOfSquaresSingular,
    /// `z² + w²`; `-1 ≤ det Aj < 0`, `det[A1,A2] > 0`.
    SumOfSquaresBoundedNegative,
    /// `zw`; `det Aj < 0`, `det[A1,A2] > 0`, `β > det A2 (Tr A1)²`.
    ProductNegative,
    /// `z` after `(z, w) ↦ (z + w, i(z - w))`, for the three parabolic preimage planes.
    LinearParabolic,
}

impl KallinCase {
    pub const ALL: [KallinCase; 4] = [
        KallinCase::SumOfSquaresSingular,
        KallinCase::SumOfSquaresBoundedNegative,
        KallinCase::ProductNegative,
        KallinCase::LinearParabolic,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::SumOfSquaresSingular => "sum-of-squares-singular",
            Self::SumOfSquaresBoundedNegative => "sum-of-squares-bounded-negative",
            Self::ProductNegative => "product-negative",
            Self::LinearParabolic => "linear-parabolic",
        }
    }

    pub fn separating_poly(self) -> &'static str {
        match self {
            Self::SumOfSquaresSingular | Self::SumOfSquaresBoundedNegative => "z^2 + w^2",
            Self::ProductNegative => "z w",
            Self::LinearParabolic => "z",
        }
    }

    /// Planes satisfying the case hypotheses. `t` selects a member of the
    /// cubic preimage family instead of the built-in example.
    pub fn default_instance(self, t: Option<f64>) -> Result<[TotallyRealPlane; 3]> {
        if let Some(t) = t {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
            }
        }
        Ok(match (self, t) {
            (Self::SumOfSquaresSingular, None) => [
                TotallyRealPlane::real(),
                TotallyRealPlane::from_matrix(&RealMatrix2::diag(0.0, 1.0)),
                TotallyRealPlane::from_matrix(&RealMatrix2::new(1.0, 1.0, 1.0, 1.0)),
            ],
            (Self::SumOfSquaresBoundedNegative, t) => family_planes(t.unwrap_or(1.7)),
            (Self::ProductNegative, t) => family_planes(t.unwrap_or(1.2)),
            (Self::LinearParabolic, t) => family_planes(t.unwrap_or(1.0)),
            (_, Some(t)) => family_planes(t),
        })
    }
}

impl fmt::Display for KallinCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for KallinCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown certificate case {s:?}")))
    }
}

/// Closed or open arc of directions `[start, start + width]`, `width ≤ 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub width: f64,
    pub open_start: bool,
    pub open_end: bool,
}

impl Arc {
    fn closed(start: f64, width: f64) -> Self {
        Self { start: start.rem_euclid(TAU), width, open_start: false, open_end: false }
    }

    fn open(start: f64, width: f64) -> Self {
        Self { start: start.rem_euclid(TAU), width, open_start: true, open_end: true }
    }

    fn contains_dir(&self, angle: f64) -> bool {
        (angle - self.start).rem_euclid(TAU) <= self.width
    }
}

/// Region of `C`: `{0}` together with every ray whose direction lies in an arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub description: String,
    pub arcs: Vec<Arc>,
}

impl Region {
    fn ray(angle: f64) -> Self {
        Self { description: format!("ray at angle {angle:.6}"), arcs: vec![Arc::closed(angle, 0.0)] }
    }

    fn line(angle: f64) -> Self {
        Self {
            description: format!("line at angle {:.6}", angle.rem_euclid(PI)),
            arcs: vec![Arc::closed(angle, 0.0), Arc::closed(angle + PI, 0.0)],
        }
    }

    /// Open half-plane `σ Im > 0` together with the closed negative reals.
    fn half_plane_with_negative_axis(sigma: f64) -> Self {
        let arc = if sigma > 0.0 {
            Arc { start: 0.0, width: PI, open_start: true, open_end: false }
        } else {
            Arc { start: PI, width: PI, open_start: false, open_end: true }
        };
        let side = if sigma > 0.0 { "upper" } else { "lower" };
        Self { description: format!("open {side} half-plane with nonpositive reals"), arcs: vec![arc] }
    }

    fn slit_plane() -> Self {
        Self { description: "plane minus positive reals".into(), arcs: vec![Arc::open(0.0, TAU)] }
    }

    fn off_real_axis() -> Self {
        Self { description: "nonreal values and 0".into(), arcs: vec![Arc::open(0.0, PI), Arc::open(PI, PI)] }
    }

    /// Distance from `w` to the closure of the region.
    fn distance(&self, w: Complex) -> f64 {
        if w.norm() == 0.0 {
            return 0.0;
        }
        let ang = w.arg();
        self.arcs
            .iter()
            .map(|a| {
                if a.contains_dir(ang) {
                    0.0
                } else {
                    ray_distance(w, a.start).min(ray_distance(w, a.start + a.width))
                }
            })
            .fold(w.norm(), f64::min)
    }

    /// The regions share only the origin.
    fn meets_only_at_origin(&self, other: &Region, delta: f64) -> bool {
        self.arcs.iter().all(|a| other.arcs.iter().all(|b| arcs_disjoint(a, b, delta)))
    }
}

fn ray_distance(w: Complex, angle: f64) -> f64 {
    let e = Complex::from_polar(1.0, angle);
    let along = w.re * e.re + w.im * e.im;
    if along >= 0.0 {
        (e.re * w.im - e.im * w.re).abs()
    } else {
        w.norm()
    }
}

/// Arcs are disjoint when both gaps between them are positive; gaps within
/// `delta` count as touching, which is allowed only at an open endpoint.
fn arcs_disjoint(a: &Arc, b: &Arc, delta: f64) -> bool {
    let mut gap_ab = (b.start - (a.start + a.width)).rem_euclid(TAU);
    if gap_ab > TAU - delta {
        gap_ab -= TAU;
    }
    let gap_ba = TAU - a.width - b.width - gap_ab;
    let ok = |gap: f64, open: bool| gap > delta || (gap >= -delta && open);
    ok(gap_ab, a.open_end || b.open_start) && ok(gap_ba, b.open_end || a.open_start)
}

#[derive(Debug, Clone, Copy)]
enum Separator {
    /// `uᵀ S u` with `S` the symmetric matrix of the quadratic.
    Quadratic([[f64; 2]; 2]),
    FirstCoordinate,
}

impl Separator {
    fn degree(self) -> i32 {
        match self {
            Self::Quadratic(_) => 2,
            Self::FirstCoordinate => 1,
        }
    }

    fn eval(self, u: [Complex; 2]) -> Complex {
        match self {
            Self::Quadratic(s) => {
                u[0] * u[0] * s[0][0] + u[0] * u[1] * (2.0 * s[0][1]) + u[1] * u[1] * s[1][1]
            }
            Self::FirstCoordinate => u[0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KallinReport {
    pub case: KallinCase,
    /// Worst distance of `P(u)/|u|^d` from the declared region of its plane.
    pub max_violation: f64,
    pub zero_fiber_ok: bool,
    pub regions_disjoint: bool,
    /// Whether the matrix roles were exchanged to meet the hypotheses.
    pub swapped: bool,
    pub samples: usize,
    pub zero_samples: usize,
    pub ball_radius: f64,
    pub region_contracts: Vec<Region>,
}

impl KallinReport {
    pub fn passed(&self) -> bool {
        self.max_violation <= 1e-9 && self.zero_fiber_ok && self.regions_disjoint
    }
}

pub fn kallin_verify(
    case: KallinCase,
    planes: &[TotallyRealPlane; 3],
    samples: usize,
    ball_radius: f64,
) -> Result<KallinReport> {
    kallin_verify_with(case, planes, samples, ball_radius, &Config::default())
}

/// Same as [`kallin_verify`] with planes `R^2, (A1 + iI)R^2, (A2 + iI)R^2`.
pub fn kallin_verify_matrices(
    case: KallinCase,
    a1: &RealMatrix2,
    a2: &RealMatrix2,
    samples: usize,
    ball_radius: f64,
) -> Result<KallinReport> {
    let planes = [TotallyRealPlane::real(), TotallyRealPlane::from_matrix(a1), TotallyRealPlane::from_matrix(a2)];
    kallin_verify(case, &planes, samples, ball_radius)
}

struct Prepared {
    separator: Separator,
    bases: [[[Complex; 2]; 2]; 3],
    regions: [Region; 3],
    swapped: bool,
}

pub fn kallin_verify_with(
    case: KallinCase,
    planes: &[TotallyRealPlane; 3],
    samples: usize,
    ball_radius: f64,
    cfg: &Config,
) -> Result<KallinReport> {
    if !(ball_radius.is_finite() && ball_radius > 0.0) {
        return Err(Error::InvalidParameter(format!("ball radius must be positive, got {ball_radius}")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    for p in planes {
        p.check_totally_real(cfg)
            .map_err(|e| Error::HypothesisViolated(format!("planes totally real: {e}")))?;
    }
    let prep = match case {
        KallinCase::LinearParabolic => prepare_linear(planes),
        _ => prepare_quadratic(case, planes, cfg)?,
    };
    let regions_disjoint = [1, 2]
        .iter()
        .all(|&j| prep.regions[0].meets_only_at_origin(&prep.regions[j], 1e-12));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let offset = (rng.gen::<f64>(), rng.gen::<f64>());
    let d = prep.separator.degree();
    let mut max_violation: f64 = 0.0;
    let mut zero_fiber_ok = true;
    let mut zero_samples = 0;
    let mut total = 0;
    for (j, basis) in prep.bases.iter().enumerate() {
        let point = |x: [f64; 2]| [basis[0][0] * x[0] + basis[1][0] * x[1], basis[0][1] * x[0] + basis[1][1] * x[1]];
        let nulls = null_directions(prep.separator, basis);
        let null_lines: Vec<[Complex; 2]> = match &nulls {
            Some(dirs) => dirs.iter().map(|&x| unit(point(x))).collect(),
            None => {
                zero_fiber_ok = false;
                Vec::new()
            }
        };
        let mut dirs: Vec<[f64; 2]> = r2_disc(samples, offset);
        // Probes along the declared null directions exercise the fiber check.
        for x in nulls.iter().flatten() {
            for s in [1.0, 0.5, -0.25, -1.0] {
                dirs.push([s * x[0], s * x[1]]);
            }
        }
        for v in dirs {
            let r = v[0].hypot(v[1]);
            if r == 0.0 {
                continue;
            }
            let u_hat = point([v[0] / r, v[1] / r]);
            let scale = ball_radius * r / norm2(u_hat);
            let u = [u_hat[0] * scale, u_hat[1] * scale];
            let un = norm2(u);
            let value = prep.separator.eval(u) / un.powi(d);
            total += 1;
            max_violation = max_violation.max(prep.regions[j].distance(value));
            if value.norm() <= cfg.kallin_zero_value {
                zero_samples += 1;
                let uu = unit(u);
                let near = null_lines.iter().any(|l| real_line_distance(uu, *l) <= cfg.kallin_zero_dist);
                zero_fiber_ok &= near;
            }
        }
    }
    Ok(KallinReport {
        case,
        max_violation,
        zero_fiber_ok,
        regions_disjoint,
        swapped: prep.swapped,
        samples: total,
        zero_samples,
        ball_radius,
        region_contracts: prep.regions.to_vec(),
    })
}

fn prepare_linear(planes: &[TotallyRealPlane; 3]) -> Prepared {
    let psi = |u: [Complex; 2]| [u[0] + u[1], c64(0.0, 1.0) * (u[0] - u[1])];
    let bases = planes.map(|p| {
        let b = p.basis();
        [psi(b[0]), psi(b[1])]
    });
    let s3 = 3f64.sqrt();
    Prepared {
        separator: Separator::FirstCoordinate,
        bases,
        regions: [
            Region::line(0.0),
            Region::line(c64(1.0, -s3).arg()),
            Region::line(c64(1.0, s3).arg()),
        ],
        swapped: false,
    }
}

fn prepare_quadratic(case: KallinCase, planes: &[TotallyRealPlane; 3], cfg: &Config) -> Result<Prepared> {
    let w = weinstock_normal_form_with(&planes[0], &planes[1..], cfg)
        .map_err(|e| Error::HypothesisViolated(format!("planes transverse: {e}")))?;
    let (a1, a2) = (w.matrices[0], w.matrices[1]);
    let tol = cfg.criterion_tol;
    let dc = a1.commutator(&a2).det();
    if !(dc > tol) {
        return Err(Error::HypothesisViolated(format!("det[A1,A2] > 0 (got {dc:e})")));
    }
    let swapped = match case {
        KallinCase::SumOfSquaresSingular => {
            let fits = |x: &RealMatrix2, y: &RealMatrix2| x.det().abs() <= tol && y.det() >= -tol;
            if fits(&a1, &a2) {
                false
            } else if fits(&a2, &a1) {
                true
            } else {
                return Err(Error::HypothesisViolated("det A1 = 0 and det A2 >= 0".into()));
            }
        }
        KallinCase::SumOfSquaresBoundedNegative => {
            let fits = |x: &RealMatrix2| x.det() < -tol && x.det() >= -1.0 - tol;
            if !(fits(&a1) && fits(&a2)) {
                return Err(Error::HypothesisViolated("-1 <= det Aj < 0".into()));
            }
            false
        }
        KallinCase::ProductNegative => {
            if !(a1.det() < -tol && a2.det() < -tol) {
                return Err(Error::HypothesisViolated("det Aj < 0".into()));
            }
            let b = beta(&a1, &a2);
            if b - a2.det() * a1.trace().powi(2) > tol {
                false
            } else if b - a1.det() * a2.trace().powi(2) > tol {
                true
            } else {
                return Err(Error::HypothesisViolated("beta > min{det A2 (Tr A1)^2, det A1 (Tr A2)^2}".into()));
            }
        }
        KallinCase::LinearParabolic => unreachable!("linear case has its own preparation"),
    };
    let (a1, a2) = if swapped { (a2, a1) } else { (a1, a2) };
    let nf = simultaneous_normal_form_with(&a1, &a2, cfg)
        .map_err(|e| Error::HypothesisViolated(format!("simultaneous normal form: {e}")))?;
    let (dg, sy) = (nf.diagonal, nf.symmetric);
    let (l1, l2) = (dg.m[0][0], dg.m[1][1]);
    let (s1, s2) = (sy.m[0][0], sy.m[1][1]);
    let basis_of = |m: &RealMatrix2| {
        let p = TotallyRealPlane::from_matrix(m).basis();
        [p[0], p[1]]
    };
    let bases = [TotallyRealPlane::real().basis(), basis_of(&dg), basis_of(&sy)];
    let (separator, regions) = match case {
        KallinCase::SumOfSquaresSingular => (
            Separator::Quadratic([[1.0, 0.0], [0.0, 1.0]]),
            [
                Region::ray(0.0),
                Region::half_plane_with_negative_axis((l1 + l2).signum()),
                Region::half_plane_with_negative_axis((s1 + s2).signum()),
            ],
        ),
        KallinCase::SumOfSquaresBoundedNegative => (
            Separator::Quadratic([[1.0, 0.0], [0.0, 1.0]]),
            [Region::ray(0.0), Region::slit_plane(), Region::slit_plane()],
        ),
        _ => (
            Separator::Quadratic([[0.0, 0.5], [0.5, 0.0]]),
            [
                Region::line(0.0),
                Region::line(c64(l1 * l2 - 1.0, l1 + l2).arg()),
                Region::off_real_axis(),
            ],
        ),
    };
    Ok(Prepared { separator, bases, regions, swapped })
}

fn norm2(u: [Complex; 2]) -> f64 {
    (u[0].norm_sqr() + u[1].norm_sqr()).sqrt()
}

fn unit(u: [Complex; 2]) -> [Complex; 2] {
    let n = norm2(u);
    [u[0] / n, u[1] / n]
}

/// Distance from a unit vector to the real line through unit `v`.
fn real_line_distance(u: [Complex; 2], v: [Complex; 2]) -> f64 {
    let proj = (v[0].conj() * u[0] + v[1].conj() * u[1]).re;
    norm2([u[0] - v[0] * proj, u[1] - v[1] * proj])
}

/// Real parameter directions where the separator vanishes on the plane.
/// `None` if it vanishes on the whole plane.
fn null_directions(sep: Separator, basis: &[[Complex; 2]; 2]) -> Option<Vec<[f64; 2]>> {
    match sep {
        Separator::FirstCoordinate => {
            let (c0, c1) = (basis[0][0], basis[1][0]);
            let scale = c0.norm().max(c1.norm());
            if scale == 0.0 {
                return None;
            }
            let cross = c0.re * c1.im - c0.im * c1.re;
            if cross.abs() > 1e-12 * scale * scale {
                return Some(Vec::new());
            }
            Some(vec![if c0.norm() >= c1.norm() { [-(c1 / c0).re, 1.0] } else { [1.0, -(c0 / c1).re] }])
        }
        Separator::Quadratic(_) => {
            // Coefficients of P(x v0 + y v1) = a x² + 2b xy + c y².
            let p = |x: f64, y: f64| {
                sep.eval([basis[0][0] * x + basis[1][0] * y, basis[0][1] * x + basis[1][1] * y])
            };
            let a = p(1.0, 0.0);
            let c = p(0.0, 1.0);
            let b = (p(1.0, 1.0) - a - c) * 0.5;
            let scale = a.norm().max(b.norm()).max(c.norm());
            if scale == 0.0 {
                return None;
            }
            let tol = 1e-12 * scale;
            let im = [a.im, b.im, c.im];
            let re = [a.re, b.re, c.re];
            let (first, second) = if im.iter().all(|v| v.abs() <= tol) { (re, im) } else { (im, re) };
            if first.iter().all(|v| v.abs() <= tol) {
                return None;
            }
            let dirs = real_form_zeros(first);
            Some(
                dirs.into_iter()
                    .filter(|x| {
                        (second[0] * x[0] * x[0] + 2.0 * second[1] * x[0] * x[1] + second[2] * x[1] * x[1]).abs()
                            <= 1e-9 * scale
                    })
                    .collect(),
            )
        }
    }
}

/// Unit directions where `a x² + 2b xy + c y² = 0`.
fn real_form_zeros([a, b, c]: [f64; 3]) -> Vec<[f64; 2]> {
    let m = RealMatrix2::new(a, b, b, c);
    let spec = m.spectrum();
    let (l1, l2) = (spec[0].re, spec[1].re);
    let scale = l1.abs().max(l2.abs());
    let eig = |l: f64| {
        let v = if (a - l).abs() + b.abs() >= (c - l).abs() + b.abs() { [-b, a - l] } else { [c - l, -b] };
        let n = v[0].hypot(v[1]);
        if n == 0.0 {
            [1.0, 0.0]
        } else {
            [v[0] / n, v[1] / n]
        }
    };
    let (e1, e2) = (eig(l1), if (l1 - l2).abs() > 0.0 { eig(l2) } else { [-eig(l1)[1], eig(l1)[0]] });
    if l1.abs() <= 1e-12 * scale && l2.abs() <= 1e-12 * scale {
        return Vec::new();
    }
    if l1.abs() <= 1e-12 * scale {
        return vec![e1];
    }
    if l2.abs() <= 1e-12 * scale {
        return vec![e2];
    }
    if l1 * l2 > 0.0 {
        return Vec::new();
    }
    let (r1, r2) = (l1.abs().sqrt(), l2.abs().sqrt());
    // √|l1| (e1·x) = ±√|l2| (e2·x)  ⇔  x ∝ r2 e1 ± r1 e2.
    [1.0, -1.0]
        .iter()
        .map(|s| {
            let x = [r2 * e1[0] + s * r1 * e2[0], r2 * e1[1] + s * r1 * e2[1]];
            let n = x[0].hypot(x[1]);
            [x[0] / n, x[1] / n]
        })
        .collect()
}

/// Low-discrepancy points in the closed unit disc: an additive recurrence
/// on the unit square with a seeded offset, mapped by `(√s, 2πt)`.
fn r2_disc(n: usize, offset: (f64, f64)) -> Vec<[f64; 2]> {
    // Plastic number: the R2 sequence's generator.
    let g = 1.324_717_957_244_746_f64;
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    (0..n)
        .map(|k| {
            let s = (offset.0 + a1 * k as f64).fract();
            let t = (offset.1 + a2 * k as f64).fract();
            let r = s.sqrt();
            [r * (TAU * t).cos(), r * (TAU * t).sin()]
        })
        .collect()
}
