//! Totally-real planes in C^2, their Weinstock normal form, the cubic
//! factorization into three planes, and the branch lifts over a perturbed
//! cubic surface.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::kernel::{c64, is_finite_c, Complex, ComplexMatrix2, RealMatrix2};

/// Real 2-plane in C^2, either the graph `w = αz + βz̄` or the real span of
/// two vectors `(z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TotallyRealPlane {
    Graph { alpha: Complex, beta: Complex },
    Basis { basis: [[Complex; 2]; 2] },
}

impl TotallyRealPlane {
    pub fn graph(alpha: Complex, beta: Complex) -> Self {
        Self::Graph { alpha, beta }
    }

    pub fn span(v0: [Complex; 2], v1: [Complex; 2]) -> Self {
        Self::Basis { basis: [v0, v1] }
    }

    /// `R^2 = {(x, y)}`.
    pub fn real() -> Self {
        Self::span([c64(1.0, 0.0), c64(0.0, 0.0)], [c64(0.0, 0.0), c64(1.0, 0.0)])
    }

    /// `(A + iI) R^2`.
    pub fn from_matrix(a: &RealMatrix2) -> Self {
        let m = ComplexMatrix2::shifted_by_i(a);
        Self::span(m.column(0), m.column(1))
    }

    /// Real basis. A graph uses the images of `z = 1` and `z = i`.
    pub fn basis(&self) -> [[Complex; 2]; 2] {
        match *self {
            Self::Graph { alpha, beta } => {
                let i = c64(0.0, 1.0);
                [[c64(1.0, 0.0), alpha + beta], [i, i * (alpha - beta)]]
            }
            Self::Basis { basis } => basis,
        }
    }

    fn is_finite(&self) -> bool {
        self.basis().iter().flatten().all(|&c| is_finite_c(c))
    }

    /// `|det[v0 v1]| / (|v0| |v1|)`; zero iff the span contains a complex line.
    pub fn total_reality(&self) -> f64 {
        let [v0, v1] = self.basis();
        let m = ComplexMatrix2::from_columns(v0, v1);
        let n0 = (v0[0].norm_sqr() + v0[1].norm_sqr()).sqrt();
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        if n0 == 0.0 || n1 == 0.0 {
            return 0.0;
        }
        m.det().norm() / (n0 * n1)
    }

    pub fn check_totally_real(&self, cfg: &Config) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite("plane"));
        }
        let d = self.total_reality();
        if d < cfg.totally_real_det {
            return Err(Error::NotTotallyReal { det: d });
        }
        Ok(())
    }

    /// Graph coefficients `(α, β)` when the plane projects onto the z-axis.
    pub fn to_graph(&self) -> Option<(Complex, Complex)> {
        if let Self::Graph { alpha, beta } = *self {
            return Some((alpha, beta));
        }
        let [[c1, w1], [c2, w2]] = self.basis();
        let det = c1 * c2.conj() - c1.conj() * c2;
        if det.norm() <= 1e-12 * c1.norm() * c2.norm() || det.norm() == 0.0 {
            return None;
        }
        let alpha = (w1 * c2.conj() - c1.conj() * w2) / det;
        let beta = (c1 * w2 - w1 * c2) / det;
        Some((alpha, beta))
    }

    /// Orthogonal projector of the plane viewed as a subspace of R^4.
    fn projector(&self) -> [[f64; 4]; 4] {
        let [v0, v1] = self.basis();
        let r = |v: [Complex; 2]| [v[0].re, v[0].im, v[1].re, v[1].im];
        let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut e0 = r(v0);
        let n0 = dot(&e0, &e0).sqrt();
        e0.iter_mut().for_each(|x| *x /= n0);
        let mut e1 = r(v1);
        let p = dot(&e0, &e1);
        e1.iter_mut().zip(&e0).for_each(|(x, y)| *x -= p * y);
        let n1 = dot(&e1, &e1).sqrt();
        e1.iter_mut().for_each(|x| *x /= n1);
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = e0[i] * e0[j] + e1[i] * e1[j];
            }
        }
        out
    }

    /// Frobenius distance between orthogonal projectors, divided by sqrt 2.
    pub fn subspace_distance(&self, other: &Self) -> f64 {
        let (p, q) = (self.projector(), other.projector());
        let s: f64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| (p[i][j] - q[i][j]).powi(2)).sum();
        (s / 2.0).sqrt()
    }

    /// Point of the plane with real coordinates `(x, y)` in its basis.
    pub fn point(&self, x: f64, y: f64) -> [Complex; 2] {
        let [v0, v1] = self.basis();
        [v0[0] * x + v1[0] * y, v0[1] * x + v1[1] * y]
    }
}

/// Matrices of the Weinstock normal form `P0 = R^2`, `Pj = (Aj + iI) R^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePairNormalForm {
    pub a1: RealMatrix2,
    pub a2: RealMatrix2,
}

/// Output of [`weinstock_normal_form`]: the C-linear map sending `p0` to
/// `R^2`, and the matrix `Aj` for each further plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeinstockForm {
    pub map: ComplexMatrix2,
    pub matrices: Vec<RealMatrix2>,
}

impl WeinstockForm {
    /// Plane `{Aj x + i x}` pulled back to the original coordinates.
    pub fn reconstruct(&self, j: usize) -> TotallyRealPlane {
        let back = self.map.inverse().expect("map is invertible");
        let m = back * ComplexMatrix2::shifted_by_i(&self.matrices[j]);
        TotallyRealPlane::span(m.column(0), m.column(1))
    }
}

pub fn weinstock_normal_form(p0: &TotallyRealPlane, others: &[TotallyRealPlane]) -> Result<WeinstockForm> {
    weinstock_normal_form_with(p0, others, &Config::default())
}

/// Maps `p0` to `R^2` and writes each image plane as `{A x + i x}` with
/// `A = Re(W) Im(W)^{-1}`, `W` the image basis.
pub fn weinstock_normal_form_with(
    p0: &TotallyRealPlane,
    others: &[TotallyRealPlane],
    cfg: &Config,
) -> Result<WeinstockForm> {
    p0.check_totally_real(cfg)?;
    let [v0, v1] = p0.basis();
    let map = ComplexMatrix2::from_columns(v0, v1)
        .inverse()
        .ok_or(Error::NotTotallyReal { det: 0.0 })?;
    let mut matrices = Vec::with_capacity(others.len());
    for plane in others {
        plane.check_totally_real(cfg)?;
        let [u0, u1] = plane.basis();
        let w = map * ComplexMatrix2::from_columns(u0, u1);
        let (re, im) = (w.re(), w.im());
        let n0 = (w.m[0][0].norm_sqr() + w.m[1][0].norm_sqr()).sqrt();
        let n1 = (w.m[0][1].norm_sqr() + w.m[1][1].norm_sqr()).sqrt();
        let rel = im.det().abs() / (n0 * n1);
        if !(rel >= cfg.transverse_det) {
            return Err(Error::NotTransverse { det: rel });
        }
        matrices.push(re * im.inverse().expect("nonsingular"));
    }
    Ok(WeinstockForm { map, matrices })
}

/// The three planes whose image under `(z, w) ↦ (z, p_t(z, w))` is the cubic
/// surface `w = p_t(z, z̄)`.
pub fn family_planes(t: f64) -> [TotallyRealPlane; 3] {
    let s3 = 3f64.sqrt();
    [
        TotallyRealPlane::graph(c64(0.0, 0.0), c64(1.0, 0.0)),
        TotallyRealPlane::graph(c64(-3.0, s3) / (2.0 * t), c64(-0.5, s3 / 2.0)),
        TotallyRealPlane::graph(c64(-3.0, -s3) / (2.0 * t), c64(-0.5, -s3 / 2.0)),
    ]
}

/// Weinstock matrices of [`family_planes`]; fails at `t = 1` where the planes
/// meet `R^2` along a line.
pub fn family_normal_form(t: f64) -> Result<PlanePairNormalForm> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive and finite, got {t}")));
    }
    let [p0, p1, p2] = family_planes(t);
    let w = weinstock_normal_form(&p0, &[p1, p2])?;
    Ok(PlanePairNormalForm { a1: w.matrices[0], a2: w.matrices[1] })
}

pub fn pairwise_reduction(a1: &RealMatrix2, a2: &RealMatrix2) -> Result<RealMatrix2> {
    pairwise_reduction_with(a1, a2, &Config::default())
}

/// `B = (A1 A2 + I)(A1 - A2)^{-1}`: the Weinstock matrix of `(P1, P2)` once
/// `P1` is mapped to `R^2`.
pub fn pairwise_reduction_with(a1: &RealMatrix2, a2: &RealMatrix2, cfg: &Config) -> Result<RealMatrix2> {
    if !(a1.is_finite() && a2.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    let diff = *a1 - *a2;
    let det = diff.det();
    if !(det.abs() >= cfg.transverse_det) {
        return Err(Error::NotTransverse { det: det.abs() });
    }
    Ok((*a1 * *a2 + RealMatrix2::identity()) * diff.inverse().expect("nonsingular"))
}

/// Result of [`simultaneous_normal_form`]: `T a T⁻¹ = diagonal`,
/// `T b T⁻¹ = symmetric` (equal off-diagonal entries).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimultaneousForm {
    pub diagonal: RealMatrix2,
    pub symmetric: RealMatrix2,
    pub conjugator: RealMatrix2,
    /// Rescaling applied after diagonalization.
    pub d: f64,
}

pub fn simultaneous_normal_form(a: &RealMatrix2, b: &RealMatrix2) -> Result<SimultaneousForm> {
    simultaneous_normal_form_with(a, b, &Config::default())
}

/// Diagonalizes `a` over R (eigenvalues ascending, eigenvectors with positive
/// dominant entry), then rescales by `diag(d, 1)` with `d = sqrt(b'21/b'12)`.
pub fn simultaneous_normal_form_with(a: &RealMatrix2, b: &RealMatrix2, cfg: &Config) -> Result<SimultaneousForm> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    let disc = a.discriminant();
    if !(disc > cfg.eigen_disc_min) {
        return Err(Error::EigenvalueDegenerate { discriminant: disc });
    }
    let dc = a.commutator(b).det();
    if !(dc > 0.0) {
        return Err(Error::CommutatorNotPositive { det_commutator: dc });
    }
    let spec = a.spectrum();
    let v0 = eigenvector(a, spec[0].re);
    let v1 = eigenvector(a, spec[1].re);
    let v = RealMatrix2::new(v0[0], v1[0], v0[1], v1[1]);
    let vinv = v.inverse().ok_or(Error::EigenvalueDegenerate { discriminant: disc })?;
    let bp = vinv * *b * v;
    let ratio = bp.m[1][0] / bp.m[0][1];
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::CommutatorNotPositive { det_commutator: dc });
    }
    let d = ratio.sqrt();
    let t = RealMatrix2::diag(d, 1.0) * vinv;
    let tinv = v * RealMatrix2::diag(1.0 / d, 1.0);
    let diagonal = t * *a * tinv;
    let mut symmetric = t * *b * tinv;
    // Exact symmetry and diagonality; the residuals are rounding-level.
    let q = 0.5 * (symmetric.m[0][1] + symmetric.m[1][0]);
    symmetric.m[0][1] = q;
    symmetric.m[1][0] = q;
    let diagonal = RealMatrix2::diag(diagonal.m[0][0], diagonal.m[1][1]);
    Ok(SimultaneousForm { diagonal, symmetric, conjugator: t, d })
}

/// Unit eigenvector for a real eigenvalue, dominant entry positive.
fn eigenvector(a: &RealMatrix2, lambda: f64) -> [f64; 2] {
    let [[p, q], [r, s]] = a.m;
    // Rows of (a - λI) are orthogonal to the eigenvector; use the larger row.
    let row0 = [p - lambda, q];
    let row1 = [r, s - lambda];
    let n0 = row0[0].hypot(row0[1]);
    let n1 = row1[0].hypot(row1[1]);
    let mut v = if n0 >= n1 { [-row0[1], row0[0]] } else { [-row1[1], row1[0]] };
    if n0 == 0.0 && n1 == 0.0 {
        v = [1.0, 0.0];
    }
    let n = v[0].hypot(v[1]);
    v = [v[0] / n, v[1] / n];
    let dominant = if v[0].abs() >= v[1].abs() { v[0] } else { v[1] };
    if dominant < 0.0 {
        v = [-v[0], -v[1]];
    }
    v
}

/// Coefficients of `a1 z²z̄ + a2 z z̄² + a3 z̄³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoefficients {
    pub a1: Complex,
    pub a2: Complex,
    pub a3: Complex,
}

impl CubicCoefficients {
    pub fn new(a1: Complex, a2: Complex, a3: Complex) -> Self {
        Self { a1, a2, a3 }
    }

    /// Coefficients of `p_t`.
    pub fn family(t: f64) -> Self {
        Self::new(c64(1.0, 0.0), c64(t, 0.0), c64(t * t / 3.0, 0.0))
    }

    /// `a3 w³ + a2 z w² + a1 z² w`.
    pub fn eval(&self, z: Complex, w: Complex) -> Complex {
        self.a3 * w * w * w + self.a2 * z * w * w + self.a1 * z * z * w
    }

    /// `|a2² - 3 a1 a3|`.
    pub fn factor_residual(&self) -> f64 {
        (self.a2 * self.a2 - self.a1 * self.a3 * 3.0).norm()
    }
}

pub fn factor_cubic_preimage(c: &CubicCoefficients) -> Result<[TotallyRealPlane; 3]> {
    factor_cubic_preimage_with(c, &Config::default())
}

/// When `a2² = 3 a1 a3` and `a3 ≠ 0`, the solutions of
/// `p(z, w) = p(z, z̄)` form three totally-real planes through 0.
pub fn factor_cubic_preimage_with(c: &CubicCoefficients, cfg: &Config) -> Result<[TotallyRealPlane; 3]> {
    if ![c.a1, c.a2, c.a3].iter().all(|&v| is_finite_c(v)) {
        return Err(Error::NonFinite("cubic coefficient"));
    }
    let residual = c.factor_residual();
    let scale = c.a2.norm_sqr().max((c.a1 * c.a3).norm()).max(1.0);
    if residual > cfg.factor_rel_tol * scale || c.a3.norm() <= cfg.factor_a3_min {
        return Err(Error::NotFactorable { residual });
    }
    let r = c.a2 / c.a3;
    let k = -1.0 / 3f64.sqrt();
    let omega = Complex::from_polar(1.0, 2.0 * PI / 3.0);
    Ok([
        TotallyRealPlane::graph(c64(0.0, 0.0), c64(1.0, 0.0)),
        TotallyRealPlane::graph(Complex::from_polar(k, -PI / 6.0) * r, omega),
        TotallyRealPlane::graph(Complex::from_polar(k, PI / 6.0) * r, omega.conj()),
    ])
}

/// Max of `|p(z, w) - p(z, z̄)|` over `samples` random points with `|z| ≤ 1`
/// on each plane.
pub fn verify_pullback(c: &CubicCoefficients, planes: &[TotallyRealPlane], samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for plane in planes {
        let (alpha, beta) = plane.to_graph().expect("plane is a graph over the z-axis");
        for _ in 0..samples {
            let r: f64 = rng.gen::<f64>().sqrt();
            let z = Complex::from_polar(r, rng.gen_range(0.0..2.0 * PI));
            let w = alpha * z + beta * z.conj();
            worst = worst.max((c.eval(z, w) - c.eval(z, z.conj())).norm());
        }
    }
    worst
}

/// Cube root of unity carried by branch `k`: `e^{2πik/3}`.
pub fn branch_unity(branch: usize) -> Complex {
    Complex::from_polar(1.0, 2.0 * PI * branch as f64 / 3.0)
}

/// `(1 + s)^{1/3} - 1` on the principal branch without cancellation for small `s`.
fn cbrt1p_minus_one(s: Complex) -> Complex {
    if s.norm() < 0.1 {
        let mut term = c64(1.0, 0.0);
        let mut sum = c64(0.0, 0.0);
        for k in 1..60 {
            term *= s * ((1.0 / 3.0 - (k - 1) as f64) / k as f64);
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (c64(1.0, 0.0) + s).cbrt() - 1.0
    }
}

/// Vertical offset `g_k(ζ)` such that `(ζ, P_k(ζ) + g_k(ζ))` lies over the
/// perturbed surface `w = p_t(z, z̄) + F(z)`, where `P_k` is the k-th family
/// plane. With `u = ζ + tζ̄` and `ω_k = e^{2πik/3}`,
/// `t g_k = ω_k u ((1 + 3tF/u³)^{1/3} - 1)`, principal cube root.
pub fn branch_lift(t: f64, branch: usize, f: &dyn Fn(Complex) -> Complex, zeta: Complex) -> Result<Complex> {
    if !(t.is_finite() && t > 0.0 && t != 1.0) {
        return Err(Error::InvalidParameter(format!("t must lie in (0,1)∪(1,∞), got {t}")));
    }
    if branch > 2 {
        return Err(Error::InvalidParameter(format!("branch must be 0, 1 or 2, got {branch}")));
    }
    if !is_finite_c(zeta) || zeta.norm() == 0.0 {
        return Err(Error::BranchUndefined("ζ must be a nonzero finite point".into()));
    }
    let u = zeta + zeta.conj() * t;
    if u.norm() == 0.0 {
        return Err(Error::BranchUndefined("ζ + tζ̄ vanishes".into()));
    }
    let fz = f(zeta);
    if !is_finite_c(fz) {
        return Err(Error::NonFinite("perturbation value"));
    }
    let s = fz * (3.0 * t) / (u * u * u);
    if !(s.norm() < 1.0) {
        return Err(Error::BranchUndefined(format!("|3tF/u³| = {} ≥ 1", s.norm())));
    }
    Ok(branch_unity(branch) * u * cbrt1p_minus_one(s) / t)
}
