//! Decision procedures: the two-plane eigenvalue test, the three-plane
//! sufficiency decider, and the band classification of the cubic family.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::maslov_index_algebraic_with;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::invariants::{beta, compute_invariants_with, lambda, theta, InvariantReport};
use crate::kernel::{HermitianPoly, RealMatrix2};
use crate::planes::{family_normal_form, pairwise_reduction_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    LocallyPolynomiallyConvex,
    NotLocallyPolynomiallyConvex,
    HullContainsBall,
    HullContainsDiscFamily,
    Unknown,
}

impl Status {
    pub fn is_decided(self) -> bool {
        self != Status::Unknown
    }
}

/// A witness entry: numeric margin, text note or flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Number(f64),
    Flag(bool),
    Text(String),
}

pub type Witness = BTreeMap<String, WitnessValue>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityVerdict {
    pub status: Status,
    /// Name of the deciding criterion; always set, also for `Unknown`.
    pub criterion: String,
    pub witness: Witness,
}

impl ConvexityVerdict {
    fn new(status: Status, criterion: impl Into<String>) -> Self {
        Self { status, criterion: criterion.into(), witness: Witness::new() }
    }

    fn with(mut self, key: &str, value: WitnessValue) -> Self {
        self.witness.insert(key.to_string(), value);
        self
    }

    fn num(self, key: &str, v: f64) -> Self {
        self.with(key, WitnessValue::Number(v))
    }

    fn text(self, key: &str, v: impl Into<String>) -> Self {
        self.with(key, WitnessValue::Text(v.into()))
    }
}

pub fn weinstock_pair_check(a: &RealMatrix2) -> ConvexityVerdict {
    weinstock_pair_check_with(a, &Config::default())
}

/// `R^2 ∪ (A + iI)R^2` fails to be locally polynomially convex exactly when
/// `A` has a purely imaginary eigenvalue of modulus > 1. Spectra at modulus 1
/// (within `τ`) are reported as `Unknown`.
pub fn weinstock_pair_check_with(a: &RealMatrix2, cfg: &Config) -> ConvexityVerdict {
    let tau = cfg.weinstock_tau;
    let (tr, det) = (a.trace(), a.det());
    let imaginary = tr.abs() <= tau && det > 0.0;
    let base = |s, c| ConvexityVerdict::new(s, c).num("trace", tr).num("det", det);
    if imaginary && det > 1.0 + tau {
        base(Status::NotLocallyPolynomiallyConvex, "pair-imaginary-spectrum").num("eigenvalue_modulus", det.sqrt())
    } else if tr.abs() <= tau && (det - 1.0).abs() <= tau {
        base(Status::Unknown, "pair-unit-modulus-edge").num("eigenvalue_modulus", det.max(0.0).sqrt())
    } else {
        base(Status::LocallyPolynomiallyConvex, "pair-spectrum")
    }
}

/// Signed slack of `x·y > 0`: positive iff both factors exceed the
/// tolerance in magnitude with a common sign.
fn product_positive(x: f64, y: f64, tol: f64) -> f64 {
    let s = if x * y > 0.0 { 1.0 } else { -1.0 };
    s * x.abs().min(y.abs()) - tol
}

/// Margins of every sufficient three-plane criterion for one role assignment
/// (`a` plays `A1`). Positive margin means the criterion applies.
struct Criteria<'a> {
    a: &'a RealMatrix2,
    b: &'a RealMatrix2,
    inv: InvariantReport,
    cfg: &'a Config,
}

impl<'a> Criteria<'a> {
    fn new(a: &'a RealMatrix2, b: &'a RealMatrix2, cfg: &'a Config) -> Self {
        Self { a, b, inv: compute_invariants_with(a, b, cfg), cfg }
    }

    fn omega(&self) -> f64 {
        let i = crate::kernel::Complex::new(0.0, 1.0);
        let d_i = |s: &[crate::kernel::Complex; 2]| s.iter().map(|l| (l - i).norm()).fold(f64::INFINITY, f64::min);
        let cfg = self.cfg;
        (self.inv.det_commutator.abs() - cfg.omega_commutator)
            .min((self.inv.spectrum_a1[1] - self.inv.spectrum_a1[0]).norm() - cfg.omega_spectral_sep)
            .min(d_i(&self.inv.spectrum_a1) - cfg.omega_imag_unit)
            .min(d_i(&self.inv.spectrum_a2) - cfg.omega_imag_unit)
    }

    fn real_spectrum(m: &RealMatrix2, tol: f64) -> f64 {
        m.discriminant() + tol
    }

    fn complex_spectrum(m: &RealMatrix2, tol: f64) -> f64 {
        -m.discriminant() - tol
    }

    /// Both spectra real; either both `det Aj det[A1,A2] > 0`, or for some `j`
    /// `det Aj det[A1,A2] < 0` and `det Aj Θ(Aj, Aj^c) < 0`.
    fn real_spectra(&self) -> (f64, f64) {
        let tol = self.cfg.criterion_tol;
        let inv = &self.inv;
        let gate = self
            .omega()
            .min(Self::real_spectrum(self.a, tol))
            .min(Self::real_spectrum(self.b, tol));
        let dc = inv.det_commutator;
        let same = product_positive(inv.det_a1, dc, tol).min(product_positive(inv.det_a2, dc, tol));
        let mixed_1 = product_positive(-inv.det_a1, dc, tol).min(product_positive(-inv.det_a1, inv.theta_12, tol));
        let mixed_2 = product_positive(-inv.det_a2, dc, tol).min(product_positive(-inv.det_a2, inv.theta_21, tol));
        (gate.min(same), gate.min(mixed_1.max(mixed_2)))
    }

    /// `A1` real spectrum, `A2` non-real; either `det A1 det[A1,A2] < 0` and
    /// `det A1 Θ(A1, A2) < 0`, or `Θ(A1, A2) < Λ`.
    fn mixed_spectra(&self) -> f64 {
        let tol = self.cfg.criterion_tol;
        let inv = &self.inv;
        let gate = self
            .omega()
            .min(Self::real_spectrum(self.a, tol))
            .min(Self::complex_spectrum(self.b, tol));
        let sign_branch = product_positive(-inv.det_a1, inv.det_commutator, tol)
            .min(product_positive(-inv.det_a1, inv.theta_12, tol));
        let theta_branch = inv.lambda_ - inv.theta_12 - tol;
        gate.min(sign_branch.max(theta_branch))
    }

    /// Both spectra non-real and `Θ(Aj, Aj^c) < Λ` for some `j`.
    fn complex_spectra(&self) -> f64 {
        let tol = self.cfg.criterion_tol;
        let inv = &self.inv;
        self.omega()
            .min(Self::complex_spectrum(self.a, tol))
            .min(Self::complex_spectrum(self.b, tol))
            .min((inv.lambda_ - inv.theta_12).max(inv.lambda_ - inv.theta_21) - tol)
    }

    /// `det A1 = 0`, `det A2 ≥ 0`, `det[A1,A2] > 0`.
    fn singular_first(&self) -> f64 {
        let tol = self.cfg.criterion_tol;
        let inv = &self.inv;
        (tol - inv.det_a1.abs()).min(inv.det_a2 + tol).min(inv.det_commutator - tol)
    }

    /// `-1 ≤ det Aj < 0` for both `j`, `det[A1,A2] > 0`.
    fn bounded_negative(&self) -> f64 {
        let tol = self.cfg.criterion_tol;
        let inv = &self.inv;
        (-inv.det_a1 - tol)
            .min(-inv.det_a2 - tol)
            .min(1.0 + tol - inv.det_a1.abs())
            .min(1.0 + tol - inv.det_a2.abs())
            .min(inv.det_commutator - tol)
    }

    /// `det[A1,A2] > 0`, `det Aj < 0`, `β > min{det A2 (Tr A1)², det A1 (Tr A2)²}`.
    fn product_separation(&self) -> f64 {
        let tol = self.cfg.criterion_tol;
        let inv = &self.inv;
        let bound = (inv.det_a2 * inv.tr_a1.powi(2)).min(inv.det_a1 * inv.tr_a2.powi(2));
        (inv.det_commutator - tol)
            .min(-inv.det_a1 - tol)
            .min(-inv.det_a2 - tol)
            .min(inv.beta_ - bound - tol)
    }
}

/// Criterion tags in trial order.
pub const CRITERIA: [&str; 7] = [
    "real-spectra-same-sign",
    "real-spectra-theta-sign",
    "mixed-spectra",
    "complex-spectra-theta-lambda",
    "singular-sum-of-squares",
    "bounded-negative-sum-of-squares",
    "negative-product-zw",
];

pub fn three_plane_decider(a1: &RealMatrix2, a2: &RealMatrix2) -> ConvexityVerdict {
    three_plane_decider_with(a1, a2, &Config::default())
}

/// Local polynomial convexity at 0 of `R^2 ∪ (A1 + iI)R^2 ∪ (A2 + iI)R^2`.
/// Pairwise gate first, then each sufficient criterion under both role
/// assignments; `Unknown` carries the margin of every criterion.
pub fn three_plane_decider_with(a1: &RealMatrix2, a2: &RealMatrix2, cfg: &Config) -> ConvexityVerdict {
    if !(a1.is_finite() && a2.is_finite()) {
        return ConvexityVerdict::new(Status::Unknown, "non-finite-input");
    }
    let b = match pairwise_reduction_with(a1, a2, cfg) {
        Ok(b) => b,
        Err(e) => {
            return ConvexityVerdict::new(Status::Unknown, "pairwise").text("reason", e.to_string());
        }
    };
    let pairs = [("p0_p1", *a1), ("p0_p2", *a2), ("p1_p2", b)];
    let mut undecided = None;
    for (name, m) in pairs {
        let v = weinstock_pair_check_with(&m, cfg);
        match v.status {
            Status::NotLocallyPolynomiallyConvex => {
                let modulus = match v.witness.get("eigenvalue_modulus") {
                    Some(WitnessValue::Number(x)) => *x,
                    _ => f64::NAN,
                };
                return ConvexityVerdict::new(Status::NotLocallyPolynomiallyConvex, "pairwise")
                    .text("failing_pair", name)
                    .num("eigenvalue_modulus", modulus);
            }
            Status::Unknown => undecided = undecided.or(Some(name)),
            _ => {}
        }
    }
    if let Some(name) = undecided {
        return ConvexityVerdict::new(Status::Unknown, "pairwise").text("edge_pair", name);
    }

    let fwd = Criteria::new(a1, a2, cfg);
    let rev = Criteria::new(a2, a1, cfg);
    let (same_f, sign_f) = fwd.real_spectra();
    let (same_r, sign_r) = rev.real_spectra();
    let trials: [(&str, f64, f64); 7] = [
        (CRITERIA[0], same_f, same_r),
        (CRITERIA[1], sign_f, sign_r),
        (CRITERIA[2], fwd.mixed_spectra(), rev.mixed_spectra()),
        (CRITERIA[3], fwd.complex_spectra(), rev.complex_spectra()),
        (CRITERIA[4], fwd.singular_first(), rev.singular_first()),
        (CRITERIA[5], fwd.bounded_negative(), rev.bounded_negative()),
        (CRITERIA[6], fwd.product_separation(), rev.product_separation()),
    ];
    for (tag, m_fwd, m_rev) in trials {
        if m_fwd > 0.0 {
            return ConvexityVerdict::new(Status::LocallyPolynomiallyConvex, tag)
                .text("roles", "given")
                .num("margin", m_fwd);
        }
        if m_rev > 0.0 {
            return ConvexityVerdict::new(Status::LocallyPolynomiallyConvex, tag)
                .text("roles", "swapped")
                .num("margin", m_rev);
        }
    }
    let mut v = ConvexityVerdict::new(Status::Unknown, "no-sufficient-criterion");
    for (tag, m_fwd, m_rev) in trials {
        v = v.num(tag, m_fwd.max(m_rev));
    }
    v
}

/// Which cubic surface is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    /// `w = p_t(z, z̄)`.
    ExactCubic,
    /// `w = p_t(z, z̄) + o(|z|³)`.
    Perturbed,
}

/// Band edges of the family classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub sqrt3_over_2: f64,
    pub star: f64,
}

impl Thresholds {
    pub fn new() -> Self {
        Self { sqrt3_over_2: 3f64.sqrt() / 2.0, star: star_threshold() }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::new()
    }
}

/// `sqrt(15 - sqrt 33) / (2 sqrt 2)`, the root of `4t⁴ - 15t² + 12` above 1.
pub fn star_threshold() -> f64 {
    (15.0 - 33f64.sqrt()).sqrt() / (2.0 * 2f64.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyClassification {
    pub t: f64,
    pub surface_kind: SurfaceKind,
    pub verdict: ConvexityVerdict,
    /// `None` where the index is undefined (parabolic point, `t = 1`).
    pub maslov_index: Option<i64>,
    pub thresholds: Thresholds,
}

pub fn classify_cubic_surface(t: f64) -> Result<FamilyClassification> {
    classify_surface_with(t, SurfaceKind::ExactCubic, &Config::default())
}

pub fn classify_perturbed_surface(t: f64) -> Result<FamilyClassification> {
    classify_surface_with(t, SurfaceKind::Perturbed, &Config::default())
}

/// Band classification in `t`. Above the threshold the three-plane decider
/// is run on the preimage planes and its criterion is attached as corroboration.
pub fn classify_surface_with(t: f64, kind: SurfaceKind, cfg: &Config) -> Result<FamilyClassification> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive and finite, got {t}")));
    }
    let th = Thresholds::new();
    let tol = cfg.band_tol;
    let verdict = if t < th.sqrt3_over_2 - tol {
        ConvexityVerdict::new(Status::HullContainsBall, "elliptic-two-preimages")
            .num("band_upper", th.sqrt3_over_2)
    } else if t < 1.0 - tol {
        ConvexityVerdict::new(Status::HullContainsDiscFamily, "elliptic-four-preimages")
            .num("band_lower", th.sqrt3_over_2)
            .num("band_upper", 1.0)
    } else if (t - 1.0).abs() <= tol {
        match kind {
            SurfaceKind::ExactCubic => {
                ConvexityVerdict::new(Status::LocallyPolynomiallyConvex, "parabolic-linear-separation")
            }
            SurfaceKind::Perturbed => ConvexityVerdict::new(Status::Unknown, "parabolic-perturbation-open"),
        }
    } else if t < th.star - tol {
        ConvexityVerdict::new(Status::Unknown, "hyperbolic-below-threshold")
            .num("distance_to_threshold", th.star - t)
    } else {
        let tag = match kind {
            SurfaceKind::ExactCubic => "hyperbolic-three-plane-preimage",
            SurfaceKind::Perturbed => "hyperbolic-perturbed-branches",
        };
        let mut v = ConvexityVerdict::new(Status::LocallyPolynomiallyConvex, tag);
        if (t - th.star).abs() <= tol {
            v = v.text(
                "endpoint",
                "t equals the threshold; included although the sharp statement is strict",
            );
        }
        v
    };
    let verdict = if t > 1.0 + tol { corroborate(verdict, t, cfg) } else { verdict };
    let p = HermitianPoly::cubic_family(t);
    let maslov_index = maslov_index_algebraic_with(&p, cfg).ok();
    Ok(FamilyClassification { t, surface_kind: kind, verdict, maslov_index, thresholds: th })
}

fn corroborate(v: ConvexityVerdict, t: f64, cfg: &Config) -> ConvexityVerdict {
    match family_normal_form(t) {
        Ok(nf) => {
            let d = three_plane_decider_with(&nf.a1, &nf.a2, cfg);
            v.text("decider_criterion", d.criterion)
                .text("decider_status", format!("{:?}", d.status))
        }
        Err(e) => v.text("decider_error", e.to_string()),
    }
}

/// Bishop-type of the quadratic part `(z + t z̄)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrType {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// `t = 2γ`, classified elliptic (`t < 1`), parabolic (`t = 1`) or hyperbolic.
pub fn bishop_t(gamma: f64) -> Result<(f64, CrType)> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be nonnegative, got {gamma}")));
    }
    let t = 2.0 * gamma;
    let tol = Config::default().band_tol;
    let kind = if (t - 1.0).abs() <= tol {
        CrType::Parabolic
    } else if t < 1.0 {
        CrType::Elliptic
    } else {
        CrType::Hyperbolic
    };
    Ok((t, kind))
}

#[allow(dead_code)]
fn _symmetric_helpers(a: &RealMatrix2, b: &RealMatrix2) -> (f64, f64, f64) {
    (theta(a, b), lambda(a, b), beta(a, b))
}
