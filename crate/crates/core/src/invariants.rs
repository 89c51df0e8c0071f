//! Similarity invariants of a matrix pair `(A1, A2)` and membership in the
//! parameter domain Ω.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::kernel::{Complex, RealMatrix2};

/// Invariants of `(A1, A2)`. Field names are part of the JSON schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub det_a1: f64,
    pub det_a2: f64,
    pub tr_a1: f64,
    pub tr_a2: f64,
    pub tr_a1a2: f64,
    pub det_a1a2: f64,
    pub det_commutator: f64,
    pub theta_12: f64,
    pub theta_21: f64,
    pub lambda_: f64,
    pub beta_: f64,
    pub spectrum_a1: [Complex; 2],
    pub spectrum_a2: [Complex; 2],
    pub in_omega: bool,
}

/// `Θ(A, B) = det A (Tr B)² + Tr(AB) (Tr(AB) - Tr A Tr B)`.
pub fn theta(a: &RealMatrix2, b: &RealMatrix2) -> f64 {
    let tab = (*a * *b).trace();
    a.det() * b.trace().powi(2) + tab * (tab - a.trace() * b.trace())
}

/// `Λ(A, B) = 4 det(AB) - (Tr A Tr B)² / 4`.
pub fn lambda(a: &RealMatrix2, b: &RealMatrix2) -> f64 {
    4.0 * (*a * *b).det() - 0.25 * (a.trace() * b.trace()).powi(2)
}

/// `β(A, B) = Λ(A, B) - Tr(AB) (Tr(AB) - Tr A Tr B)`; symmetric in its arguments.
pub fn beta(a: &RealMatrix2, b: &RealMatrix2) -> f64 {
    let tab = (*a * *b).trace();
    lambda(a, b) - tab * (tab - a.trace() * b.trace())
}

pub fn compute_invariants(a1: &RealMatrix2, a2: &RealMatrix2) -> InvariantReport {
    compute_invariants_with(a1, a2, &Config::default())
}

pub fn compute_invariants_with(a1: &RealMatrix2, a2: &RealMatrix2, cfg: &Config) -> InvariantReport {
    let prod = *a1 * *a2;
    let (tr1, tr2, tr12) = (a1.trace(), a2.trace(), prod.trace());
    let det12 = prod.det();
    let lambda_ = 4.0 * det12 - 0.25 * (tr1 * tr2).powi(2);
    let beta_ = lambda_ - tr12 * (tr12 - tr1 * tr2);
    let spectrum_a1 = a1.spectrum();
    let spectrum_a2 = a2.spectrum();
    let det_commutator = a1.commutator(a2).det();
    let i = Complex::new(0.0, 1.0);
    let avoids_i = |s: &[Complex; 2]| s.iter().all(|l| (l - i).norm() > cfg.omega_imag_unit);
    let in_omega = det_commutator.abs() > cfg.omega_commutator
        && (spectrum_a1[1] - spectrum_a1[0]).norm() > cfg.omega_spectral_sep
        && avoids_i(&spectrum_a1)
        && avoids_i(&spectrum_a2);
    InvariantReport {
        det_a1: a1.det(),
        det_a2: a2.det(),
        tr_a1: tr1,
        tr_a2: tr2,
        tr_a1a2: tr12,
        det_a1a2: det12,
        det_commutator,
        theta_12: theta(a1, a2),
        theta_21: theta(a2, a1),
        lambda_,
        beta_,
        spectrum_a1,
        spectrum_a2,
        in_omega,
    }
}

/// Both sides of the normal-form expansion of β, plus the two forms of the
/// third three-plane hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaIdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `β - det A2 (Tr A1)²`.
    pub beta_margin: f64,
    /// `β > det A2 (Tr A1)²`.
    pub beta_condition: bool,
    /// `q² > (s1 + s2)² / 4`.
    pub entry_condition: bool,
}

impl BetaIdentityCheck {
    /// The expansion holds to relative 1e-10, and the two conditions agree
    /// unless the β margin is at rounding level (as when `λ1 = λ2`).
    pub fn consistent(&self) -> bool {
        let scale = self.lhs.abs().max(self.rhs.abs()).max(1.0);
        (self.lhs - self.rhs).abs() <= 1e-10 * scale
            && (self.beta_condition == self.entry_condition || self.beta_margin.abs() <= 1e-10 * scale)
    }
}

/// For `A1 = diag(λ1, λ2)` and `A2 = [[s1, q], [q, s2]]`:
/// `β = 4λ1λ2(s1s2 - q²) - (λ1 - λ2)²(s1 - s2)²/4`, and
/// `β - det A2 (Tr A1)² = (λ1 - λ2)² (q² - (s1 + s2)²/4)`.
pub fn beta_normalform_identity_check(lambda1: f64, lambda2: f64, s1: f64, s2: f64, q: f64) -> BetaIdentityCheck {
    let a1 = RealMatrix2::diag(lambda1, lambda2);
    let a2 = RealMatrix2::new(s1, q, q, s2);
    let lhs = beta(&a1, &a2);
    let rhs = 4.0 * lambda1 * lambda2 * (s1 * s2 - q * q) - 0.25 * (lambda1 - lambda2).powi(2) * (s1 - s2).powi(2);
    let beta_margin = lhs - a2.det() * a1.trace().powi(2);
    BetaIdentityCheck {
        lhs,
        rhs,
        beta_margin,
        beta_condition: beta_margin > 0.0,
        entry_condition: q * q > 0.25 * (s1 + s2).powi(2),
    }
}
