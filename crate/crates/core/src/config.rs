//! Numeric tolerances shared by every operation.
//!
//! Each public operation that compares against a threshold has a `*_with`
//! variant taking a [`Config`]; the plain variant uses [`Config::default`].

use serde::{Deserialize, Serialize};

/// Tolerance record. Defaults are the values the library is validated against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Roots closer than this are merged into one cluster.
    pub root_cluster_radius: f64,
    /// Relative bound on derivatives that must vanish at a multiple root.
    pub root_derivative_tol: f64,
    /// Iteration cap for the simultaneous root iteration.
    pub root_max_iter: usize,
    /// Samples closer than this to 0 make a winding number undefined.
    pub winding_min_modulus: f64,
    /// Singularity threshold for the imaginary-part map in plane reductions.
    pub transverse_det: f64,
    /// Singularity threshold for the complex basis determinant of a plane.
    pub totally_real_det: f64,
    /// Relative residual admitted in the identity `a2^2 = 3 a1 a3`.
    pub factor_rel_tol: f64,
    /// Smallest admissible `|a3|` for cubic factorization.
    pub factor_a3_min: f64,
    /// `|det[A1,A2]|` must exceed this for membership in the parameter domain.
    pub omega_commutator: f64,
    /// Minimal eigenvalue separation for membership in the parameter domain.
    pub omega_spectral_sep: f64,
    /// Distance from `i` below which an eigenvalue counts as `i`.
    pub omega_imag_unit: f64,
    /// Minimal discriminant for a real-diagonalizable 2x2 matrix.
    pub eigen_disc_min: f64,
    /// Band width of the two-plane eigenvalue test.
    pub weinstock_tau: f64,
    /// Absolute tolerance used for the strict and non-strict inequalities of
    /// the three-plane criteria.
    pub criterion_tol: f64,
    /// Absolute tolerance when comparing a parameter with a band edge.
    pub band_tol: f64,
    /// Roots of the index polynomial closer than this to the unit circle make
    /// the index ill-conditioned.
    pub maslov_circle_tol: f64,
    /// Roots closer than this to the unit circle are treated as lying on it.
    pub maslov_isolated_tol: f64,
    /// Laplacian values at or above `-subharmonic_tol` count as nonnegative.
    pub subharmonic_tol: f64,
    /// Relative agreement demanded between symbolic and finite-difference Laplacians.
    pub fd_rel_tol: f64,
    /// Finite-difference step relative to the radius.
    pub fd_step_rel: f64,
    /// Residual at which a coincidence pair of the boundary curve is accepted.
    pub curve_residual: f64,
    /// Determinant below which the coincidence Jacobian is treated as singular.
    pub curve_jacobian_det: f64,
    /// Half-width of the modulus window that counts a root as lying on the circle.
    pub preimage_circle_tol: f64,
    /// Scale-free value bound `|P(u)|/|u|^d` under which a sample is in the zero fiber.
    pub kallin_zero_value: f64,
    /// Angular distance allowed between a zero-fiber sample and a declared null line.
    pub kallin_zero_dist: f64,
    /// Seed for every pseudo-random stream.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            root_cluster_radius: 1e-6,
            root_derivative_tol: 1e-6,
            root_max_iter: 200,
            winding_min_modulus: 1e-12,
            transverse_det: 1e-10,
            totally_real_det: 1e-10,
            factor_rel_tol: 1e-9,
            factor_a3_min: 1e-12,
            omega_commutator: 1e-10,
            omega_spectral_sep: 1e-8,
            omega_imag_unit: 1e-8,
            eigen_disc_min: 1e-10,
            weinstock_tau: 1e-9,
            criterion_tol: 1e-10,
            band_tol: 1e-12,
            maslov_circle_tol: 1e-6,
            maslov_isolated_tol: 1e-9,
            subharmonic_tol: 1e-9,
            fd_rel_tol: 1e-4,
            fd_step_rel: 1e-4,
            curve_residual: 1e-12,
            curve_jacobian_det: 1e-10,
            preimage_circle_tol: 1e-8,
            kallin_zero_value: 1e-9,
            kallin_zero_dist: 1e-6,
            seed: 42,
        }
    }
}
