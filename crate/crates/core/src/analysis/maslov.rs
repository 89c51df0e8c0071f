use crate::config::Config;
use crate::error::{Error, Result};
use crate::kernel::{find_roots_with, sample_circle, winding_number_with, HermitianPoly};

pub fn maslov_index_algebraic(p: &HermitianPoly) -> Result<i64> {
    maslov_index_algebraic_with(p, &Config::default())
}

/// `2·#{roots of q in the unit disc} - (k - 1)` with `q(z) = ∂p/∂z̄(z, 1)`.
///
/// Since `∂p/∂z̄(r e^{iθ}) = r^{k-1} e^{-i(k-1)θ} q(e^{2iθ})`, a root of `q` on
/// the circle is a ray of zeros of `∂p/∂z̄`, so the singularity is not isolated.
pub fn maslov_index_algebraic_with(p: &HermitianPoly, cfg: &Config) -> Result<i64> {
    if !p.is_homogeneous() {
        return Err(Error::DegenerateInput("index polynomial must be homogeneous".into()));
    }
    let q = p.wirtinger_dbar().restrict_conj_one();
    if q.is_zero() {
        return Err(Error::DegenerateInput("∂p/∂z̄ vanishes identically".into()));
    }
    let roots = find_roots_with(&q, cfg)?;
    for r in &roots.roots {
        let distance = (r.location.norm() - 1.0).abs();
        if distance <= cfg.maslov_isolated_tol {
            return Err(Error::NotIsolatedSingularity { distance });
        }
        if distance <= cfg.maslov_circle_tol {
            return Err(Error::RootOnCircle { distance });
        }
    }
    let inside = roots.count_where(|z| z.norm() < 1.0) as i64;
    Ok(2 * inside - (p.degree() as i64 - 1))
}

pub fn maslov_index_winding(p: &HermitianPoly, radius: f64, samples: usize) -> Result<i64> {
    maslov_index_winding_with(p, radius, samples, &Config::default())
}

/// Winding number of `θ ↦ ∂p/∂z̄(r e^{iθ})`.
pub fn maslov_index_winding_with(p: &HermitianPoly, radius: f64, samples: usize, cfg: &Config) -> Result<i64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    if samples < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples, got {samples}")));
    }
    let dbar = p.wirtinger_dbar();
    winding_number_with(&sample_circle(samples, radius, |z| dbar.eval(z)), cfg)
}
