use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::kernel::{Complex, HermitianPoly, LaurentExpr};

/// `∂²φ/∂z∂z̄` for `φ = Re(p / z^{j-1}) = (p/z^{j-1} + conj(p)/z̄^{j-1}) / 2`.
/// This is a quarter of the Euclidean Laplacian.
pub fn laplacian_symbolic(p: &HermitianPoly, j: u32) -> LaurentExpr {
    let shifted = p.to_laurent().shift(-(j as i32 - 1), 0);
    let half = Complex::new(0.5, 0.0);
    shifted.add(&shifted.conj()).scale(half).dz_dzbar()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubharmonicityReport {
    pub laplacian: LaurentExpr,
    pub min_on_annulus: f64,
    pub subharmonic: bool,
    pub nowhere_harmonic: bool,
    /// (number of radii, number of angles).
    pub grid: (usize, usize),
    /// Largest `|Im|` of the symbolic Laplacian on the grid.
    pub max_imaginary: f64,
    /// Worst relative disagreement with the five-point stencil.
    pub fd_max_rel_error: f64,
    pub fd_points: usize,
    pub fd_agrees: bool,
}

pub fn subharmonicity_check(p: &HermitianPoly, j: u32, radii: &[f64], angles: usize) -> Result<SubharmonicityReport> {
    subharmonicity_check_with(p, j, radii, angles, &Config::default())
}

/// Width of the angular windows used for the nowhere-harmonic test.
const WINDOW: f64 = PI / 18.0;
const FD_POINTS: usize = 100;

pub fn subharmonicity_check_with(
    p: &HermitianPoly,
    j: u32,
    radii: &[f64],
    angles: usize,
    cfg: &Config,
) -> Result<SubharmonicityReport> {
    if j < 1 {
        return Err(Error::InvalidParameter("j must be at least 1".into()));
    }
    if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidParameter("radii must be positive and finite".into()));
    }
    if angles == 0 {
        return Err(Error::InvalidParameter("angles must be positive".into()));
    }
    let lap = laplacian_symbolic(p, j);
    let windows = (2.0 * PI / WINDOW).round() as usize;
    let mut min = f64::INFINITY;
    let mut max_imaginary: f64 = 0.0;
    let mut nowhere_harmonic = true;
    for &r in radii {
        let mut window_max = vec![f64::NEG_INFINITY; windows];
        let grid = (0..angles).map(|k| 2.0 * PI * k as f64 / angles as f64);
        // Window midpoints keep every window populated on coarse grids.
        let mids = (0..windows).map(|w| (w as f64 + 0.5) * WINDOW);
        for (idx, theta) in grid.map(|th| (true, th)).chain(mids.map(|th| (false, th))) {
            let v = lap.eval(Complex::from_polar(r, theta));
            max_imaginary = max_imaginary.max(v.im.abs());
            if idx {
                min = min.min(v.re);
            }
            let w = ((theta / WINDOW) as usize).min(windows - 1);
            window_max[w] = window_max[w].max(v.re);
        }
        nowhere_harmonic &= window_max.iter().all(|&m| m > cfg.subharmonic_tol);
    }

    let phi = |z: Complex| (p.eval(z) / z.powi(j as i32 - 1)).re;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..FD_POINTS {
        let r = radii[rng.gen_range(0..radii.len())];
        let theta = 2.0 * PI * rng.gen_range(0..angles) as f64 / angles as f64;
        let z = Complex::from_polar(r, theta);
        let h = cfg.fd_step_rel * r;
        let (dx, dy) = (Complex::new(h, 0.0), Complex::new(0.0, h));
        let fd = (phi(z + dx) + phi(z - dx) + phi(z + dy) + phi(z - dy) - 4.0 * phi(z)) / (h * h) / 4.0;
        let sym = lap.eval(z).re;
        worst = worst.max((fd - sym).abs() / sym.abs().max(1.0));
    }
    Ok(SubharmonicityReport {
        laplacian: lap,
        min_on_annulus: min,
        subharmonic: min >= -cfg.subharmonic_tol,
        nowhere_harmonic,
        grid: (radii.len(), angles),
        max_imaginary,
        fd_max_rel_error: worst,
        fd_points: FD_POINTS,
        fd_agrees: worst <= cfg.fd_rel_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(m: u32, n: u32) -> HermitianPoly {
        HermitianPoly::from_terms([((m, n), Complex::new(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn family_closed_form() {
        let t = 0.7;
        let lap = laplacian_symbolic(&HermitianPoly::cubic_family(t), 2);
        for z in [Complex::new(0.3, 0.4), Complex::new(-1.2, 0.1), Complex::new(0.0, 2.0)] {
            let want = 1.0 - t * t * (z * z / (z.conj() * z.conj())).re;
            assert!((lap.eval(z) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn trivial_cases() {
        assert!(laplacian_symbolic(&mono(3, 0), 1).is_zero());
        let lap = laplacian_symbolic(&mono(1, 1), 1);
        assert_eq!(lap.terms().len(), 1);
        assert_eq!(lap.terms()[&(0, 0)], Complex::new(1.0, 0.0));
    }

    #[test]
    fn family_verdicts() {
        let radii = [0.5, 1.0];
        let r = subharmonicity_check(&HermitianPoly::cubic_family(0.9), 2, &radii, 360).unwrap();
        assert!(r.subharmonic && r.nowhere_harmonic && r.fd_agrees);
        assert!((r.min_on_annulus - (1.0 - 0.81)).abs() < 1e-9);
        let r = subharmonicity_check(&HermitianPoly::cubic_family(1.5), 2, &radii, 360).unwrap();
        assert!(!r.subharmonic);
        let r = subharmonicity_check(&mono(2, 0), 1, &radii, 360).unwrap();
        assert!(r.subharmonic && !r.nowhere_harmonic);
    }
}
