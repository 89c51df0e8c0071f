//! Parallel classification sweeps over a grid in `t`.

use polyconvex::convexity::{classify_surface_with, FamilyClassification, Status, SurfaceKind};
use polyconvex::{Config, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Classifications on an increasing grid and the refined parameters at
/// which the status changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub entries: Vec<FamilyClassification>,
    pub boundaries: Vec<f64>,
}

/// Bisection stops once the bracket is this narrow.
const BISECT_WIDTH: f64 = 1e-11;
/// Boundaries closer than this are reported once.
const DEDUP: f64 = 1e-9;

/// `t_min + i·step` for `i = 0, 1, …` up to `t_max` (inclusive within rounding).
pub fn grid(t_min: f64, t_max: f64, step: f64) -> Vec<f64> {
    let n = ((t_max - t_min) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| t_min + i as f64 * step).collect()
}

fn status_at(t: f64, kind: SurfaceKind, cfg: &Config) -> Result<Status> {
    Ok(classify_surface_with(t, kind, cfg)?.verdict.status)
}

/// Narrows `[lo, hi]` around the first change away from `left`.
fn bisect(mut lo: f64, mut hi: f64, left: Status, kind: SurfaceKind, cfg: &Config) -> Result<f64> {
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if status_at(mid, kind, cfg)? == left {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn sweep(t_min: f64, t_max: f64, step: f64, kind: SurfaceKind, cfg: &Config) -> Result<SweepReport> {
    let ts = grid(t_min, t_max, step);
    let entries: Vec<FamilyClassification> =
        ts.par_iter().map(|&t| classify_surface_with(t, kind, cfg)).collect::<Result<_>>()?;
    let mut boundaries: Vec<f64> = entries
        .par_windows(2)
        .filter(|w| w[0].verdict.status != w[1].verdict.status)
        .map(|w| bisect(w[0].t, w[1].t, w[0].verdict.status, kind, cfg))
        .collect::<Result<_>>()?;
    boundaries.dedup_by(|b, a| (*b - *a).abs() <= DEDUP);
    Ok(SweepReport { entries, boundaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = grid(0.5, 1.3, 0.01);
        assert_eq!(g.len(), 81);
        assert!((g[80] - 1.3).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn boundaries_at_band_edges() {
        let r = sweep(0.5, 1.3, 0.01, SurfaceKind::ExactCubic, &Config::default()).unwrap();
        let want = [3f64.sqrt() / 2.0, 1.0, polyconvex::convexity::star_threshold()];
        assert_eq!(r.boundaries.len(), want.len(), "{:?}", r.boundaries);
        for (b, w) in r.boundaries.iter().zip(want) {
            assert!((b - w).abs() < 1e-9, "{b} vs {w}");
        }
    }
}
