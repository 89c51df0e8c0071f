//! Fixed inputs shared by the benchmarks in `benches/`.

use num_complex::Complex64;
use polyconvex::planes::{family_normal_form, PlanePairNormalForm};
use polyconvex::ComplexPoly;

/// Degree-6 polynomial with roots spread over six sectors, one of them double.
pub fn sextic() -> ComplexPoly {
    let mut roots: Vec<Complex64> = (0..5).map(|k| Complex64::from_polar(0.5 + 0.3 * k as f64, 1.1 * k as f64)).collect();
    roots.push(roots[0]);
    ComplexPoly::from_roots(&roots)
}

/// Normal forms of the preimage planes on an even grid over `[lo, hi]`.
pub fn family_grid(lo: f64, hi: f64, n: usize) -> Vec<PlanePairNormalForm> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64)
        .map(|t| family_normal_form(t).expect("t avoids the parabolic value"))
        .collect()
}
