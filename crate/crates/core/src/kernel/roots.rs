use serde::{Deserialize, Serialize};

use super::poly::ComplexPoly;
use super::Complex;
use crate::config::Config;
use crate::error::{Error, Result};

/// A root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub location: Complex,
    pub multiplicity: usize,
}

/// All roots of a polynomial; `residual` is `max |q(root)|` after polishing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub residual: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Sum of multiplicities of roots satisfying `pred`.
    pub fn count_where(&self, pred: impl Fn(Complex) -> bool) -> usize {
        self.roots.iter().filter(|r| pred(r.location)).map(|r| r.multiplicity).sum()
    }
}

pub fn find_roots(q: &ComplexPoly) -> Result<RootSet> {
    find_roots_with(q, &Config::default())
}

/// Roots with multiplicity by simultaneous (Aberth–Ehrlich) iteration,
/// followed by clustering and per-cluster polishing.
pub fn find_roots_with(q: &ComplexPoly, cfg: &Config) -> Result<RootSet> {
    if !q.is_finite() {
        return Err(Error::NonFinite("polynomial coefficient"));
    }
    if q.is_zero() {
        return Err(Error::DegenerateInput("polynomial is identically zero".into()));
    }
    let q = ComplexPoly::new(q.coeffs.clone());
    let zeros_at_origin = q.coeffs.iter().take_while(|c| **c == Complex::new(0.0, 0.0)).count();
    let reduced = ComplexPoly::new(q.coeffs[zeros_at_origin..].to_vec());

    let mut roots = Vec::new();
    if zeros_at_origin > 0 {
        roots.push(Root { location: Complex::new(0.0, 0.0), multiplicity: zeros_at_origin });
    }
    if reduced.degree() > 0 {
        let approx = aberth(&reduced, cfg.root_max_iter);
        roots.extend(cluster(&reduced, approx, cfg));
    }
    let residual = roots.iter().map(|r| q.eval(r.location).norm()).fold(0.0, f64::max);
    Ok(RootSet { roots, residual })
}

fn aberth(p: &ComplexPoly, max_iter: usize) -> Vec<Complex> {
    let n = p.degree();
    let lead = p.coeffs[n];
    if n == 1 {
        return vec![-p.coeffs[0] / lead];
    }
    let dp = p.derivative();
    // Initial circle: geometric mean of |roots| = |c0/cn|^(1/n), kept away from 0.
    let radius = (p.coeffs[0] / lead).norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| Complex::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let pv = p.eval(z[k]);
            if pv == Complex::new(0.0, 0.0) {
                done[k] = true;
                continue;
            }
            let ratio = pv / dp.eval(z[k]);
            let repulsion: Complex = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == Complex::new(0.0, 0.0) {
                        Complex::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let mut step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                step = ratio;
            }
            if !step.re.is_finite() || !step.im.is_finite() {
                // Derivative vanished exactly; nudge off the critical point.
                step = Complex::new(1e-8 * radius, 1e-8 * radius);
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Groups approximations of one multiple root. Single-linkage within the
/// clustering radius; nearby groups are merged as well when the derivatives up
/// to the combined multiplicity minus one vanish at their centroid.
fn cluster(p: &ComplexPoly, approx: Vec<Complex>, cfg: &Config) -> Vec<Root> {
    let n = approx.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        let mut c = i;
        while g[c] != r {
            let next = g[c];
            g[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (approx[i] - approx[j]).norm() <= cfg.root_cluster_radius {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a] = b;
            }
        }
    }
    // Wider merge: approximations of a root of multiplicity m spread like eps^(1/m).
    let wide = 1e-3;
    loop {
        let mut merged = false;
        let reps = representatives(&mut group, &approx, find);
        'outer: for a in 0..reps.len() {
            for b in (a + 1)..reps.len() {
                let (ca, ma) = (reps[a].1, reps[a].2);
                let (cb, mb) = (reps[b].1, reps[b].2);
                let scale = 1.0 + ca.norm().max(cb.norm());
                if (ca - cb).norm() > wide * scale {
                    continue;
                }
                let m = ma + mb;
                let centroid = (ca * ma as f64 + cb * mb as f64) / m as f64;
                if derivatives_vanish(p, centroid, m, cfg.root_derivative_tol) {
                    let (ra, rb) = (find(&mut group, reps[a].0), find(&mut group, reps[b].0));
                    group[ra] = rb;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    let reps = representatives(&mut group, &approx, find);
    reps.into_iter()
        .map(|(_, centroid, m)| Root { location: polish(p, centroid, m), multiplicity: m })
        .collect()
}

fn representatives(
    group: &mut [usize],
    approx: &[Complex],
    find: fn(&mut [usize], usize) -> usize,
) -> Vec<(usize, Complex, usize)> {
    let mut acc: Vec<(usize, Complex, usize)> = Vec::new();
    for (i, &z) in approx.iter().enumerate() {
        let r = find(group, i);
        match acc.iter_mut().find(|(root, _, _)| *root == r) {
            Some(e) => {
                e.1 += z;
                e.2 += 1;
            }
            None => acc.push((r, z, 1)),
        }
    }
    for e in &mut acc {
        e.1 /= e.2 as f64;
    }
    acc
}

/// `|q^(i)(z)| ≤ tol · Σ|c_n| n!/(n-i)! |z|^(n-i)` for every `i < m`.
fn derivatives_vanish(p: &ComplexPoly, z: Complex, m: usize, tol: f64) -> bool {
    let mut d = p.clone();
    for _ in 0..m {
        if d.eval(z).norm() > tol * d.eval_scale(z).max(f64::MIN_POSITIVE) {
            return false;
        }
        d = d.derivative();
    }
    true
}

/// Newton on `q^(m-1)`, whose root is simple at a root of multiplicity `m`.
fn polish(p: &ComplexPoly, z0: Complex, m: usize) -> Complex {
    let mut f = p.clone();
    for _ in 1..m {
        f = f.derivative();
    }
    let df = f.derivative();
    let mut z = z0;
    // Ranked by |q^(m-1)|: q itself is flat near a multiple root.
    let mut best = (f.eval(z).norm(), z);
    for _ in 0..20 {
        let d = df.eval(z);
        if d == Complex::new(0.0, 0.0) {
            break;
        }
        let step = f.eval(z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        let r = f.eval(z).norm();
        if r < best.0 {
            best = (r, z);
        }
        if step.norm() <= f64::EPSILON * z.norm().max(1e-300) {
            break;
        }
    }
    best.1
}
