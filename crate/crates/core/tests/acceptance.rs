//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use polyconvex::analysis::{
    brute_force_preimage_count, curve_analysis, exists_four_preimages, laplacian_symbolic, maslov_index_algebraic,
    maslov_index_winding, preimage_count, subharmonicity_check,
};
use polyconvex::certify::{kallin_verify, KallinCase};
use polyconvex::convexity::{star_threshold, three_plane_decider, weinstock_pair_check, Status};
use polyconvex::invariants::compute_invariants;
use polyconvex::kernel::find_roots;
use polyconvex::planes::{factor_cubic_preimage, family_normal_form, pairwise_reduction, verify_pullback, CubicCoefficients};
use polyconvex::{HermitianPoly, RealMatrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

/// 25 parameters in (0, 1) and 25 in (1, 4].
fn invariant_grid() -> Vec<f64> {
    let below = (0..25).map(|i| 0.05 + 0.9 * i as f64 / 24.0);
    let above = (0..25).map(|i| 1.05 + 2.95 * i as f64 / 24.0);
    below.chain(above).collect()
}

fn closed_form_invariants() -> Outcome {
    let start = Instant::now();
    let s3 = 3f64.sqrt();
    let mut worst: f64 = 0.0;
    for t in invariant_grid() {
        let nf = family_normal_form(t).map_err(|e| format!("t = {t}: {e}"))?;
        let r = compute_invariants(&nf.a1, &nf.a2);
        let u = 1.0 - t * t;
        let det = (3.0 - t * t) / (3.0 * u);
        let checks = [
            (r.det_a1, det),
            (r.det_a2, det),
            (r.tr_a1, -2.0 * t * t / (s3 * u)),
            (r.tr_a1a2, -2.0 * (t.powi(4) - 2.0 * t * t + 3.0) / (3.0 * u * u)),
            (r.det_commutator, -16.0 * t * t / (3.0 * u.powi(3))),
        ];
        for (k, (got, want)) in checks.into_iter().enumerate() {
            let e = rel_err(got, want);
            ensure(e <= 1e-8, || format!("t = {t}, quantity {k}: got {got}, want {want}"))?;
            worst = worst.max(e);
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("50 parameters, worst relative error {worst:.2e}, {:?}", start.elapsed()))
}

fn reduction_trace() -> Outcome {
    let s3 = 3f64.sqrt();
    let mut worst: f64 = 0.0;
    for t in invariant_grid() {
        let nf = family_normal_form(t).map_err(|e| e.to_string())?;
        let b = pairwise_reduction(&nf.a1, &nf.a2).map_err(|e| format!("t = {t}: {e}"))?;
        let want = s3 * (1.0 - (3.0 - t * t) / (3.0 * (1.0 - t * t)));
        let e = (b.trace() - want).abs() / want.abs().max(1.0);
        ensure(e <= 1e-8, || format!("t = {t}: Tr B = {}, want {want}", b.trace()))?;
        ensure(b.trace().abs() > 1e-6, || format!("t = {t}: Tr B vanishes"))?;
        worst = worst.max(e);
    }
    Ok(format!("worst error {worst:.2e}, trace nonzero throughout"))
}

fn threshold_coverage() -> Outcome {
    let start = Instant::now();
    let star = star_threshold();
    ensure((star - 1.076).abs() < 5e-4, || format!("threshold {star} does not round to 1.076"))?;
    let mut count = 0;
    let mut k = 1;
    loop {
        let t = (1.07598 + 1e-3 * k as f64).min(4.0);
        let nf = family_normal_form(t).map_err(|e| e.to_string())?;
        let v = three_plane_decider(&nf.a1, &nf.a2);
        ensure(v.status == Status::LocallyPolynomiallyConvex, || format!("t = {t}: {v:?}"))?;
        count += 1;
        if t >= 4.0 {
            break;
        }
        k += 1;
    }
    let nf = family_normal_form(1.07).map_err(|e| e.to_string())?;
    let v = three_plane_decider(&nf.a1, &nf.a2);
    ensure(v.status == Status::Unknown, || format!("t = 1.07 should be undecided, got {v:?}"))?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("threshold {star:.10}, {count} grid points decided, t = 1.07 undecided, {:?}", start.elapsed()))
}

fn random_homogeneous(rng: &mut ChaCha8Rng) -> HermitianPoly {
    let k: u32 = rng.gen_range(2..=5);
    let terms: Vec<_> = (0..=k)
        .map(|n| ((k - n, n), C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    HermitianPoly::from_terms(terms).expect("finite coefficients")
}

fn maslov_agreement() -> Outcome {
    for (t, want) in [(0.1, 2), (0.5, 2), (0.9, 2), (0.99, 2), (1.01, -2), (2.0, -2), (5.0, -2)] {
        let p = HermitianPoly::cubic_family(t);
        let alg = maslov_index_algebraic(&p).map_err(|e| format!("t = {t}: {e}"))?;
        let wind = maslov_index_winding(&p, 1.0, 4096).map_err(|e| format!("t = {t}: {e}"))?;
        ensure(alg == want && wind == want, || format!("t = {t}: algebraic {alg}, winding {wind}, want {want}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < 100 {
        drawn += 1;
        let p = random_homogeneous(&mut rng);
        let q = p.wirtinger_dbar().restrict_conj_one();
        if q.is_zero() {
            continue;
        }
        // Admissible: every root of q at least 0.05 away from the unit circle.
        let roots = find_roots(&q).map_err(|e| e.to_string())?;
        if roots.roots.iter().any(|r| (r.location.norm() - 1.0).abs() < 0.05) {
            continue;
        }
        let alg = maslov_index_algebraic(&p).map_err(|e| format!("{p:?}: {e}"))?;
        let wind = maslov_index_winding(&p, 1.0, 4096).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(alg == wind, || format!("{p:?}: algebraic {alg} vs winding {wind}"))?;
        accepted += 1;
    }
    Ok(format!("family values match; 100 random polynomials agree ({drawn} drawn)"))
}

fn preimage_transition() -> Outcome {
    let start = Instant::now();
    let (mut lo, mut hi) = (0.5, 0.99);
    ensure(!exists_four_preimages(lo) && exists_four_preimages(hi), || "bracket does not straddle".into())?;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if exists_four_preimages(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let found = 0.5 * (lo + hi);
    let want = 3f64.sqrt() / 2.0;
    ensure((found - want).abs() <= 1e-6, || format!("transition at {found}, want {want}"))?;
    let mut mismatches = Vec::new();
    for i in 0..50 {
        let t = 0.99 * i as f64 / 49.0;
        for j in 0..50 {
            let psi = 2.0 * PI * j as f64 / 50.0;
            let a = preimage_count(t, psi).map_err(|e| e.to_string())?;
            let b = brute_force_preimage_count(t, psi).map_err(|e| e.to_string())?;
            if a != b {
                mismatches.push((t, psi, a, b));
            }
        }
    }
    ensure(mismatches.is_empty(), || format!("closed form vs brute force differ at {:?}", &mismatches[..mismatches.len().min(5)]))?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("transition at {found:.9}; 2500 grid counts agree; {:?}", start.elapsed()))
}

fn arc_property_flip() -> Outcome {
    let below = curve_analysis(&HermitianPoly::cubic_family(0.85), 2, 4096).map_err(|e| e.to_string())?;
    ensure(below.property_star_star, || format!("t = 0.85: property fails, gap {}", below.min_arc_gap))?;
    ensure((below.min_arc_gap - PI).abs() <= 1e-6, || format!("t = 0.85: gap {}", below.min_arc_gap))?;
    let above = curve_analysis(&HermitianPoly::cubic_family(0.9), 2, 4096).map_err(|e| e.to_string())?;
    ensure(!above.property_star_star, || format!("t = 0.9: property holds, gap {}", above.min_arc_gap))?;
    ensure(below.threshold_arc == PI / 2.0, || format!("threshold arc {}", below.threshold_arc))?;
    Ok(format!("t = 0.85 gap {:.9}; t = 0.9 gap {:.6}", below.min_arc_gap, above.min_arc_gap))
}

fn laplacian_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.gen_range(0.0..2.0);
        let z = C::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(0.0..2.0 * PI));
        let lap = laplacian_symbolic(&HermitianPoly::cubic_family(t), 2);
        let want = 1.0 - t * t * (z * z / (z.conj() * z.conj())).re;
        let got = lap.eval(z);
        let e = (got - want).norm();
        ensure(e <= 1e-10, || format!("t = {t}, z = {z}: {got} vs {want}"))?;
        worst = worst.max(e);
    }
    let radii = [0.25, 0.5, 1.0, 2.0];
    let mut fd_worst: f64 = 0.0;
    for t in [0.5, 0.9, 1.0, 1.1] {
        let r = subharmonicity_check(&HermitianPoly::cubic_family(t), 2, &radii, 720).map_err(|e| e.to_string())?;
        ensure(r.fd_agrees, || format!("t = {t}: finite differences off by {}", r.fd_max_rel_error))?;
        ensure(r.subharmonic == (t <= 1.0), || format!("t = {t}: subharmonic = {}", r.subharmonic))?;
        fd_worst = fd_worst.max(r.fd_max_rel_error);
    }
    Ok(format!("closed form error {worst:.2e}; finite-difference error {fd_worst:.2e}; verdicts flip above 1"))
}

fn pair_test() -> Outcome {
    let rot = |a: f64| RealMatrix2::new(0.0, -a, a, 0.0);
    for a in [1.01, 2.0, 10.0] {
        let s = weinstock_pair_check(&rot(a)).status;
        ensure(s == Status::NotLocallyPolynomiallyConvex, || format!("a = {a}: {s:?}"))?;
    }
    for a in [0.0, 0.5, 0.99] {
        let s = weinstock_pair_check(&rot(a)).status;
        ensure(s == Status::LocallyPolynomiallyConvex, || format!("a = {a}: {s:?}"))?;
    }
    let s = weinstock_pair_check(&rot(1.0)).status;
    ensure(s == Status::Unknown, || format!("a = 1: {s:?}"))?;
    Ok("rejects 1.01, 2, 10; accepts 0, 0.5, 0.99; undecided at 1".into())
}

fn separation_certificates() -> Outcome {
    let mut parts = Vec::new();
    for case in KallinCase::ALL {
        let planes = case.default_instance(None).map_err(|e| e.to_string())?;
        let r = kallin_verify(case, &planes, 10_000, 1.0).map_err(|e| format!("{case}: {e}"))?;
        ensure(r.max_violation <= 1e-9, || format!("{case}: violation {}", r.max_violation))?;
        ensure(r.zero_fiber_ok && r.regions_disjoint, || format!("{case}: {r:?}"))?;
        parts.push(format!("{case} {:.1e}", r.max_violation));
    }
    Ok(parts.join(", "))
}

fn factorization_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut draw = || C::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.0..2.0 * PI));
        let (a1, a3) = (draw(), draw());
        let a2 = (a1 * a3 * 3.0).sqrt();
        let c = CubicCoefficients::new(a1, a2, a3);
        let planes = factor_cubic_preimage(&c).map_err(|e| format!("{c:?}: {e}"))?;
        let r = verify_pullback(&c, &planes, 200, 42);
        ensure(r <= 1e-9, || format!("{c:?}: pullback residual {r}"))?;
        worst = worst.max(r);
    }
    let s3 = 3f64.sqrt();
    for t in [0.3, 0.8, 1.0, 1.5, 3.0] {
        let planes = factor_cubic_preimage(&CubicCoefficients::family(t)).map_err(|e| e.to_string())?;
        let want = [
            (C::new(0.0, 0.0), C::new(1.0, 0.0)),
            (-C::new(s3 * s3, -s3) / (2.0 * t), -C::new(1.0, -s3) / 2.0),
            (-C::new(s3 * s3, s3) / (2.0 * t), -C::new(1.0, s3) / 2.0),
        ];
        for (p, (alpha, beta)) in planes.iter().zip(want) {
            let (ga, gb) = p.to_graph().ok_or("plane is not a graph")?;
            ensure((ga - alpha).norm() <= 1e-10 && (gb - beta).norm() <= 1e-10, || {
                format!("t = {t}: got ({ga}, {gb}), want ({alpha}, {beta})")
            })?;
        }
    }
    Ok(format!("100 random cubics, worst pullback residual {worst:.2e}; family planes reproduced"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form invariants of the preimage planes", closed_form_invariants),
        ("trace of the pairwise reduction", reduction_trace),
        ("decider coverage above the threshold", threshold_coverage),
        ("index: algebraic vs winding", maslov_agreement),
        ("preimage-count transition", preimage_transition),
        ("arc-gap property flip", arc_property_flip),
        ("Laplacian closed form and subharmonicity", laplacian_closed_form),
        ("two-plane eigenvalue test", pair_test),
        ("separation certificates", separation_certificates),
        ("cubic factorization round trip", factorization_roundtrip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
