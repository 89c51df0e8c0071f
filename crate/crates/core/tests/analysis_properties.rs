use std::f64::consts::PI;

use num_complex::Complex64 as C;
use polyconvex::analysis::{
    constraint_minimum, curve_analysis, maslov_index_algebraic, maslov_index_winding, min_preimage_threshold,
    subharmonicity_check, unit_modulus_angles, write_coincidences_csv, write_curve_csv,
};
use polyconvex::kernel::find_roots;
use polyconvex::{Error, HermitianPoly};
use proptest::prelude::*;

fn admissible() -> impl Strategy<Value = HermitianPoly> {
    (2u32..=5)
        .prop_flat_map(|k| {
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), (k + 1) as usize).prop_map(move |cs| {
                HermitianPoly::from_terms(
                    cs.into_iter().enumerate().map(|(n, (re, im))| ((k - n as u32, n as u32), C::new(re, im))),
                )
                .unwrap()
            })
        })
        .prop_filter("roots of the index polynomial off the circle", |p| {
            let q = p.wirtinger_dbar().restrict_conj_one();
            !q.is_zero()
                && find_roots(&q).is_ok_and(|r| r.roots.iter().all(|x| (x.location.norm() - 1.0).abs() >= 0.05))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn winding_radius_invariant(p in admissible()) {
        let at = |r| maslov_index_winding(&p, r, 4096).unwrap();
        let one = at(1.0);
        prop_assert_eq!(at(0.5), one);
        prop_assert_eq!(at(2.0), one);
        prop_assert_eq!(maslov_index_algebraic(&p).unwrap(), one);
    }
}

#[test]
fn parabolic_index_undefined() {
    let err = maslov_index_algebraic(&HermitianPoly::cubic_family(1.0)).unwrap_err();
    assert!(matches!(err, Error::NotIsolatedSingularity { .. } | Error::RootOnCircle { .. }), "{err}");
}

fn property(t: f64, samples: usize) -> bool {
    curve_analysis(&HermitianPoly::cubic_family(t), 2, samples).unwrap().property_star_star
}

#[test]
fn arc_property_flips_once_at_transition() {
    let (mut lo, mut hi) = (0.5, 0.99);
    assert!(property(lo, 4096) && !property(hi, 4096));
    // A single flip: the property is monotone along a coarse scan.
    let scan: Vec<bool> = (0..50).map(|i| property(0.5 + 0.49 * i as f64 / 49.0, 4096)).collect();
    let flips = scan.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1, "{scan:?}");
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if property(mid, 4096) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let found = 0.5 * (lo + hi);
    assert!((found - 3f64.sqrt() / 2.0).abs() <= 1e-6, "flip at {found}");
}

#[test]
fn doubling_samples_is_stable() {
    for t in [0.0, 0.3, 0.5, 0.85, 0.9, 0.95] {
        assert_eq!(property(t, 4096), property(t, 8192), "t = {t}");
    }
}

#[test]
fn holomorphic_leading_term_has_antipodal_coincidences() {
    let a = curve_analysis(&HermitianPoly::cubic_family(0.0), 2, 4096).unwrap();
    assert!(a.property_star_star);
    assert!((a.min_arc_gap - PI).abs() < 1e-9);
    let b = curve_analysis(&HermitianPoly::cubic_family(0.5), 2, 4096).unwrap();
    assert!(b.property_star_star);
    assert!((b.min_arc_gap - PI).abs() < 1e-6);
    assert!(b.min_arc_gap > 0.0 && b.min_arc_gap <= PI);
}

#[test]
fn curve_rejects_bad_input() {
    let p = HermitianPoly::cubic_family(0.5);
    assert!(matches!(curve_analysis(&p, 0, 4096), Err(Error::InvalidParameter(_))));
    assert!(matches!(curve_analysis(&p, 2, 8), Err(Error::InvalidParameter(_))));
    let mixed = p.add(&HermitianPoly::from_terms([((1, 0), C::new(1.0, 0.0))]).unwrap());
    assert!(matches!(curve_analysis(&mixed, 2, 4096), Err(Error::DegenerateInput(_))));
}

#[test]
fn csv_outputs() {
    let p = HermitianPoly::cubic_family(0.95);
    let mut buf = Vec::new();
    write_curve_csv(&p, 64, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), "theta,re_C,im_C");
    assert_eq!(text.lines().count(), 65);
    let a = curve_analysis(&p, 2, 4096).unwrap();
    let mut buf = Vec::new();
    write_coincidences_csv(&a, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), a.coincidence_pairs.len() + 1);
}

#[test]
fn finite_difference_audit() {
    for t in [0.2, 0.7, 1.3] {
        for j in [1, 2, 3] {
            let r = subharmonicity_check(&HermitianPoly::cubic_family(t), j, &[0.5, 1.0, 1.5], 360).unwrap();
            assert!(r.fd_agrees && r.fd_max_rel_error <= 1e-4, "t = {t}, j = {j}: {}", r.fd_max_rel_error);
            assert!(r.max_imaginary <= 1e-10);
        }
    }
}

#[test]
fn preimage_constants() {
    assert!((constraint_minimum() + 2.0 * 3f64.sqrt()).abs() < 1e-9);
    assert!((min_preimage_threshold() - 3f64.sqrt() / 2.0).abs() < 1e-9);
    assert_eq!(unit_modulus_angles(0.5).len(), 0);
    assert_eq!(unit_modulus_angles(0.95).len(), 8);
}
