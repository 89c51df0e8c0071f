use std::f64::consts::PI;

use num_complex::Complex64 as C;
use polyconvex::planes::{
    branch_lift, factor_cubic_preimage, family_planes, simultaneous_normal_form, verify_pullback,
    weinstock_normal_form, CubicCoefficients, TotallyRealPlane,
};
use polyconvex::RealMatrix2;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = C> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C::new(re, im))
}

fn matrix() -> impl Strategy<Value = RealMatrix2> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|[a, b, c, d]| RealMatrix2::new(a, b, c, d))
}

proptest! {
    #[test]
    fn weinstock_reconstruction(alpha1 in coeff(), beta1 in coeff(), alpha2 in coeff(), beta2 in coeff()) {
        prop_assume!(beta1.norm() > 0.2 && beta2.norm() > 0.2);
        let planes = [TotallyRealPlane::graph(alpha1, beta1), TotallyRealPlane::graph(alpha2, beta2)];
        let p0 = TotallyRealPlane::real();
        let Ok(form) = weinstock_normal_form(&p0, &planes) else { return Ok(()) };
        for (j, plane) in planes.iter().enumerate() {
            let back = form.reconstruct(j);
            let d = back.subspace_distance(plane);
            prop_assert!(d <= 1e-9, "plane {j}: distance {d}");
            let (a, b) = back.to_graph().unwrap();
            prop_assert!((a - plane.to_graph().unwrap().0).norm() <= 1e-8 * (1.0 + a.norm()));
            prop_assert!((b - plane.to_graph().unwrap().1).norm() <= 1e-8 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn simultaneous_form_preserves_invariants(a in matrix(), b in matrix()) {
        let Ok(f) = simultaneous_normal_form(&a, &b) else { return Ok(()) };
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(1.0);
        let cond = f.conjugator.norm() * f.conjugator.inverse().unwrap().norm();
        prop_assume!(cond < 1e3);
        prop_assert!(close(f.diagonal.trace(), a.trace()));
        prop_assert!(close(f.diagonal.det(), a.det()));
        prop_assert!(close(f.symmetric.trace(), b.trace()));
        prop_assert!(close(f.symmetric.det(), b.det()));
        prop_assert_eq!(f.symmetric.m[0][1], f.symmetric.m[1][0]);
        prop_assert_eq!(f.diagonal.m[0][1], 0.0);
        prop_assert!(f.diagonal.m[0][0] <= f.diagonal.m[1][1]);
        prop_assert!(f.diagonal.commutator(&f.symmetric).det() > 0.0);
    }

    #[test]
    fn admissible_cubics_factor(a2 in coeff(), a3 in coeff()) {
        prop_assume!(a3.norm() > 0.2);
        let c = CubicCoefficients::new(a2 * a2 / (a3 * 3.0), a2, a3);
        let planes = factor_cubic_preimage(&c).unwrap();
        prop_assert!(verify_pullback(&c, &planes, 100, 42) <= 1e-9 * (1.0 + a2.norm_sqr() / a3.norm()));
    }

    #[test]
    fn branch_lifts_distinct(t in 0.1..3.0f64, m in 0.05..0.5f64, arg in 0.0..(2.0 * PI)) {
        prop_assume!((t - 1.0).abs() > 0.05);
        let zeta = C::from_polar(m, arg);
        let u = zeta + zeta.conj() * t;
        prop_assume!(u.norm() > 1e-3);
        let f = |z: C| z.powu(4) * 0.1;
        let lifts: Vec<C> = match (0..3).map(|k| branch_lift(t, k, &f, zeta)).collect::<Result<_, _>>() {
            Ok(v) => v,
            Err(_) => return Ok(()),
        };
        for j in 0..3 {
            for k in (j + 1)..3 {
                prop_assert!((lifts[j] - lifts[k]).norm() > 0.0, "branches {j},{k} coincide at {zeta}");
            }
        }
    }
}

#[test]
fn nonfactorable_rejected() {
    let c = CubicCoefficients::new(C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0));
    assert!(factor_cubic_preimage(&c).is_err());
}

#[test]
fn plane_json_formats() {
    let g = TotallyRealPlane::graph(C::new(1.0, 2.0), C::new(3.0, 4.0));
    let v: serde_json::Value = serde_json::to_value(g).unwrap();
    assert_eq!(v, serde_json::json!({"alpha": [1.0, 2.0], "beta": [3.0, 4.0]}));
    let parsed: TotallyRealPlane = serde_json::from_value(v).unwrap();
    assert_eq!(parsed, g);
    let b = TotallyRealPlane::real();
    let s = serde_json::to_string(&b).unwrap();
    assert!(s.starts_with("{\"basis\""));
    assert_eq!(serde_json::from_str::<TotallyRealPlane>(&s).unwrap(), b);
}

#[test]
fn family_planes_are_totally_real() {
    for t in [0.2, 0.9, 1.0, 1.5, 4.0] {
        for p in family_planes(t) {
            assert!(p.total_reality() > 0.01, "t = {t}: {}", p.total_reality());
        }
    }
}
