use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use fockgerbe::fock::{implementer, FockSpace};
use fockgerbe::linalg::{max_abs_diff, unitarity_defect, SparseMat};
use fockgerbe::modes::{default_finite_lagrangian, random, standard_lagrangian, ModeBasis};
use fockgerbe::quatgeom::{stereo_north, stereo_south, Quaternion, S4Point};
use fockgerbe::torsorcech::{
    cech_coboundary, torsor_dual, winding_degree, wrap_angle, CechCochain, CochainValue, IndexedCover, PhaseElement,
    TorsorTag,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn circle(n: usize, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, f(2.0 * PI * k as f64 / n as f64))).collect()
}

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wrap_angle_lands_in_half_open_interval(a in -1e3f64..1e3) {
        let w = wrap_angle(a);
        prop_assert!(w > -PI && w <= PI);
        let turns = (a - w) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn winding_is_additive(m in -4i64..=4, n in -4i64..=4, wobble in 0.0f64..0.3) {
        let f = circle(128, |s| m as f64 * s + wobble * s.sin());
        let g = circle(128, |s| n as f64 * s);
        let fg: Vec<Complex64> = f.iter().zip(&g).map(|(a, b)| a * b).collect();
        prop_assert_eq!(winding_degree(&f).unwrap(), m);
        prop_assert_eq!(winding_degree(&fg).unwrap(), m + n);
    }

    #[test]
    fn stereographic_charts_invert(z in quat()) {
        // the north chart sends the point to z, the south chart to z⁻¹
        let r2 = z.norm_sqr();
        let a = z.scale(2.0 / (1.0 + r2)).to_array();
        let p = S4Point::new(Quaternion::from_array(a), (r2 - 1.0) / (1.0 + r2)).unwrap();
        prop_assert!(stereo_north(p).unwrap().dist(z) < 1e-9 * (1.0 + r2));
        if r2 > 1e-6 {
            let inv = z.inverse().unwrap();
            prop_assert!(stereo_south(p).unwrap().dist(inv) < 1e-8 * (1.0 + inv.norm_sqr()));
        }
    }

    #[test]
    fn torsor_dual_is_an_involution(a in -10.0f64..10.0) {
        let t = PhaseElement::from_angle(a, TorsorTag::named("T"));
        let back = torsor_dual(&torsor_dual(&t));
        prop_assert_eq!(&back.tag, &t.tag);
        prop_assert!((back.value - t.value).norm() < 1e-14);
    }

    #[test]
    fn coboundary_squares_to_one(seed in 0u64..1000, degree in 0usize..2) {
        let mut rng = random::rng(seed);
        let n = 20;
        let mut sets = BTreeMap::new();
        for i in 0..4i64 {
            let start = rng.gen_range(0..n);
            let len = rng.gen_range(6..n);
            sets.insert(i, (0..len).map(|k| (start + k) % n).collect::<Vec<_>>());
        }
        let cover = Arc::new(IndexedCover::new("random", n, sets));
        let c = CechCochain::from_fn(cover, degree, |_, pts| {
            CochainValue::Sampled(pts.iter().map(|_| rng.gen_range(-5.0..5.0)).collect())
        });
        let dd = cech_coboundary(&cech_coboundary(&c).unwrap()).unwrap();
        prop_assert!(dd.identity_defect().unwrap() < 1e-12);
    }

    #[test]
    fn sparse_products_agree_with_dense(seed in 0u64..1000, rows in 1usize..9, cols in 1usize..9) {
        let mut rng = random::rng(seed);
        let mut a = random::complex_matrix(rows, cols, &mut rng);
        for z in a.iter_mut() {
            if rng.gen_bool(0.5) {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        let s = SparseMat::from_dense(&a);
        let d = random::complex_matrix(cols, 3, &mut rng);
        let e = random::complex_matrix(4, rows, &mut rng);
        prop_assert!(max_abs_diff(&s.mul_dense(&d), &(&a * &d)) < 1e-12);
        prop_assert!(max_abs_diff(&s.dense_mul(&e), &(&e * &a)) < 1e-12);
        prop_assert!(max_abs_diff(&s.gram(), &(a.adjoint() * &a)) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn implementers_are_unitary_intertwiners(seed in 0u64..10_000, scale in 0.05f64..0.7) {
        let mut rng = random::rng(seed);
        let basis = ModeBasis::new(2, 1);
        let frame = standard_lagrangian(basis, &default_finite_lagrangian(2)).unwrap();
        let space = FockSpace::full(frame);
        let g = random::orthogonal(basis, 1, scale, &mut rng);
        let u = implementer(&g, &space).unwrap();
        prop_assert!(u.residual < 1e-8);
        prop_assert!(unitarity_defect(&u.op.matrix) < 1e-9);
    }
}
