mod common;

use std::collections::BTreeMap;

use common::*;
use gcverify_core::calculus::Chart;
use gcverify_core::scalar::{GaussianRational, RingOp, EXP_NAME};
use gcverify_core::Error;
use proptest::prelude::*;
use rand::Rng;

fn q(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_ratio(n, d)
}

fn at(pairs: &[(&str, GaussianRational)]) -> BTreeMap<String, GaussianRational> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn random_rational<R: Rng>(rng: &mut R) -> GaussianRational {
    q(rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

#[test]
fn ring_op_examples() {
    let m = r2();
    let (x, one) = (m.coord(0), m.one());
    let xp1 = &x + &one;
    assert_eq!(&(&x / &xp1) + &(&one / &xp1), one);
    assert_eq!(&x * &(&one / &x), one);
    assert!(matches!(
        x.ring_op(&m.zero(), RingOp::Div),
        Err(Error::DivisionByZero)
    ));
    let other = Chart::new("S", &["u", "v"]).unwrap();
    assert!(matches!(
        x.ring_op(&other.coord(0), RingOp::Add),
        Err(Error::ContextMismatch)
    ));
}

#[test]
fn cancelled_quotient_agrees_at_random_points() {
    let m = r2();
    let (x, one) = (m.coord(0), m.one());
    let f = &(&(&x * &x) - &one) / &(&x - &one);
    assert_eq!(f, &x + &one);
    // independent oracle: evaluate numerator and denominator separately
    let mut rng = seeded(1);
    let mut checked = 0;
    while checked < 5 {
        let p = at(&[
            ("x", random_rational(&mut rng)),
            ("y", random_rational(&mut rng)),
        ]);
        let xv = p["x"].clone();
        let den = xv.clone() - GaussianRational::from_int(1);
        if den == GaussianRational::from_int(0) {
            continue;
        }
        let expect = (xv.clone() * xv - GaussianRational::from_int(1)) * den.inv().unwrap();
        assert_eq!(f.evaluate(&p).unwrap(), expect);
        checked += 1;
    }
}

#[test]
fn partial_derivative_examples() {
    let m = r2();
    let (x, y) = (m.coord(0), m.coord(1));
    assert_eq!(
        (&(&x * &x) * &y).partial_derivative("x").unwrap(),
        &(&m.int(2) * &x) * &y
    );
    let yp1 = &y + &m.one();
    let f = &x / &yp1;
    let df = f.partial_derivative("y").unwrap();
    assert_eq!(df, -(&x / &(&yp1 * &yp1)));
    // quotient rule from the parts, compared at random points
    let mut rng = seeded(2);
    for _ in 0..5 {
        let p = at(&[
            ("x", random_rational(&mut rng)),
            ("y", q(rng.gen_range(0..=9), 1)),
        ]);
        let (xv, yv) = (
            p["x"].clone(),
            p["y"].clone() + GaussianRational::from_int(1),
        );
        let expect = GaussianRational::from_int(0) - xv * (yv.clone() * yv).inv().unwrap();
        assert_eq!(df.evaluate(&p).unwrap(), expect);
    }
    assert!(matches!(
        x.partial_derivative("w"),
        Err(Error::UnknownCoordinate(_))
    ));
}

#[test]
fn generator_derivative() {
    let c = Chart::cylinder("C", &["x"]).unwrap();
    let u = c.exp_t(1).unwrap();
    assert_eq!(u.partial_derivative("t").unwrap(), u);
    let f = &(&c.coord(0) * &c.coord(1)) * &c.exp_t(-2).unwrap();
    // d/dt (x t u^-2) = x u^-2 - 2 x t u^-2
    let expect = &(&c.coord(0) * &c.exp_t(-2).unwrap()) - &(&c.int(2) * &f);
    assert_eq!(f.partial_derivative("t").unwrap(), expect);
    assert_eq!(f.exp_degree_range(), Some((-2, -2)));
}

#[test]
fn evaluate_examples() {
    let m = r2();
    let (x, y) = (m.coord(0), m.coord(1));
    let p = point(&[("x", 1), ("y", 2)]);
    assert_eq!(
        (&x + &y).evaluate(&p).unwrap(),
        GaussianRational::from_int(3)
    );
    let inv = &m.one() / &x;
    assert!(matches!(
        inv.evaluate(&point(&[("x", 0), ("y", 0)])),
        Err(Error::PoleAtPoint)
    ));
    let f = &(&(&x * &x) - &y) / &(&x + &m.one());
    assert_eq!(
        f.evaluate(&point(&[("x", 2), ("y", 1)])).unwrap(),
        GaussianRational::from_int(1)
    );
    assert!(matches!(
        x.evaluate(&point(&[("x", 1)])),
        Err(Error::UnknownCoordinate(_))
    ));
}

#[test]
fn cylinder_evaluation_needs_positive_generator() {
    let c = Chart::cylinder("C", &["x"]).unwrap();
    let f = &c.coord(0) * &c.exp_t(1).unwrap();
    let mut p = at(&[("x", q(3, 1)), ("t", q(0, 1)), (EXP_NAME, q(1, 2))]);
    assert_eq!(f.evaluate(&p).unwrap(), q(3, 2));
    p.insert(EXP_NAME.into(), q(-1, 1));
    assert!(matches!(f.evaluate(&p), Err(Error::InvalidPoint(_))));
}

#[test]
fn zero_test_examples() {
    let m = r2();
    let (x, y, one) = (m.coord(0), m.coord(1), m.one());
    assert!((&x - &x).is_zero());
    assert!((&(&x * &y) - &(&y * &x)).is_zero());
    let xp1 = &x + &one;
    assert!((&(&(&(&xp1 * &xp1) - &(&x * &x)) - &(&m.int(2) * &x)) - &one).is_zero());
    assert!(!x.is_zero());
}

#[test]
fn gaussian_coefficients() {
    let m = r2();
    let i = m.constant(GaussianRational::i());
    assert_eq!(&i * &i, -m.one());
    let z = &m.coord(0) + &(&i * &m.coord(1));
    let zbar = z.conj();
    assert_eq!(
        &z * &zbar,
        &(&m.coord(0) * &m.coord(0)) + &(&m.coord(1) * &m.coord(1))
    );
}

#[test]
fn representation_is_canonical() {
    let m = r2();
    let (x, y) = (m.coord(0), m.coord(1));
    let a = &(&x * &y) / &(&m.int(2) * &(&x + &y));
    let b = &(&m.int(3) * &(&x * &y)) / &(&m.int(6) * &(&y + &x));
    assert_eq!(a, b);
    assert_eq!(format!("{a}"), format!("{b}"));
}

fn chart_xyz() -> Chart {
    r3()
}

fn poly_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, monomial_count(3, 2))
}

fn point_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy(), d in poly_strategy()) {
        let m = chart_xyz();
        let vars = [0, 1, 2];
        let (a, b, c) = (poly_from_coeffs(&m, &vars, 2, &a), poly_from_coeffs(&m, &vars, 2, &b), poly_from_coeffs(&m, &vars, 2, &c));
        let d = &poly_from_coeffs(&m, &vars, 2, &d) + &(&m.coord(0) * &m.coord(0)) + m.one() * m.int(7);
        // rational functions too
        let r = &a / &d;
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&r * &b) * &c, &r * &(&b * &c));
        prop_assert_eq!(&r * &(&b + &c), &(&r * &b) + &(&r * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&r * &b, &b * &r);
        prop_assert_eq!(&(&r - &r), &m.zero());
        if !a.is_zero() {
            prop_assert_eq!(&r * &(&d / &a), m.one());
        }
    }

    #[test]
    fn leibniz_rule(a in poly_strategy(), b in poly_strategy(), k in 0usize..3) {
        let m = chart_xyz();
        let vars = [0, 1, 2];
        let (f, g) = (poly_from_coeffs(&m, &vars, 2, &a), poly_from_coeffs(&m, &vars, 2, &b));
        let lhs = (&f * &g).partial(k);
        let rhs = &(&f * &g.partial(k)) + &(&g * &f.partial(k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluate_is_a_homomorphism(a in poly_strategy(), b in poly_strategy(), pt in point_strategy()) {
        let m = chart_xyz();
        let vars = [0, 1, 2];
        let (f, g) = (poly_from_coeffs(&m, &vars, 2, &a), poly_from_coeffs(&m, &vars, 2, &b));
        let p: BTreeMap<String, GaussianRational> = ["x", "y", "z"].iter().zip(&pt).map(|(k, &(n, d))| (k.to_string(), q(n, d))).collect();
        let (fv, gv) = (f.evaluate(&p).unwrap(), g.evaluate(&p).unwrap());
        prop_assert_eq!((&f * &g).evaluate(&p).unwrap(), fv.clone() * gv.clone());
        prop_assert_eq!((&f + &g).evaluate(&p).unwrap(), fv.clone() + gv.clone());
        if gv != GaussianRational::from_int(0) && !g.is_zero() {
            prop_assert_eq!((&f / &g).evaluate(&p).unwrap(), fv * gv.inv().unwrap());
        }
    }

    #[test]
    fn cylinder_derivatives_commute(a in prop::collection::vec(-3i64..=3, monomial_count(2, 2)), k in -2i32..=2, l in -1i32..=1) {
        let c = Chart::cylinder("C", &["x"]).unwrap();
        let f = &poly_from_coeffs(&c, &[0, 1], 2, &a) * &c.exp_t(k).unwrap();
        let f = &f + &(&c.coord(0) * &c.exp_t(l).unwrap());
        let t = c.time_index().unwrap();
        prop_assert_eq!(f.partial(t).partial(0), f.partial(0).partial(t));
    }

    #[test]
    fn quotient_rule_matches_pointwise(
        a in poly_strategy(),
        b in poly_strategy(),
        square in any::<bool>(),
        k in 0usize..3,
        pt in point_strategy(),
    ) {
        let m = chart_xyz();
        let vars = [0, 1, 2];
        let n = poly_from_coeffs(&m, &vars, 2, &a);
        let base = &poly_from_coeffs(&m, &vars, 2, &b) + &(&m.coord(k) * &m.coord(k)) + m.int(7);
        let d = if square { &base * &base } else { base };
        let f = &n / &d;
        let p: BTreeMap<String, GaussianRational> = ["x", "y", "z"].iter().zip(&pt).map(|(k, &(n, d))| (k.to_string(), q(n, d))).collect();
        let (nv, dv) = (n.evaluate(&p).unwrap(), d.evaluate(&p).unwrap());
        prop_assume!(dv != GaussianRational::from_int(0));
        let (nd, dd) = (n.partial(k).evaluate(&p).unwrap(), d.partial(k).evaluate(&p).unwrap());
        let expect = (nd * dv.clone() - nv * dd) * (dv.clone() * dv).inv().unwrap();
        prop_assert_eq!(f.partial(k).evaluate(&p).unwrap(), expect);
    }

    #[test]
    fn time_quotient_rule_matches_pointwise(a in prop::collection::vec(-3i64..=3, monomial_count(2, 2)), k in -2i32..=2, x in 1i64..=5, t in -3i64..=3) {
        let c = Chart::cylinder("C", &["x"]).unwrap();
        let time = c.time_index().unwrap();
        let n = &poly_from_coeffs(&c, &[0, 1], 2, &a) * &c.exp_t(k).unwrap();
        let d = &(&c.exp_t(1).unwrap() * &c.coord(0)) + &(&c.coord(1) * &c.coord(1)) + c.one();
        let d = &d * &d;
        let f = &n / &d;
        let p = at(&[("x", q(x, 1)), ("t", q(t, 1)), (EXP_NAME, q(2, 3))]);
        let (nv, dv) = (n.evaluate(&p).unwrap(), d.evaluate(&p).unwrap());
        let (nd, dd) = (n.partial(time).evaluate(&p).unwrap(), d.partial(time).evaluate(&p).unwrap());
        let expect = (nd * dv.clone() - nv * dd) * (dv.clone() * dv).inv().unwrap();
        prop_assert_eq!(f.partial(time).evaluate(&p).unwrap(), expect);
    }
}
