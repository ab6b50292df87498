mod common;

use common::*;
use krawczyk_core::interval::{box_centered, ArithOp};
use krawczyk_core::{ComplexInterval, IntervalBox, RealInterval};
use num_complex::Complex64;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        -1.0..1.0f64,
        (1.0..10.0f64, -30..30i32).prop_map(|(m, e)| m * 10f64.powi(e)),
        (-10.0..-1.0f64, -30..30i32).prop_map(|(m, e)| m * 10f64.powi(e)),
    ]
}

fn interval() -> impl Strategy<Value = RealInterval> {
    (finite(), finite()).prop_map(|(a, b)| RealInterval::new(a.min(b), a.max(b)).unwrap())
}

/// An interval and a float inside it.
fn interval_with_member() -> impl Strategy<Value = (RealInterval, f64)> {
    (interval(), 0.0..=1.0f64).prop_map(|(i, u)| (i, (i.lo() + u * (i.hi() - i.lo())).clamp(i.lo(), i.hi())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    /// The dyadic oracle orders `a·b + c − d` exactly like the rational one.
    #[test]
    fn dyadic_oracle_agrees_with_rationals(a in finite(), b in finite(), c in finite(), d in finite()) {
        let x = D::from_f64(a).mul(&D::from_f64(b)).add(&D::from_f64(c));
        let y = q(a) * q(b) + q(c);
        let dd = D::from_f64(d);
        prop_assert_eq!(x.partial_cmp(&dd), y.partial_cmp(&q(d)));
        prop_assert!(x.sub(&x) == D::int(0));
    }

    #[test]
    fn real_ops_contain_exact_results((a, x) in interval_with_member(), (b, y) in interval_with_member()) {
        let (qx, qy) = (q(x), q(y));
        prop_assert!(contains_q(&(a + b), &(&qx + &qy)));
        prop_assert!(contains_q(&(a - b), &(&qx - &qy)));
        prop_assert!(contains_q(&(a * b), &(&qx * &qy)));
        prop_assert!(contains_q(&a.sqr(), &(&qx * &qx)));
        if !b.contains_zero() {
            prop_assert!(contains_q(&a.checked_div(&b).unwrap(), &(&qx / &qy)));
        }
    }

    #[test]
    fn complex_ops_contain_exact_results(
        (ar, xr) in interval_with_member(), (ai, xi) in interval_with_member(),
        (br, yr) in interval_with_member(), (bi, yi) in interval_with_member(),
        e in 0u32..7,
    ) {
        let a = ComplexInterval::new(ar, ai);
        let b = ComplexInterval::new(br, bi);
        let x = Cq::from_c(Complex64::new(xr, xi));
        let y = Cq::from_c(Complex64::new(yr, yi));
        prop_assert!(contains_cq(&(a + b), &x.add(&y)));
        prop_assert!(contains_cq(&(a - b), &x.sub(&y)));
        prop_assert!(contains_cq(&(a * b), &x.mul(&y)));
        if let Ok(d) = a.checked_div(&b) {
            prop_assert!(contains_cq(&d, &x.div(&y)));
        }
        if a.mag() < 1e40 {
            prop_assert!(contains_cq(&a.powi(e), &x.pow(e)));
        }
    }

    #[test]
    fn degenerate_ops_are_exact_when_representable(a in -1000i32..1000, b in -1000i32..1000) {
        let (x, y) = (RealInterval::point(a as f64), RealInterval::point(b as f64));
        prop_assert_eq!(x + y, RealInterval::point((a + b) as f64));
        prop_assert_eq!(x * y, RealInterval::point((a * b) as f64));
    }

    #[test]
    fn hull_and_intersection((a, x) in interval_with_member(), b in interval()) {
        let h = a.hull(&b);
        prop_assert!(h.contains_interval(&a) && h.contains_interval(&b));
        if let Some(i) = a.intersect(&b) {
            prop_assert!(a.contains_interval(&i) && b.contains_interval(&i));
            prop_assert_eq!(i.contains(x), b.contains(x));
        } else {
            prop_assert!(!b.contains(x));
        }
    }

    #[test]
    fn box_subtraction_contains_differences(c in finite(), d in finite(), r in 1e-12..1.0f64) {
        let a = box_centered(&[Complex64::new(c, d)], r).unwrap();
        let b = IntervalBox::point(&[Complex64::new(d, c)]);
        let s = a.sub_box(&b).unwrap();
        prop_assert!(contains_cq(&s[0], &Cq::from_c(Complex64::new(c, d)).sub(&Cq::from_c(Complex64::new(d, c)))));
    }

    #[test]
    fn randomized_composites(seed in any::<u64>()) {
        let mut rng = stream(seed);
        prop_assert!(check_matvec(&mut rng));
        prop_assert!(check_residual_matrix(&mut rng));
        prop_assert!(check_interval_eval(&mut rng));
    }
}

#[test]
fn invalid_intervals_are_rejected() {
    assert!(RealInterval::new(2.0, 1.0).is_err());
    assert!(RealInterval::new(f64::NAN, 1.0).is_err());
    assert!(RealInterval::new(0.0, f64::INFINITY).is_err());
}

#[test]
fn division_by_zero_interval_is_an_error() {
    let a = RealInterval::new(1.0, 2.0).unwrap();
    let z = RealInterval::new(-1.0, 1.0).unwrap();
    assert!(a.checked_div(&z).is_err());
    assert!(krawczyk_core::interval::real_op(a, z, ArithOp::Div).is_err());
    let cz = ComplexInterval::new(z, z);
    assert!(ComplexInterval::ONE.checked_div(&cz).is_err());
}

#[test]
fn addition_of_tenths_is_widened() {
    let a = RealInterval::point(0.1);
    let s = a + RealInterval::point(0.2);
    assert!(contains_q(&s, &(q(0.1) + q(0.2))));
    assert!(s.width() > 0.0);
}
