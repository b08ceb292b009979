use std::f64::consts::PI;

use proptest::prelude::*;
use trispec::lower::{self, DEFAULT_METHODS};
use trispec::oracle::{rasterize, steiner_symmetrize, Line};
use trispec::upper;
use trispec::{Method, Triangle};

fn chart() -> impl Strategy<Value = (f64, f64)> {
    (0.0..0.999f64, 1.0..12.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metrics_ignore_side_order_and_scale((u, m) in chart(), s in 0.1..10.0f64) {
        let t = Triangle::from_um(u, m).unwrap();
        let [a, b, c] = t.sides();
        let shuffled = Triangle::from_sides(s * c, s * a, s * b).unwrap();
        prop_assert!((shuffled.m() - t.m()).abs() < 1e-12 * m);
        prop_assert!((shuffled.u() - t.u()).abs() < 1e-9);
        let (x, y) = (t.metrics(), shuffled.metrics());
        prop_assert!((y.area / (s * s * x.area) - 1.0).abs() < 1e-9);
        prop_assert!((x.area / t.heron_area() - 1.0).abs() < 1e-9);
        prop_assert!(x.h_min <= x.h_max && x.inradius < x.h_min);
    }

    #[test]
    fn bounds_scale_inversely_with_area((u, m) in chart(), s in 0.2..5.0f64) {
        let t = Triangle::from_um(u, m).unwrap();
        let (a, b) = (t.metrics(), t.scaled(s).metrics());
        for method in [Method::Polya, Method::Protter, Method::Freitas, Method::RectThm] {
            let (x, y) = (lower::bound(&a, method).unwrap().value, lower::bound(&b, method).unwrap().value);
            prop_assert!((y * s * s / x - 1.0).abs() < 1e-9, "{method}");
        }
    }

    #[test]
    fn best_lower_dominates((u, m) in chart()) {
        let mt = Triangle::from_um(u, m).unwrap().metrics();
        let best = lower::best_lower(&mt, &DEFAULT_METHODS).unwrap();
        for method in DEFAULT_METHODS {
            prop_assert!(lower::bound(&mt, method).unwrap().value <= best.value);
        }
        let direct = lower::freitas(&mt).value >= lower::polya(&mt).value;
        prop_assert_eq!(lower::crossover_predicate(&mt), direct);
    }

    #[test]
    fn upper_bound_exceeds_best_lower((u, m) in chart()) {
        let t = Triangle::from_um(u, m).unwrap();
        let best = lower::best_lower(&t.metrics(), &DEFAULT_METHODS).unwrap().value;
        prop_assert!(upper::lambda2_upper(&t).unwrap().value > best);
    }

    #[test]
    fn gap_inequality_holds((u, m) in chart()) {
        let t = Triangle::from_um(u, m).unwrap();
        let g = upper::gap_bound_check(&t).unwrap();
        prop_assert!(g <= upper::gap_constant() * (1.0 + 1e-9), "{} > 16pi^2/27", g);
    }

    #[test]
    fn ratio_inequality_holds_for_acute(m in 1.0..8.0f64, frac in 0.0..0.999f64) {
        // acute means N² < M² + 1
        let u = frac * ((m * m + 1.0).sqrt() - m);
        let t = Triangle::from_um(u, m).unwrap();
        let q = upper::ratio_bound_check(&t).unwrap();
        prop_assert!(q.valid);
        prop_assert!(q.value <= 7.0 / 3.0 * (1.0 + 1e-9), "{}", q.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn steiner_keeps_every_column((u, m) in (0.0..0.9f64, 1.0..2.5f64), at in 0.0..1.0f64) {
        let t = Triangle::from_um(u, m).unwrap();
        let d = rasterize(&t.vertices(), 30.0).unwrap();
        let s = steiner_symmetrize(&d, Line::horizontal(at)).unwrap();
        prop_assert_eq!(s.column_counts(), d.column_counts());
        prop_assert_eq!(steiner_symmetrize(&s, Line::horizontal(at)).unwrap(), s.clone());
    }
}

#[test]
fn equilateral_is_extremal() {
    let e = Triangle::equilateral();
    let g = upper::gap_bound_check(&e).unwrap();
    assert!((g / (16.0 * PI * PI / 27.0) - 1.0).abs() < 1e-9);
}
