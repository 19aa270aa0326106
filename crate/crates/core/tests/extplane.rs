use primint_core::num::ulps_between;
use primint_core::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -10.0f64..10.0,
        -1e6f64..1e6,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
    ]
}

#[test]
fn chart_round_trip_on_a_million_values() {
    let ch = Chart;
    let mut runner = TestRunner::new(Config { cases: 1_000_000, failure_persistence: None, ..Config::default() });
    runner
        .run(&finite(), |t| {
            let back = ch.inverse(ch.forward(ExtReal::of(t))).value();
            prop_assert!(ulps_between(back, t) <= 1, "{} -> {}", t, back);
            Ok(())
        })
        .unwrap();
    for t in [ExtReal::NEG_INF, ExtReal::POS_INF] {
        assert_eq!(ch.inverse(ch.forward(t)), t);
    }
}

#[test]
fn chart_is_strictly_increasing_on_samples() {
    let ch = Chart;
    let ts = [-f64::MAX, -1e100, -3.0, -1.0, -1e-300, 0.0, 1e-300, 0.5, 1.0, 2.0, 1e100, f64::MAX];
    let mut prev = ch.forward(ExtReal::NEG_INF).position();
    for t in ts {
        let u = ch.forward(ExtReal::of(t)).position();
        assert!(u > prev || (u == prev && u.abs() == 1.0), "{t}");
        prev = u;
    }
    assert!(ch.forward(ExtReal::POS_INF).position() >= prev);
}

#[test]
fn uniform_grid_examples() {
    let g = uniform_grid(2, &Chart).unwrap();
    assert_eq!(g.xs(), &[ExtReal::NEG_INF, ExtReal::ZERO, ExtReal::POS_INF]);
    let g4 = Grid2::uniform(4).unwrap();
    assert_eq!(g4.xs().len(), 5);
    let pos = g4.x_positions();
    for w in pos.windows(2) {
        assert_eq!(w[1] - w[0], 0.5);
    }
    assert!(Grid2::uniform(1).is_err());
}

#[test]
fn grid_refinement_nests_for_powers_of_two() {
    for k in [2usize, 4, 8, 16, 32, 64, 128, 256, 512] {
        let coarse = Grid2::uniform(k).unwrap();
        let fine = Grid2::uniform(2 * k).unwrap();
        for (i, t) in coarse.xs().iter().enumerate() {
            assert_eq!(fine.xs()[2 * i], *t, "k={k}, i={i}");
        }
    }
}

#[test]
fn corner_points_examples() {
    let inf = f64::INFINITY;
    let plane = Interval2::PLANE.corner_points();
    assert_eq!(plane[0], ExtPoint2::of(-inf, -inf));
    assert_eq!(plane[1], ExtPoint2::of(inf, inf));
    assert_eq!(plane[2], ExtPoint2::of(-inf, inf));
    assert_eq!(plane[3], ExtPoint2::of(inf, -inf));
    let degenerate = make_interval(ExtReal::of(2.0), ExtReal::of(2.0), ExtReal::of(0.0), ExtReal::of(1.0));
    let c = degenerate.interval.corner_points();
    assert_eq!(c[0].x, c[3].x);
    assert!(degenerate.degenerate);
}

#[test]
fn ext_real_order_and_arithmetic() {
    assert!(ExtReal::NEG_INF < ExtReal::of(-f64::MAX));
    assert!(ExtReal::of(f64::MAX) < ExtReal::POS_INF);
    assert!(ExtReal::new(f64::NAN).is_err());
    assert!(ExtReal::POS_INF.checked_add(ExtReal::NEG_INF).is_err());
    assert_eq!(ExtReal::POS_INF.shifted(3.0), ExtReal::POS_INF);
    assert_eq!(ExtReal::of(1.0).checked_sub(ExtReal::of(3.0)).unwrap(), ExtReal::of(-2.0));
}

fn ext() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::NEG_INF),
        1 => Just(ExtReal::POS_INF),
        6 => (-100.0f64..100.0).prop_map(ExtReal::of),
    ]
}

proptest! {
    #[test]
    fn swapping_limits_flips_the_sign(a in ext(), b in ext(), c in ext(), d in ext()) {
        let base = make_interval(a, b, c, d);
        let swap_x = make_interval(b, a, c, d);
        let swap_y = make_interval(a, b, d, c);
        let swap_both = make_interval(b, a, d, c);
        if a != b {
            prop_assert_eq!(swap_x.sign, -base.sign);
        }
        if c != d {
            prop_assert_eq!(swap_y.sign, -base.sign);
        }
        if a != b && c != d {
            prop_assert_eq!(swap_both.sign, base.sign);
        }
        prop_assert_eq!(swap_both.interval, base.interval);
        prop_assert_eq!(base.degenerate, a == b || c == d);
        prop_assert!(base.interval.a <= base.interval.b && base.interval.c <= base.interval.d);
    }

    #[test]
    fn interval_contains_its_corners(a in ext(), b in ext(), c in ext(), d in ext()) {
        let i = make_interval(a, b, c, d).interval;
        for p in i.corner_points() {
            prop_assert!(i.contains(p));
        }
    }
}
