mod common;

use common::*;
use primint_core::integral::{alexiewicz_norm, corner_difference, corner_integral};
use primint_core::primitive::{validate_primitive, GridConstant};
use primint_core::stieltjes::*;
use primint_core::variation::{hk_components_at, hk_norm_components};
use primint_core::*;
use proptest::prelude::*;

const NINF: ExtReal = ExtReal::NEG_INF;
const PINF: ExtReal = ExtReal::POS_INF;

fn bv(name: &str, params: Params) -> BVFunction {
    catalog_bv(name, &params).unwrap()
}

fn interval(a: f64, b: f64, c: f64, d: f64) -> Interval2 {
    Interval2 { a: e(a), b: e(b), c: e(c), d: e(d) }
}

fn indicator(i: Interval2) -> BVFunction {
    bv("intervalIndicator", Params::new().with("a", i.a.value()).with("b", i.b.value()).with("c", i.c.value()).with("d", i.d.value()))
}

#[test]
fn line_integral_examples() {
    let f = cat("prodArctan");
    let k = BVFunction::constant(3.0);
    let r = rs_line_integral(f.primitive(), &k, 1, e(0.5), NINF, PINF, 1e-12).unwrap();
    assert_eq!(r.value, 0.0);

    let one = ContinuousFn2::new("one", |_| 1.0);
    let g = bv("quadrantIndicator", Params::new().with("x", 0.75).with("y", 2.0));
    let r = rs_line_integral(&one, &g, 1, e(0.0), NINF, PINF, 1e-12).unwrap();
    let telescoped = g.value(ExtPoint2::new(PINF, e(0.0))) - g.value(ExtPoint2::new(NINF, e(0.0)));
    assert_eq!(r.value, telescoped);
    assert_eq!(r.value, -1.0);

    let h = bv("halfPlaneIndicator", Params::new());
    let r = rs_line_integral(f.primitive(), &h, 1, PINF, NINF, PINF, 1e-12).unwrap();
    // single jump at 0: the integrand value there
    assert!((r.value - f.primitive().value(ExtPoint2::new(e(0.0), PINF))).abs() < 1e-12, "{r:?}");

    assert!(rs_line_integral(&one, &g, 3, e(0.0), NINF, PINF, 1e-9).is_err());
    assert!(rs_line_integral(&one, &g, 1, e(0.0), PINF, NINF, 1e-9).is_err());
}

#[test]
fn plane_integral_examples() {
    let f = cat("gauss");
    let i = interval(-0.5, 1.25, -2.0, 0.3);
    let r = rs_plane_integral(f.primitive(), &indicator(i), &Interval2::PLANE, 1e-12).unwrap();
    let want = corner_difference(f.primitive(), &i).unwrap();
    assert!((r.value - want).abs() < 1e-12, "{} vs {want}", r.value);

    let r = rs_plane_integral(f.primitive(), &BVFunction::constant(2.0), &Interval2::PLANE, 1e-12).unwrap();
    assert_eq!(r.value, 0.0);

    let pt = bv("pointIndicator", Params::new().with("x", 0.3).with("y", -0.7));
    let r = integrate_product(&f, &pt, &Interval2::PLANE, 1e-12).unwrap();
    assert!(r.value.abs() < 1e-12, "{r:?}");
}

#[test]
fn product_examples() {
    for f in [cat("prodArctan"), cat("sinc2d"), cat("boundaryBuild")] {
        let total = f.primitive().value(ExtPoint2::new(PINF, PINF));
        let r = integrate_product(&f, &BVFunction::constant(1.0), &Interval2::PLANE, 1e-9).unwrap();
        assert!((r.value - total).abs() < 1e-12, "{}: {r:?}", f.label());
    }
    let f = cat("expRadial");
    for (x, y) in [(0.0, 0.0), (-1.5, 2.0), (3.0, -0.25)] {
        let g = bv("quadrantIndicator", Params::new().with("x", x).with("y", y));
        let r = integrate_product(&f, &g, &Interval2::PLANE, 1e-9).unwrap();
        let want = corner_integral(&f, &make_interval(NINF, e(x), NINF, e(y))).unwrap();
        assert!((r.value - want).abs() < 2e-9, "{x},{y}: {} vs {want}", r.value);
    }
}

#[test]
fn tagged_divisions_cover_and_tag_boundaries() {
    let g = bv("quadrantIndicator", Params::new().with("x", 0.3).with("y", -2.0));
    for i in [Interval2::PLANE, interval(-1.0, 4.0, -INF, 2.0), interval(0.0, 0.5, 1.0, INF)] {
        for level in 0..3 {
            let cells = tagged_division(&g, &i, level);
            let ch = Chart;
            let area: f64 = cells
                .iter()
                .map(|c| (ch.position(c.cell.b) - ch.position(c.cell.a)) * (ch.position(c.cell.d) - ch.position(c.cell.c)))
                .sum();
            let whole = (ch.position(i.b) - ch.position(i.a)) * (ch.position(i.d) - ch.position(i.c));
            assert!((area - whole).abs() < 1e-12);
            for c in &cells {
                assert!(c.cell.contains(c.tag));
                for (lo, hi, t) in [(c.cell.a, c.cell.b, c.tag.x), (c.cell.c, c.cell.d, c.tag.y)] {
                    if !lo.is_finite() {
                        assert_eq!(t, lo);
                    } else if !hi.is_finite() {
                        assert_eq!(t, hi);
                    }
                }
            }
        }
    }
}

#[test]
fn parts_primitive_validates_and_matches_unit_multiplier() {
    let f = cat("prodArctan");
    let g = bv("approxIdentity", Params::new().with("n", 2.0));
    let phi = parts_primitive(&f, &g, 16, 1e-6).unwrap();
    let report = validate_primitive(&phi.primitive, 16).unwrap();
    assert!(report.passed, "{report:?}");

    let one = parts_primitive(&f, &BVFunction::constant(1.0), 16, 1e-9).unwrap();
    for p in Grid2::uniform(16).unwrap().nodes() {
        assert_eq!(one.primitive.value(p), f.primitive().value(p));
    }
}

fn sup_diff(a: &Primitive, b: &Primitive, r: usize) -> f64 {
    Grid2::uniform(r).unwrap().nodes().map(|p| (a.value(p) - b.value(p)).abs()).fold(0.0, f64::max)
}

#[test]
fn parts_with_approximate_identity_approaches_primitive() {
    let f = cat("prodArctan");
    let gaps: Vec<f64> = [4.0, 8.0, 16.0]
        .iter()
        .map(|&n| {
            let g = bv("approxIdentity", Params::new().with("n", n));
            let phi = parts_primitive(&f, &g, 16, 1e-6).unwrap();
            sup_diff(&phi.primitive, f.primitive(), 16)
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn parts_is_lipschitz_in_the_primitive() {
    let f = cat("prodArctan");
    let g = bv("approxIdentityReflected", Params::new().with("n", 1.0));
    let bvn = hk_norm_components(&g, 1e-9).unwrap().0.value;
    let phi = parts_primitive(&f, &g, 16, 1e-7).unwrap();
    for n in [2.0, 4.0, 8.0] {
        let fn_ = Distribution::linear_combination(1.0, &f, 1.0 / n, &cat("gauss"));
        let gap = sup_diff(fn_.primitive(), f.primitive(), 64);
        let phin = parts_primitive(&fn_, &g, 16, 1e-7).unwrap();
        let d = sup_diff(&phin.primitive, &phi.primitive, 16);
        assert!(d <= gap * bvn + phi.error_estimate + phin.error_estimate + 1e-9, "{n}: {d} vs {}", gap * bvn);
    }
}

#[test]
fn exchange_identity_examples() {
    let tol = 1e-8;
    let f = cat("prodArctan");
    let i = interval(-1.0, 0.5, 0.25, 2.0);
    let r = gdf_identity_check(f.primitive(), &indicator(i), tol).unwrap();
    let oracle = corner_difference(f.primitive(), &i).unwrap();
    assert_eq!(r.variant, GdFVariant::VanishesAtPosInf);
    assert!(r.discrepancy <= 2.0 * tol, "{r:?}");
    assert!((r.product - oracle).abs() <= 2.0 * tol);

    let r = gdf_identity_check(f.primitive(), &BVFunction::constant(0.0), tol).unwrap();
    assert_eq!((r.product, r.g_df), (0.0, 0.0));

    let u = bv("approxIdentityReflected", Params::new().with("n", 2.0));
    let loose = 1e-6;
    let r = gdf_identity_check(cat("gauss").primitive(), &u, loose).unwrap();
    assert!(r.discrepancy <= 2.0 * loose, "{r:?}");

    let q = bv("quadrantIndicator", Params::new().with("x", 1.0).with("y", 1.0));
    assert_eq!(gdf_identity_check(f.primitive(), &q, tol).unwrap().variant, GdFVariant::VanishesAtPosInf);
    let upper = BVFunction::closed_form("upper", |p| if p.x > e(0.0) && p.y > e(0.0) { 1.0 } else { 0.0 }, vec![], vec![]);
    let r = gdf_identity_check(f.primitive(), &upper, tol).unwrap();
    assert_eq!(r.variant, GdFVariant::VanishesAtNegInf);
    assert!(gdf_identity_check(f.primitive(), &BVFunction::constant(1.0), tol).is_err());
}

#[test]
fn mean_value_examples() {
    let tol = 1e-9;
    let c = ContinuousFn2::new("c", |_| 0.375);
    let q = bv("quadrantIndicator", Params::new().with("x", 0.5).with("y", -0.5));
    let m = mean_value_point(&c, &q, tol).unwrap();
    assert_eq!(m.ratio, 0.375);
    assert_eq!(m.point, ExtPoint2::new(NINF, NINF));

    let f = cat("prodArctan");
    let m = mean_value_point(f.primitive(), &q, 1e-6).unwrap();
    assert_eq!(m.delta, 1.0);
    assert!((0.0..=1.0).contains(&m.ratio));
    assert!((f.primitive().value(m.point) - m.ratio).abs() <= 1e-6);

    let h = bv("halfPlaneIndicator", Params::new());
    assert_eq!(mean_value_point(f.primitive(), &h, tol).unwrap_err(), Error::DegenerateIntegrator);
    let neg = q.scaled(-1.0);
    assert!(matches!(mean_value_point(f.primitive(), &neg, tol), Err(Error::PreconditionViolation(_))));
}

fn finite_interval() -> impl Strategy<Value = Interval2> {
    (-6.0f64..6.0, 0.01f64..6.0, -6.0f64..6.0, 0.01f64..6.0).prop_map(|(a, w, c, h)| interval(a, a + w, c, c + h))
}

fn multiplier() -> impl Strategy<Value = BVFunction> {
    let p = (-4.0f64..4.0, -4.0f64..4.0, 0.5f64..4.0);
    prop_oneof![
        p.clone().prop_map(|(x, y, _)| bv("quadrantIndicator", Params::new().with("x", x).with("y", y))),
        p.clone().prop_map(|(x, y, w)| indicator(interval(x, x + w, y, y + w))),
        p.clone().prop_map(|(_, _, n)| bv("approxIdentity", Params::new().with("n", n))),
        p.clone().prop_map(|(_, _, n)| bv("approxIdentityReflected", Params::new().with("n", n))),
        p.prop_map(|(x, _, _)| BVFunction::constant(x)),
        Just(bv("halfPlaneIndicator", Params::new())),
    ]
}

fn distribution() -> impl Strategy<Value = Distribution> {
    prop_oneof![
        Just(cat("prodArctan")),
        Just(cat("gauss")),
        Just(cat("tentBump")),
        Just(cat("sinStrip")),
        Just(cat("boundaryBuild")),
        Just(cat("weier2d")),
    ]
}

fn smooth_distribution() -> impl Strategy<Value = Distribution> {
    prop_oneof![Just(cat("prodArctan")), Just(cat("gauss")), Just(cat("tentBump")), Just(cat("sinStrip"))]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn interval_indicator_reproduces_corner_integral(f in distribution(), i in finite_interval()) {
        let tol = 1e-8;
        let r = integrate_product(&f, &indicator(i), &Interval2::PLANE, tol).unwrap();
        let want = corner_difference(f.primitive(), &i).unwrap();
        prop_assert!((r.value - want).abs() <= 2.0 * tol, "{} vs {}", r.value, want);
    }

    #[test]
    fn holder_bound_on_quadrants(f in distribution(), g in multiplier(), x in -8.0f64..8.0, y in -8.0f64..8.0) {
        let tol = 1e-7;
        let i = Interval2 { a: NINF, b: e(x), c: NINF, d: e(y) };
        let v = integrate_product(&f, &g, &i, tol).unwrap();
        let norm = alexiewicz_norm(&f, tol).unwrap().value.max(f.primitive().value(ExtPoint2::of(x, y)).abs());
        let bvn = hk_norm_components(&g, tol).unwrap().0.value;
        prop_assert!(v.value.abs() <= norm * bvn + v.error_estimate + 2.0 * tol, "{} > {}", v.value, norm * bvn);
    }

    #[test]
    fn full_plane_bound(f in distribution(), g in multiplier()) {
        let tol = 1e-7;
        let v = integrate_product(&f, &g, &Interval2::PLANE, tol).unwrap();
        let c = hk_components_at(&g, 256).unwrap();
        let norm = alexiewicz_norm(&f, tol).unwrap().value;
        let bound = norm * (4.0 * c.sup + 2.0 * c.v1 + 2.0 * c.v2 + c.v12);
        prop_assert!(v.value.abs() <= bound + v.error_estimate + tol, "{} > {}", v.value, bound);
    }

    #[test]
    fn changing_a_grid_row_does_not_move_the_integral(f in distribution(), vals in prop::collection::vec(-3.0f64..3.0, 16), row in 1usize..4, z in -5.0f64..5.0) {
        let tol = 1e-8;
        let grid = Grid2::uniform(4).unwrap();
        let at = grid.ys()[row];
        let g = BVFunction::grid_constant("gc", GridConstant::new(grid, vals).unwrap());
        let changed = g.with_line_value(2, at, z).unwrap();
        let a = integrate_product(&f, &g, &Interval2::PLANE, tol).unwrap();
        let b = integrate_product(&f, &changed, &Interval2::PLANE, tol).unwrap();
        prop_assert!((a.value - b.value).abs() <= 2.0 * tol, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn bilinearity(f1 in smooth_distribution(), f2 in smooth_distribution(), g1 in multiplier(), g2 in multiplier(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let tol = 1e-6;
        let plane = Interval2::PLANE;
        let ip = |f: &Distribution, g: &BVFunction| integrate_product(f, g, &plane, tol).unwrap();
        let f = Distribution::linear_combination(s, &f1, t, &f2);
        // on one fixed division the sums are linear in the integrand
        let cells = tagged_division(&g1, &plane, 2);
        let fixed = |f: &Distribution| -> f64 {
            cells.iter().map(|c| f.primitive().value(c.tag) * corner_difference(&g1, &c.cell).unwrap()).sum()
        };
        let (lhs, rhs) = (fixed(&f), s * fixed(&f1) + t * fixed(&f2));
        prop_assert!((lhs - rhs).abs() <= 1e-12, "{lhs} vs {rhs}");
        let (w, a, b) = (ip(&f, &g1), ip(&f1, &g1), ip(&f2, &g1));
        let slack = w.error_estimate + s.abs() * a.error_estimate + t.abs() * b.error_estimate;
        prop_assert!((w.value - s * a.value - t * b.value).abs() <= 2.0 * tol + slack);
        let g = g1.scaled(s).plus(&g2.scaled(t));
        let whole = ip(&f1, &g);
        let (a, b) = (ip(&f1, &g1), ip(&f1, &g2));
        let rhs = s * a.value + t * b.value;
        let slack = whole.error_estimate + s.abs() * a.error_estimate + t.abs() * b.error_estimate;
        prop_assert!((whole.value - rhs).abs() <= 2.0 * tol + slack, "{} vs {rhs}", whole.value);
    }
}
