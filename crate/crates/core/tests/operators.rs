mod common;

use common::*;
use primint_core::integral::{alexiewicz_norm, corner_integral, grid_sup};
use primint_core::operators::*;
use primint_core::primitive::{primitives_agree, PRIMITIVE_CATALOG};
use primint_core::*;
use proptest::prelude::*;

const NINF: ExtReal = ExtReal::NEG_INF;
const PINF: ExtReal = ExtReal::POS_INF;

fn sup(f: &Primitive) -> f64 {
    grid_sup(f, 64).unwrap().0
}

fn difference(f: &Distribution, g: &Distribution) -> Distribution {
    Distribution::linear_combination(1.0, f, -1.0, g)
}

#[test]
fn translation_examples() {
    let tol = 1e-9;
    let f = cat("prodArctan");
    let t = translate(&f, 1.0, -2.0).unwrap();
    let (a, b) = (alexiewicz_norm(&f, tol).unwrap().value, alexiewicz_norm(&t, tol).unwrap().value);
    assert!((a - b).abs() <= 2.0 * tol, "{a} vs {b}");
    let same = translate(&f, 0.0, 0.0).unwrap();
    assert!(primitives_agree(f.primitive(), same.primitive(), &[16, 32, 64], 0.0).unwrap());
    assert!(translate(&f, f64::INFINITY, 0.0).is_err());
    // boundary values stay put
    for y in [-3.0, 0.0, 7.0] {
        assert_eq!(t.primitive().value(ExtPoint2::new(NINF, e(y))), 0.0);
        assert_eq!(t.primitive().value(ExtPoint2::new(PINF, e(y))), f.primitive().value(ExtPoint2::of(INF, y + 2.0)));
    }
}

#[test]
fn translation_is_continuous_in_norm() {
    for name in ["prodArctan", "gauss", "sinStrip"] {
        let f = cat(name);
        let gaps: Vec<f64> = (1..=6)
            .map(|k| {
                let h = 0.5f64.powi(k);
                alexiewicz_norm(&difference(&f, &translate(&f, h, -h).unwrap()), 1e-9).unwrap().value
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{name}: {gaps:?}");
    }
}

#[test]
fn change_of_variables_examples() {
    let f = cat("prodArctan");
    let i = Interval2 { a: e(0.0), b: PINF, c: e(0.0), d: e(1.0) };
    let direct = corner_integral(&f, &make_interval(i.a, i.b, i.c, i.d)).unwrap();
    assert_eq!(change_of_variables(&f, &LinearAxisMap::identity(), &i).unwrap(), direct);
    let flip = LinearAxisMap::new(AxisMapKind::Straight, -1.0, 1.0, 0.0, 0.0).unwrap();
    assert_eq!(change_of_variables(&f, &flip, &i).unwrap(), direct);

    let s = cat("sinc2d");
    let pi = std::f64::consts::PI;
    let sq = Interval2 { a: e(0.0), b: e(pi), c: e(0.0), d: e(pi) };
    let swapped = LinearAxisMap::new(AxisMapKind::Swapped, 1.0, 1.0, 0.0, 0.0).unwrap();
    let v = change_of_variables(&s, &swapped, &sq).unwrap();
    let w = corner_integral(&s, &make_interval(sq.a, sq.b, sq.c, sq.d)).unwrap();
    assert!(within_ulps(v, w, corner_scale(&s, &sq), 4.0), "{v} vs {w}");

    assert!(LinearAxisMap::new(AxisMapKind::Straight, 0.0, 1.0, 0.0, 0.0).is_err());
    assert!(LinearAxisMap::new(AxisMapKind::Swapped, 1.0, 0.0, 0.0, 0.0).is_err());
}

#[test]
fn lattice_examples() {
    let f = cat("sinc2d");
    assert!(primitives_agree(&lattice_join(f.primitive(), f.primitive()), f.primitive(), &[32], 0.0).unwrap());
    let (g0, g1) = (cat_with("gauss2", Params::new().with("which", 0.0)), cat_with("gauss2", Params::new().with("which", 1.0)));
    let j = lattice_join(g0.primitive(), g1.primitive());
    let m = lattice_meet(g0.primitive(), g1.primitive());
    for p in Grid2::uniform(32).unwrap().nodes() {
        let (a, b) = (g0.primitive().value(p), g1.primitive().value(p));
        assert!(j.value(p) >= a && j.value(p) >= b);
        assert!(m.value(p) <= a && m.value(p) <= b);
    }
}

const NONNEG: &[&str] = &["prodArctan", "gauss", "tentBump", "sincQuadrant", "cantor2d", "weier2d", "approxIdentity", "zero"];

#[test]
fn join_norm_is_the_larger_norm() {
    for a in NONNEG {
        for b in NONNEG {
            let (f, g) = (cat(a), cat(b));
            let j = lattice_join(f.primitive(), g.primitive());
            let want = sup(f.primitive()).max(sup(g.primitive()));
            assert!(within_ulps(sup(&j), want, want, 4.0), "{a} v {b}");
        }
    }
}

#[test]
fn sum_norm_can_fall_short_of_the_sum_of_norms() {
    let (g0, g1) = (cat_with("gauss2", Params::new().with("which", 0.0)), cat_with("gauss2", Params::new().with("which", 1.0)));
    let tol = 1e-9;
    let s = alexiewicz_norm(&Distribution::linear_combination(1.0, &g0, 1.0, &g1), tol).unwrap().value;
    let n0 = alexiewicz_norm(&g0, tol).unwrap().value;
    let n1 = alexiewicz_norm(&g1, tol).unwrap().value;
    assert!(s < n0 + n1 - 0.1, "{s} vs {}", n0 + n1);
    assert!(!order_leq(&g0, &g1, 64).unwrap());
    assert!(!order_leq(&g1, &g0, 64).unwrap());
}

#[test]
fn jordan_decomposition() {
    let q = cat("sincQuadrant");
    let (plus, minus, _) = jordan_parts(&q);
    assert!(primitives_agree(plus.primitive(), q.primitive(), &[16, 32, 64], 0.0).unwrap());
    assert!(primitives_agree(minus.primitive(), &Primitive::zero(), &[16, 32, 64], 0.0).unwrap());
    assert!(order_leq(&Distribution::zero(), &q, 64).unwrap());

    for f in all_catalog() {
        let (plus, minus, abs) = jordan_parts(&f);
        for p in Grid2::uniform(32).unwrap().nodes() {
            assert_eq!(plus.primitive().value(p) - minus.primitive().value(p), f.primitive().value(p));
        }
        assert_eq!(sup(abs.primitive()), sup(f.primitive()), "{}", f.label());
        let (a, b) = (alexiewicz_norm(&abs, 1e-9).unwrap().value, alexiewicz_norm(&f, 1e-9).unwrap().value);
        assert!((a - b).abs() <= 2e-9, "{}: {a} vs {b}", f.label());
    }
}

#[test]
fn order_is_positivity_of_quadrant_integrals() {
    let names = ["zero", "prodArctan", "gauss", "tentBump", "sincQuadrant", "gauss2"];
    let grid = Grid2::uniform(16).unwrap();
    for a in names {
        let f = cat(a);
        assert!(order_leq(&f, &f, 64).unwrap());
        for b in names {
            let g = cat(b);
            let by_integrals = grid.nodes().all(|p| {
                let q = make_interval(NINF, p.x, NINF, p.y);
                corner_integral(&f, &q).unwrap() <= corner_integral(&g, &q).unwrap() + ORDER_SLACK
            });
            assert_eq!(order_leq(&f, &g, 16).unwrap(), by_integrals, "{a} <= {b}");
        }
    }
}

#[test]
fn algebra_examples() {
    let a = cat("tentBump");
    let b = cat_with("tentBump", Params::new().with("cx", 5.0).with("cy", 5.0));
    let ab = algebra_product(&a, &b);
    assert!(sup(a.primitive()) > 0.0 && sup(b.primitive()) > 0.0);
    assert!(primitives_agree(ab.primitive(), &Primitive::zero(), &[16, 32, 64], 0.0).unwrap());

    for name in ["prodArctan", "sinc2d", "expRadial"] {
        let f = cat(name);
        let gaps: Vec<f64> = [4.0, 8.0, 16.0]
            .iter()
            .map(|&n| {
                let u = approx_identity(n).unwrap();
                alexiewicz_norm(&difference(&f, &algebra_product(&u, &f)), 1e-9).unwrap().value
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{name}: {gaps:?}");
    }
}

#[test]
fn convergence_examples() {
    let f = cat("prodArctan");
    let g = catalog_bv("quadrantIndicator", &Params::new().with("x", 0.5)).unwrap();
    let r = convergence_limit(&f, &[g.clone(), g.clone(), g.clone()], &g, 1e-6).unwrap();
    assert_eq!(r.differences, vec![0.0; 3]);
    assert_eq!(r.threshold, Some(0));

    let seq: Vec<BVFunction> =
        [1.0, 4.0, 16.0, 64.0, 256.0].iter().map(|&n| catalog_bv("approxIdentity", &Params::new().with("n", n)).unwrap()).collect();
    let one = BVFunction::constant(1.0);
    let oracle = stieltjes::integrate_product(&f, &one, &Interval2::PLANE, 1e-9).unwrap().value;
    let r = convergence_limit(&f, &seq, &one, 1e-2).unwrap();
    assert_eq!(r.limit, oracle);
    assert!(r.differences.windows(2).all(|w| w[1] <= w[0]), "{:?}", r.differences);
    assert!(r.eventually_within);

    let (x, y) = (0.3, -1.2);
    let (seq, lim) = quadrant_sequence(x, y, 20).unwrap();
    let r = convergence_limit(&f, &seq, &lim, 1e-4).unwrap();
    assert!((r.limit - f.primitive().value(ExtPoint2::of(x, y))).abs() < 1e-6);
    let k = r.threshold.expect("eventually within");
    assert!(r.differences[k..].iter().all(|d| *d <= 1e-4));
    assert!(r.bound <= 9.0);
    assert_eq!(r.sampling_resolution, SAMPLING_RESOLUTION);

    let diag = catalog_bv("diagonalIndicator", &Params::new()).unwrap();
    assert!(matches!(convergence_limit(&f, &[diag], &g, 1e-4), Err(Error::PreconditionViolation(_))));
}

fn dyadic() -> impl Strategy<Value = f64> {
    (-64i32..=64).prop_map(|k| k as f64 / 8.0)
}

fn ext_dyadic() -> impl Strategy<Value = ExtReal> {
    prop_oneof![1 => Just(NINF), 1 => Just(PINF), 6 => dyadic().prop_map(ExtReal::of)]
}

fn axis_map() -> impl Strategy<Value = LinearAxisMap> {
    let scale = (-3i32..=3, any::<bool>()).prop_map(|(k, neg)| if neg { -(2f64.powi(k)) } else { 2f64.powi(k) });
    (any::<bool>(), scale.clone(), scale, dyadic(), dyadic()).prop_map(|(sw, a, b, g1, g2)| {
        let kind = if sw { AxisMapKind::Swapped } else { AxisMapKind::Straight };
        LinearAxisMap::new(kind, a, b, g1, g2).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn change_of_variables_matches_corner_integral(
        k in 0..PRIMITIVE_CATALOG.len(), m in axis_map(),
        mut x in prop::array::uniform2(ext_dyadic()), mut y in prop::array::uniform2(ext_dyadic()),
    ) {
        x.sort();
        y.sort();
        let f = cat(PRIMITIVE_CATALOG[k]);
        let i = Interval2 { a: x[0], b: x[1], c: y[0], d: y[1] };
        let v = change_of_variables(&f, &m, &i).unwrap();
        let w = corner_integral(&f, &make_interval(i.a, i.b, i.c, i.d)).unwrap();
        prop_assert!(within_ulps(v, w, corner_scale(&f, &i), 4.0), "{v} vs {w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn distributive_and_modular(k in prop::array::uniform3(0..PRIMITIVE_CATALOG.len())) {
        let [a, b, c] = k.map(|i| catalog_primitive(PRIMITIVE_CATALOG[i], &Params::new()).unwrap());
        let lhs = lattice_meet(&a, &lattice_join(&b, &c));
        let rhs = lattice_join(&lattice_meet(&a, &b), &lattice_meet(&a, &c));
        let lhs2 = lattice_join(&a, &lattice_meet(&b, &c));
        let rhs2 = lattice_meet(&lattice_join(&a, &b), &lattice_join(&a, &c));
        let (j, m) = (lattice_join(&a, &b), lattice_meet(&a, &b));
        for p in Grid2::uniform(32).unwrap().nodes() {
            prop_assert_eq!(lhs.value(p), rhs.value(p));
            prop_assert_eq!(lhs2.value(p), rhs2.value(p));
            prop_assert_eq!(j.value(p) + m.value(p), a.value(p) + b.value(p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_is_submultiplicative(k in prop::array::uniform2(0..PRIMITIVE_CATALOG.len())) {
        let [a, b] = k.map(|i| cat(PRIMITIVE_CATALOG[i]));
        let ab = algebra_product(&a, &b);
        let bound = sup(a.primitive()) * sup(b.primitive());
        prop_assert!(sup(ab.primitive()) <= bound + 4.0 * f64::EPSILON * bound);
    }

    #[test]
    fn translation_shifts_intervals(
        k in 0..PRIMITIVE_CATALOG.len(), s in dyadic(), t in dyadic(),
        mut x in prop::array::uniform2(ext_dyadic()), mut y in prop::array::uniform2(ext_dyadic()),
    ) {
        x.sort();
        y.sort();
        let f = cat(PRIMITIVE_CATALOG[k]);
        let tf = translate(&f, s, t).unwrap();
        let moved = make_interval(x[0].shifted(-s), x[1].shifted(-s), y[0].shifted(-t), y[1].shifted(-t));
        let v = corner_integral(&tf, &moved).unwrap();
        let w = corner_integral(&f, &make_interval(x[0], x[1], y[0], y[1])).unwrap();
        prop_assert_eq!(v, w);
    }
}
