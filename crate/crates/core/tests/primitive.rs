use primint_core::primitive::{primitives_agree, validate_primitive, GridSample, BV_CATALOG, PRIMITIVE_CATALOG};
use primint_core::*;
use proptest::prelude::*;

#[test]
fn every_catalog_primitive_validates_at_64() {
    for name in PRIMITIVE_CATALOG {
        let p = catalog_primitive(name, &Params::new()).unwrap();
        let r = validate_primitive(&p, 64).unwrap();
        assert!(r.passed, "{name}: {r:?}");
        assert!(Distribution::validated(p, 64).is_ok());
    }
}

#[test]
fn primitive_without_vanishing_edges_is_rejected() {
    let bad = Primitive::closed_form("one", |_| 1.0);
    let r = validate_primitive(&bad, 16).unwrap();
    assert!(!r.boundary_ok && !r.passed);
    assert!(Distribution::validated(bad, 16).is_err());
    let jump = Primitive::closed_form("jump", |p| if p.x.value() > 0.0 && p.y.value() > 0.0 { 1.0 } else { 0.0 });
    let r = validate_primitive(&jump, 16).unwrap();
    assert!(r.boundary_ok && !r.continuity_ok);
}

#[test]
fn unknown_names_are_errors() {
    assert!(catalog_primitive("nope", &Params::new()).is_err());
    assert!(catalog_bv("nope", &Params::new()).is_err());
    assert!(catalog_primitive("sinStrip", &Params::new().with("n", -1.0)).is_err());
    for name in BV_CATALOG {
        assert!(catalog_bv(name, &Params::new()).is_ok(), "{name}");
    }
}

#[test]
fn uniqueness_surrogate() {
    let a = catalog_primitive("prodArctan", &Params::new()).unwrap();
    let b = Primitive::closed_form("copy", move |p| {
        let t = |v: f64| (std::f64::consts::FRAC_PI_2 + v.atan()) / std::f64::consts::PI;
        t(p.x.value()) * t(p.y.value())
    });
    assert!(primitives_agree(&a, &a.clone(), &[16, 32, 64], 0.0).unwrap());
    assert!(primitives_agree(&a, &b, &[16, 32, 64], 1e-15).unwrap());
    let g = catalog_primitive("gauss", &Params::new()).unwrap();
    assert!(!primitives_agree(&a, &g, &[16], 0.0).unwrap());
}

#[test]
fn grid_sample_reproduces_nodes() {
    let f = catalog_primitive("expRadial", &Params::new()).unwrap();
    let grid = Grid2::uniform(32).unwrap();
    let s = f.sample(&grid).unwrap();
    let gp = Primitive::grid_sample("sampled", s.clone());
    for (k, p) in grid.nodes().enumerate() {
        assert_eq!(gp.value(p), f.value(p));
        assert_eq!(s.values()[k], f.value(p));
    }
    assert!(GridSample::new(grid.clone(), vec![0.0; 3]).is_err());
    assert!(GridSample::new(grid, vec![f64::NAN; 33 * 33]).is_err());
}

fn max_adjacent(s: &GridSample) -> f64 {
    let n = s.grid().xs().len();
    let mut m: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i + 1 < n {
                m = m.max((s.node(i + 1, j) - s.node(i, j)).abs());
            }
            if j + 1 < n {
                m = m.max((s.node(i, j + 1) - s.node(i, j)).abs());
            }
        }
    }
    m
}

proptest! {
    #[test]
    fn grid_sample_is_lipschitz_in_chart_coordinates(
        u1 in -1.0f64..=1.0, v1 in -1.0f64..=1.0, u2 in -1.0f64..=1.0, v2 in -1.0f64..=1.0,
    ) {
        let r = 16;
        let f = catalog_primitive("sinc2d", &Params::new()).unwrap();
        let s = f.sample(&Grid2::uniform(r).unwrap()).unwrap();
        let lip = max_adjacent(&s) * r as f64;
        let ch = Chart;
        let p1 = ExtPoint2::new(ch.from_position(u1), ch.from_position(v1));
        let p2 = ExtPoint2::new(ch.from_position(u2), ch.from_position(v2));
        // positions after the chart round trip
        let (a1, b1) = (ch.position(p1.x), ch.position(p1.y));
        let (a2, b2) = (ch.position(p2.x), ch.position(p2.y));
        let dist = (a1 - a2).abs() + (b1 - b2).abs();
        prop_assert!((s.eval(p1) - s.eval(p2)).abs() <= lip * dist + 1e-12);
    }
}
