#![allow(dead_code)]

use primint_core::primitive::PRIMITIVE_CATALOG;
use primint_core::*;

pub fn cat(name: &str) -> Distribution {
    Distribution::new(catalog_primitive(name, &Params::new()).unwrap())
}

pub fn cat_with(name: &str, params: Params) -> Distribution {
    Distribution::new(catalog_primitive(name, &params).unwrap())
}

pub fn all_catalog() -> Vec<Distribution> {
    PRIMITIVE_CATALOG.iter().map(|n| cat(n)).collect()
}

/// `|a - b| <= k ulp(scale)`: floating-point agreement relative to the
/// magnitude of the terms that were combined.
pub fn within_ulps(a: f64, b: f64, scale: f64, k: f64) -> bool {
    (a - b).abs() <= k * f64::EPSILON * scale.abs().max(f64::MIN_POSITIVE)
}

pub fn corner_scale(f: &Distribution, i: &Interval2) -> f64 {
    i.corner_points().iter().map(|&p| f.primitive().value(p).abs()).fold(0.0, f64::max)
}

pub fn e(v: f64) -> ExtReal {
    ExtReal::of(v)
}

pub const INF: f64 = f64::INFINITY;
