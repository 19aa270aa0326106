//! Named primitives.

use alloc::format;
use alloc::sync::Arc;

use super::special::{
    arctan_cdf, cantor, oscill_factor, ramp, sin_strip, tent, unit_chart, weierstrass, EdgeProfile, SiTable,
};
use super::{ContinuousFn2, Params, Primitive};
use crate::extplane::ExtPoint2;
use crate::num::{exp, floor, hypot, FRAC_PI_2};
use crate::{Error, Result};

pub const PRIMITIVE_CATALOG: &[&str] = &[
    "prodArctan",
    "sinc2d",
    "sincQuadrant",
    "weier2d",
    "cantor2d",
    "oscill",
    "expRadial",
    "gauss",
    "gauss2",
    "boundaryBuild",
    "sinStrip",
    "tentBump",
    "approxIdentity",
    "zero",
];

const WEIER_A_X: f64 = 0.5;
const WEIER_A_Y: f64 = 0.7;

/// Build a catalog primitive.
///
/// | name | primitive | parameters |
/// |---|---|---|
/// | `prodArctan` | `P(x)P(y)`, `P = (pi/2 + atan)/pi` | |
/// | `sinc2d` | `S(x)S(y)`, `S = pi/2 + Si` | |
/// | `sincQuadrant` | `Si(x)Si(y)` on the closed positive quadrant, else 0 | |
/// | `weier2d` | `W_a(x)W_b(y)` in the unit chart coordinate | `depth` (16) |
/// | `cantor2d` | `C(x)C(y)` in the unit chart coordinate | `depth` (20) |
/// | `oscill` | corrected `h(x)h(y)`, `h(t) = t^2 sin(t^-4)` | |
/// | `expRadial` | corrected `exp(-sqrt(x^2+y^2))` | |
/// | `gauss` | `exp(-(x-cx)^2-(y-cy)^2)` | `cx`, `cy` (0) |
/// | `gauss2` | member `which` of the pair centred at (0,0) and (1,1) | `which` (0) |
/// | `boundaryBuild` | edge-value construction from two profiles | `theta2`, `a2`, `c2`, `theta3`, `a3`, `c3` |
/// | `sinStrip` | `A_n(x) clamp(y,0,1)`, `A_n = int sin(n s)` on `(0, 2 pi)` | `n` (1) |
/// | `tentBump` | `tent(x-cx) tent(y-cy)` | `cx`, `cy` (0) |
/// | `approxIdentity` | `u_n(x)u_n(y)` | `n` (1) |
/// | `zero` | `0` | |
pub fn catalog_primitive(name: &str, params: &Params) -> Result<Primitive> {
    let inner = match name {
        "prodArctan" => Primitive::closed_form(name, |p| arctan_cdf(p.x.value()) * arctan_cdf(p.y.value())),
        "sinc2d" => {
            let t = Arc::new(SiTable::new());
            Primitive::closed_form(name, move |p| (FRAC_PI_2 + t.si(p.x.value())) * (FRAC_PI_2 + t.si(p.y.value())))
        }
        "sincQuadrant" => {
            let t = Arc::new(SiTable::new());
            Primitive::closed_form(name, move |p| {
                let (x, y) = (p.x.value(), p.y.value());
                if x < 0.0 || y < 0.0 {
                    0.0
                } else {
                    t.si(x) * t.si(y)
                }
            })
        }
        "weier2d" => {
            let depth = depth_param(params, 16)?;
            Primitive::closed_form(name, move |p| {
                weierstrass(unit_chart(p.x), WEIER_A_X, depth) * weierstrass(unit_chart(p.y), WEIER_A_Y, depth)
            })
        }
        "cantor2d" => {
            let depth = depth_param(params, 20)?;
            Primitive::closed_form(name, move |p| cantor(unit_chart(p.x), depth) * cantor(unit_chart(p.y), depth))
        }
        "oscill" => ContinuousFn2::new(name, |p| oscill_factor(p.x.value()) * oscill_factor(p.y.value()))
            .corrected()
            .with_label(name),
        "expRadial" => ContinuousFn2::new(name, |p| {
            let r = hypot(p.x.value(), p.y.value());
            exp(-r)
        })
        .corrected()
        .with_label(name),
        "gauss" => {
            let cx = params.num("cx", 0.0)?;
            let cy = params.num("cy", 0.0)?;
            gauss(name, cx, cy)
        }
        "gauss2" => match params.num("which", 0.0)? {
            w if w == 0.0 => gauss(name, 0.0, 0.0),
            w if w == 1.0 => gauss(name, 1.0, 1.0),
            w => return Err(Error::invalid(format!("gauss2: which must be 0 or 1, got {w}"))),
        },
        "boundaryBuild" => boundary_build(params)?,
        "sinStrip" => {
            let n = params.num("n", 1.0)?;
            if n <= 0.0 {
                return Err(Error::invalid("sinStrip: n must be positive"));
            }
            Primitive::closed_form(name, move |p| sin_strip(n, p.x.value()) * p.y.value().clamp(0.0, 1.0))
        }
        "tentBump" => {
            let cx = params.num("cx", 0.0)?;
            let cy = params.num("cy", 0.0)?;
            Primitive::closed_form(name, move |p| tent(p.x.value() - cx) * tent(p.y.value() - cy))
        }
        "approxIdentity" => {
            let n = params.num("n", 1.0)?;
            Primitive::closed_form(name, move |p| ramp(n, p.x.value()) * ramp(n, p.y.value()))
        }
        "zero" => Primitive::zero(),
        other => return Err(Error::invalid(format!("unknown catalog primitive: {other}"))),
    };
    Ok(Primitive::catalog_entry(name, params.clone(), inner))
}

fn depth_param(params: &Params, default: u32) -> Result<u32> {
    let d = params.num("depth", default as f64)?;
    if !(0.0..=64.0).contains(&d) || floor(d) != d {
        return Err(Error::invalid("depth must be an integer in 0..=64"));
    }
    Ok(d as u32)
}

fn gauss(name: &str, cx: f64, cy: f64) -> Primitive {
    Primitive::closed_form(name, move |p| {
        let (dx, dy) = (p.x.value() - cx, p.y.value() - cy);
        exp(-dx * dx - dy * dy)
    })
}

fn profile(params: &Params, which: &str, amp_key: &str, centre_key: &str) -> Result<EdgeProfile> {
    let amp = params.num(amp_key, 1.0)?;
    let center = params.num(centre_key, 0.0)?;
    match params.text(which).unwrap_or("ramp") {
        "ramp" => Ok(EdgeProfile::Ramp { amp }),
        "logistic" => Ok(EdgeProfile::Logistic { amp, center }),
        "bump" => Ok(EdgeProfile::Bump { amp, center }),
        other => Err(Error::invalid(format!("unknown edge profile: {other}"))),
    }
}

// Edge values F(x, inf) = theta2(x), F(inf, y) = theta3(y), zero on the lower edges.
fn boundary_build(params: &Params) -> Result<Primitive> {
    let t2 = profile(params, "theta2", "a2", "c2")?;
    let t3 = profile(params, "theta3", "a3", "c3")?;
    let top = t2.eval(f64::INFINITY);
    if top != t3.eval(f64::INFINITY) {
        return Err(Error::invalid("boundaryBuild: theta2(inf) and theta3(inf) must agree"));
    }
    let f = move |p: ExtPoint2| {
        let (x, y) = (p.x.value(), p.y.value());
        if top != 0.0 {
            t2.eval(x) * t3.eval(y) / top
        } else {
            t2.eval(x) * arctan_cdf(y) + t3.eval(y) * arctan_cdf(x)
        }
    };
    Ok(Primitive::closed_form("boundaryBuild", f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::PI;
    use crate::primitive::validate_primitive;

    #[test]
    fn every_entry_builds_and_validates() {
        for name in PRIMITIVE_CATALOG {
            let f = catalog_primitive(name, &Params::new()).unwrap();
            let r = validate_primitive(&f, 64).unwrap();
            assert!(r.passed, "{name}: {r:?}");
        }
        assert!(catalog_primitive("nope", &Params::new()).is_err());
    }

    #[test]
    fn boundary_build_has_requested_edges() {
        let p = Params::new().with("theta2", "logistic").with("a2", 2.0).with("theta3", "ramp").with("a3", 2.0);
        let f = catalog_primitive("boundaryBuild", &p).unwrap();
        for &t in &[-3.0, 0.0, 0.5, 4.0] {
            let top = f.eval(ExtPoint2::of(t, f64::INFINITY)).unwrap();
            assert!((top - EdgeProfile::Logistic { amp: 2.0, center: 0.0 }.eval(t)).abs() < 1e-15);
            let right = f.eval(ExtPoint2::of(f64::INFINITY, t)).unwrap();
            assert!((right - 2.0 * arctan_cdf(t)).abs() < 1e-15);
        }
        let bump = Params::new().with("theta2", "bump").with("theta3", "bump").with("c3", 1.0);
        let f = catalog_primitive("boundaryBuild", &bump).unwrap();
        let e = (-1.0f64).exp();
        assert!((f.eval(ExtPoint2::of(f64::INFINITY, 0.0)).unwrap() - e).abs() < 1e-15);
        let mismatch = Params::new().with("a2", 1.0).with("a3", 2.0);
        assert!(catalog_primitive("boundaryBuild", &mismatch).is_err());
    }

    #[test]
    fn sin_strip_sup_is_two_over_n() {
        let f = catalog_primitive("sinStrip", &Params::new().with("n", 4.0)).unwrap();
        let v = f.eval(ExtPoint2::of(PI / 4.0, 2.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }
}
