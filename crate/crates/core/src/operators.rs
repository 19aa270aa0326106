//! Translation, linear changes of variables, lattice and algebra
//! operations on primitives, and the bounded convergence theorem.

use alloc::format;
use alloc::vec::Vec;

use crate::extplane::{ExtPoint2, ExtReal, Grid2, Interval2};
use crate::integral::quadrant_probe;
use crate::primitive::{catalog_primitive, BVFunction, Distribution, Field2, Params, Primitive};
use crate::stieltjes::integrate_product;
use crate::variation::hk_norm;
use crate::{Error, Result};

/// `tau_(s,t) f`, with primitive `(x, y) -> F(x - s, y - t)`.
pub fn translate(f: &Distribution, s: f64, t: f64) -> Result<Distribution> {
    if !s.is_finite() || !t.is_finite() {
        return Err(Error::invalid("translation must be finite"));
    }
    if s == 0.0 && t == 0.0 {
        return Ok(f.clone());
    }
    let prim = f.primitive().clone();
    let label = format!("tau({s},{t}) {}", prim.label());
    Ok(Distribution::new(Primitive::closed_form(label, move |p| {
        prim.value(ExtPoint2::new(p.x.shifted(s), p.y.shifted(t)))
    })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisMapKind {
    /// `(u, v) -> (alpha u + gamma1, beta v + gamma2)`
    Straight,
    /// `(u, v) -> (alpha v + gamma1, beta u + gamma2)`
    Swapped,
}

/// A per-axis affine map. Rotations are not expressible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAxisMap {
    pub kind: AxisMapKind,
    pub alpha: f64,
    pub beta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl LinearAxisMap {
    pub fn new(kind: AxisMapKind, alpha: f64, beta: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let m = LinearAxisMap { kind, alpha, beta, gamma1, gamma2 };
        m.check()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        LinearAxisMap { kind: AxisMapKind::Straight, alpha: 1.0, beta: 1.0, gamma1: 0.0, gamma2: 0.0 }
    }

    fn check(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite();
        if !(ok(self.alpha) && ok(self.beta) && ok(self.gamma1) && ok(self.gamma2)) {
            return Err(Error::invalid("map coefficients must be finite"));
        }
        if self.alpha == 0.0 || self.beta == 0.0 {
            return Err(Error::invalid("alpha and beta must be nonzero"));
        }
        Ok(())
    }
}

// (t - gamma) / k on the extended line; infinities keep or flip sign with k.
fn pull_back(t: ExtReal, gamma: f64, k: f64) -> ExtReal {
    ExtReal::raw((t.value() - gamma) / k)
}

fn push(u: ExtReal, k: f64, gamma: f64) -> ExtReal {
    ExtReal::raw(k * u.value() + gamma)
}

/// `int int_I f` computed on the transformed side: the primitive of
/// `alpha beta f(map(u, v))` is `F o map`, and its corner formula over the
/// pulled-back limits (in their natural, possibly reversed order) gives the
/// same oriented integral.
pub fn change_of_variables(f: &Distribution, m: &LinearAxisMap, i: &Interval2) -> Result<f64> {
    m.check()?;
    let prim = f.primitive();
    let (a, b) = (pull_back(i.a, m.gamma1, m.alpha), pull_back(i.b, m.gamma1, m.alpha));
    let (c, d) = (pull_back(i.c, m.gamma2, m.beta), pull_back(i.d, m.gamma2, m.beta));
    let g = |u: ExtReal, v: ExtReal| -> Result<f64> {
        match m.kind {
            AxisMapKind::Straight => prim.eval(ExtPoint2::new(push(u, m.alpha, m.gamma1), push(v, m.beta, m.gamma2))),
            AxisMapKind::Swapped => prim.eval(ExtPoint2::new(push(v, m.alpha, m.gamma1), push(u, m.beta, m.gamma2))),
        }
    };
    match m.kind {
        AxisMapKind::Straight => Ok(g(a, c)? + g(b, d)? - g(a, d)? - g(b, c)?),
        // u spans the y-limits, v the x-limits
        AxisMapKind::Swapped => Ok(g(c, a)? + g(d, b)? - g(d, a)? - g(c, b)?),
    }
}

/// `F1 v F2`, pointwise maximum.
pub fn lattice_join(f1: &Primitive, f2: &Primitive) -> Primitive {
    let (a, b) = (f1.clone(), f2.clone());
    Primitive::closed_form(format!("({}) v ({})", f1.label(), f2.label()), move |p| a.value(p).max(b.value(p)))
}

/// `F1 ^ F2`, pointwise minimum.
pub fn lattice_meet(f1: &Primitive, f2: &Primitive) -> Primitive {
    let (a, b) = (f1.clone(), f2.clone());
    Primitive::closed_form(format!("({}) ^ ({})", f1.label(), f2.label()), move |p| a.value(p).min(b.value(p)))
}

/// `(f+, f-, |f|)` with primitives `max(F, 0)`, `max(-F, 0)` and `|F|`.
pub fn jordan_parts(f: &Distribution) -> (Distribution, Distribution, Distribution) {
    let label = f.label();
    let (p, m, a) = (f.primitive().clone(), f.primitive().clone(), f.primitive().clone());
    (
        Distribution::new(Primitive::closed_form(format!("({label})+"), move |q| p.value(q).max(0.0))),
        Distribution::new(Primitive::closed_form(format!("({label})-"), move |q| (-m.value(q)).max(0.0))),
        Distribution::new(Primitive::closed_form(format!("|{label}|"), move |q| a.value(q).abs())),
    )
}

/// One-sided slack of [`order_leq`].
pub const ORDER_SLACK: f64 = 1e-12;

/// `f1 <= f2`: `F1 <= F2 + 1e-12` at every node of the uniform grid.
pub fn order_leq(f1: &Distribution, f2: &Distribution, resolution: usize) -> Result<bool> {
    for p in Grid2::uniform(resolution)?.nodes() {
        if f1.eval(p)? > f2.eval(p)? + ORDER_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f1 f2 = d12 (F1 F2)`.
pub fn algebra_product(f1: &Distribution, f2: &Distribution) -> Distribution {
    let (a, b) = (f1.primitive().clone(), f2.primitive().clone());
    Distribution::new(Primitive::closed_form(format!("({}) * ({})", f1.label(), f2.label()), move |p| {
        a.value(p) * b.value(p)
    }))
}

/// The approximate identity `U_n`, primitive `u_n(x) u_n(y)`.
pub fn approx_identity(n: f64) -> Result<Distribution> {
    Ok(Distribution::new(catalog_primitive("approxIdentity", &Params::new().with("n", n))?))
}

/// Integrals against a sequence of multipliers and against their limit.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `int int f g_n`
    pub values: Vec<f64>,
    /// `int int f g`
    pub limit: f64,
    pub differences: Vec<f64>,
    /// First index from which every difference is within `tol`.
    pub threshold: Option<usize>,
    pub eventually_within: bool,
    /// `max_n ||g_n||_bv`
    pub bound: f64,
    /// Largest `|g_n - g|` over the sampling grid, per `n`.
    pub pointwise_gap: Vec<f64>,
    pub sampling_resolution: usize,
}

const BOUND_TOL: f64 = 1e-6;
/// Grid on which pointwise convergence of the multipliers is sampled.
pub const SAMPLING_RESOLUTION: usize = 64;

/// Bounded convergence for the product integral: checks the uniform
/// variation bound, samples pointwise convergence on a grid, and reports the
/// integrals.
pub fn convergence_limit(
    f: &Distribution,
    g_seq: &[BVFunction],
    g_limit: &BVFunction,
    tol: f64,
) -> Result<ConvergenceReport> {
    if g_seq.is_empty() {
        return Err(Error::invalid("empty multiplier sequence"));
    }
    let mut bound: f64 = 0.0;
    for g in g_seq.iter().chain(core::iter::once(g_limit)) {
        let hk = hk_norm(g, BOUND_TOL)?;
        if hk.diverged {
            return Err(Error::precondition(format!("||{}||_bv is unbounded", g.label())));
        }
        bound = bound.max(hk.value);
    }
    let grid = Grid2::uniform(SAMPLING_RESOLUTION)?;
    let mut pointwise_gap = Vec::with_capacity(g_seq.len());
    for g in g_seq {
        let mut gap: f64 = 0.0;
        for p in grid.nodes() {
            gap = gap.max((g.eval(p)? - g_limit.eval(p)?).abs());
        }
        pointwise_gap.push(gap);
    }
    let plane = Interval2::PLANE;
    let limit = integrate_product(f, g_limit, &plane, tol / 4.0)?.value;
    let values =
        g_seq.iter().map(|g| Ok(integrate_product(f, g, &plane, tol / 4.0)?.value)).collect::<Result<Vec<_>>>()?;
    let differences: Vec<f64> = values.iter().map(|v| (v - limit).abs()).collect();
    let threshold = differences.iter().rposition(|d| *d > tol).map_or(Some(0), |k| {
        if k + 1 < differences.len() {
            Some(k + 1)
        } else {
            None
        }
    });
    Ok(ConvergenceReport {
        values,
        limit,
        differences,
        threshold,
        eventually_within: threshold.is_some(),
        bound,
        pointwise_gap,
        sampling_resolution: SAMPLING_RESOLUTION,
    })
}

/// Quadrant indicators `chi_[-inf,x_n) x [-inf,y_n)` with `x_n = x - 2^-n`,
/// `y_n = y - 2^-n` for `n = 1..=count`, and the limit indicator at `(x, y)`,
/// all scaled by 4 so they are plain indicators.
pub fn quadrant_sequence(x: f64, y: f64, count: u32) -> Result<(Vec<BVFunction>, BVFunction)> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::invalid("limit point must be finite"));
    }
    let seq = (1..=count)
        .map(|n| {
            let h = libm::ldexp(1.0, -(n as i32));
            quadrant_probe(ExtReal::of(x - h), ExtReal::of(y - h)).scaled(4.0)
        })
        .collect();
    Ok((seq, quadrant_probe(ExtReal::of(x), ExtReal::of(y)).scaled(4.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::corner_integral;
    use crate::make_interval;

    fn cat(name: &str) -> Distribution {
        Distribution::new(catalog_primitive(name, &Params::new()).unwrap())
    }

    #[test]
    fn reflected_map_matches_corner_integral() {
        let f = cat("prodArctan");
        let e = ExtReal::of;
        let i = Interval2 { a: e(0.0), b: ExtReal::POS_INF, c: e(0.0), d: e(1.0) };
        let m = LinearAxisMap::new(AxisMapKind::Straight, -1.0, 1.0, 0.0, 0.0).unwrap();
        let want = corner_integral(&f, &i.into()).unwrap();
        assert_eq!(change_of_variables(&f, &m, &i).unwrap(), want);
        assert!(LinearAxisMap::new(AxisMapKind::Straight, 0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn swapped_map_on_symmetric_integrand() {
        let f = cat("sinc2d");
        let pi = ExtReal::of(core::f64::consts::PI);
        let i = make_interval(ExtReal::ZERO, pi, ExtReal::ZERO, pi);
        let m = LinearAxisMap::new(AxisMapKind::Swapped, 1.0, 1.0, 0.0, 0.0).unwrap();
        let got = change_of_variables(&f, &m, &i.interval).unwrap();
        assert!(crate::num::ulps_between(got, corner_integral(&f, &i).unwrap()) <= 4);
    }

    #[test]
    fn gauss_pair_is_incomparable() {
        let (f, g) = (
            Distribution::new(catalog_primitive("gauss2", &Params::new().with("which", 0.0)).unwrap()),
            Distribution::new(catalog_primitive("gauss2", &Params::new().with("which", 1.0)).unwrap()),
        );
        assert!(!order_leq(&f, &g, 32).unwrap());
        assert!(!order_leq(&g, &f, 32).unwrap());
        assert!(order_leq(&f, &f, 32).unwrap());
    }

    #[test]
    fn constant_sequence_has_zero_differences() {
        let f = cat("prodArctan");
        let g = BVFunction::constant(1.0);
        let r = convergence_limit(&f, &[g.clone(), g.clone()], &g, 1e-9).unwrap();
        assert_eq!(r.differences, [0.0, 0.0]);
        assert_eq!(r.threshold, Some(0));
    }
}
