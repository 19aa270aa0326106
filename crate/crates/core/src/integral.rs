//! The corner-formula integral, the Alexiewicz norm and its equivalent
//! norms, iterated integrals and the n-dimensional corner formula.

use alloc::vec::Vec;

use crate::extplane::{refine_partition, ExtPoint2, ExtReal, Grid2, Interval2, OrientedInterval};
use crate::num::{exp, ln_1p};
use crate::primitive::{Bv1, BVFunction, Distribution, Field2};
use crate::quad::{adaptive, maps};
use crate::stieltjes::integrate_product;
use crate::variation::hk_norm;
use crate::{Error, Result};

/// Outcome of a refinement-to-tolerance computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of refinements performed.
    pub depth: u32,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        QuadResult { value, error_estimate: 0.0, depth: 0, converged: true }
    }
}

/// `F(a,c) + F(b,d) - F(a,d) - F(b,c)`, evaluated in that order.
pub fn corner_difference<F: Field2 + ?Sized>(f: &F, i: &Interval2) -> Result<f64> {
    if i.is_degenerate() {
        return Ok(0.0);
    }
    let [ac, bd, ad, bc] = i.corner_points();
    Ok(f.eval(ac)? + f.eval(bd)? - f.eval(ad)? - f.eval(bc)?)
}

/// Integral of `f` over an oriented interval: the corner difference of its
/// primitive times the orientation sign. Degenerate intervals give exactly 0.
pub fn corner_integral(f: &Distribution, i: &OrientedInterval) -> Result<f64> {
    if i.degenerate {
        return Ok(0.0);
    }
    let v = corner_difference(f.primitive(), &i.interval)?;
    Ok(if i.sign < 0.0 { -v } else { v })
}

/// Largest `|F|` over the nodes of the uniform grid of the given resolution,
/// with its location (first in row-major order on ties).
pub fn grid_sup<F: Field2 + ?Sized>(f: &F, resolution: usize) -> Result<(f64, ExtPoint2)> {
    let grid = Grid2::uniform(resolution)?;
    let mut best = (f64::NEG_INFINITY, ExtPoint2::new(ExtReal::NEG_INF, ExtReal::NEG_INF));
    for p in grid.nodes() {
        let v = f.eval(p)?.abs();
        if v > best.0 {
            best = (v, p);
        }
    }
    Ok(best)
}

/// Grid schedule for sup-norm estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupOptions {
    pub start: usize,
    pub max_depth: u32,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions { start: 32, max_depth: 6 }
    }
}

/// A sup-norm estimate with the point where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub quad: QuadResult,
    pub argmax: ExtPoint2,
    pub resolution: usize,
}

/// `sup |F|` over the extended plane: nested grid sweeps with doubling
/// resolution, each followed by a local pattern search around the best node.
/// Stops when successive estimates differ by at most `tol`.
pub fn alexiewicz_sup<F: Field2 + ?Sized>(f: &F, tol: f64, opts: SupOptions) -> Result<SupEstimate> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if opts.start < 2 {
        return Err(Error::invalid("start resolution must be at least 2"));
    }
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut prev = f64::NAN;
    let mut out = None;
    for depth in 0..=opts.max_depth {
        let r = opts.start << depth;
        let step = 2.0 / r as f64;
        for j in 0..=r {
            let v = j as f64 * step - 1.0;
            for i in 0..=r {
                if depth > 0 && i % 2 == 0 && j % 2 == 0 {
                    continue;
                }
                let u = i as f64 * step - 1.0;
                let val = eval_chart(f, u, v)?.abs();
                if val > best.0 {
                    best = (val, u, v);
                }
            }
        }
        best = polish(f, best, step)?;
        let est = best.0;
        let change = (est - prev).abs();
        let done = depth > 0 && change <= tol;
        out = Some(SupEstimate {
            quad: QuadResult {
                value: est,
                error_estimate: if depth == 0 { f64::INFINITY } else { change },
                depth,
                converged: done,
            },
            argmax: chart_point(best.1, best.2),
            resolution: r,
        });
        if done {
            break;
        }
        prev = est;
    }
    Ok(out.expect("at least one sweep"))
}

/// The Alexiewicz norm `||f|| = ||F||_inf`.
pub fn alexiewicz_norm(f: &Distribution, tol: f64) -> Result<QuadResult> {
    Ok(alexiewicz_sup(f.primitive(), tol, SupOptions::default())?.quad)
}

fn chart_point(u: f64, v: f64) -> ExtPoint2 {
    ExtPoint2::new(crate::extplane::from_position(u), crate::extplane::from_position(v))
}

fn eval_chart<F: Field2 + ?Sized>(f: &F, u: f64, v: f64) -> Result<f64> {
    f.eval(chart_point(u, v))
}

// Compass search on |F| in chart coordinates, starting one grid step wide.
fn polish<F: Field2 + ?Sized>(f: &F, start: (f64, f64, f64), step: f64) -> Result<(f64, f64, f64)> {
    let (mut best, mut u, mut v) = start;
    let mut h = step;
    let dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let mut evals = 0;
    while h > 1e-13 && evals < 2000 {
        let mut moved = false;
        for (du, dv) in dirs {
            let (nu, nv) = ((u + du * h).clamp(-1.0, 1.0), (v + dv * h).clamp(-1.0, 1.0));
            let val = eval_chart(f, nu, nv)?.abs();
            evals += 1;
            if val > best {
                best = val;
                u = nu;
                v = nv;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    Ok((best, u, v))
}

/// `||f||' = sup_I |int_I f|` over intervals with grid-node corners.
///
/// For each pair of grid rows the best interval is `max h - min h` with
/// `h(x) = F(x,d) - F(x,c)`. The estimate is never below the Alexiewicz
/// estimate, since quadrants are intervals.
pub fn norm_prime(f: &Distribution, tol: f64) -> Result<QuadResult> {
    const START: usize = 32;
    const MAX_DEPTH: u32 = 4;
    let sup = alexiewicz_sup(f.primitive(), tol, SupOptions::default())?;
    let mut prev = f64::NAN;
    let mut result = QuadResult::exact(0.0);
    for depth in 0..=MAX_DEPTH {
        let r = START << depth;
        let sample = f.primitive().sample(&Grid2::uniform(r)?)?;
        let n = r + 1;
        let mut best: f64 = 0.0;
        for j1 in 0..n {
            for j2 in j1 + 1..n {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for i in 0..n {
                    let h = sample.node(i, j2) - sample.node(i, j1);
                    lo = lo.min(h);
                    hi = hi.max(h);
                }
                best = best.max(hi - lo);
            }
        }
        let est = best.max(sup.quad.value);
        let change = (est - prev).abs();
        let done = depth > 0 && change <= tol;
        result = QuadResult {
            value: est,
            error_estimate: if depth == 0 { f64::INFINITY } else { change },
            depth,
            converged: done && sup.quad.converged,
        };
        if done {
            break;
        }
        prev = est;
    }
    Ok(result)
}

/// Quadrant indicators `(1/4) chi_[-inf,x) x [-inf,y)` at the nodes of the
/// uniform grid of the given resolution, skipping the empty ones.
pub fn standard_probes(resolution: usize) -> Result<Vec<BVFunction>> {
    let grid = Grid2::uniform(resolution)?;
    Ok(grid
        .nodes()
        .filter(|p| !p.x.is_neg_inf() && !p.y.is_neg_inf())
        .map(|p| quadrant_probe(p.x, p.y))
        .collect())
}

/// `(1/4) chi_[-inf,x) x [-inf,y)`, of Hardy-Krause norm 1.
pub fn quadrant_probe(x: ExtReal, y: ExtReal) -> BVFunction {
    let ninf = ExtReal::NEG_INF;
    BVFunction::product(
        alloc::format!("probe({x},{y})"),
        Bv1::Indicator { lo: ninf, hi: x, lo_closed: true, hi_closed: false },
        Bv1::Indicator { lo: ninf, hi: y, lo_closed: true, hi_closed: false },
    )
    .scaled(0.25)
}

/// Lower bound for `||f||'' = sup { |int fg| : ||g||_bv <= 1 }` over the
/// given probes. Probes of norm above 1 are scaled down first.
pub fn norm_dual(f: &Distribution, probes: &[BVFunction], tol: f64) -> Result<f64> {
    let mut best: f64 = 0.0;
    for g in probes {
        let hk = hk_norm(g, tol)?;
        if hk.diverged {
            return Err(Error::invalid(alloc::format!("probe {} has unbounded variation", g.label())));
        }
        let g = if hk.value > 1.0 { g.scaled(1.0 / hk.value) } else { g.clone() };
        let v = integrate_product(f, &g, &Interval2::PLANE, tol)?;
        best = best.max(v.value.abs());
    }
    Ok(best)
}

/// [`norm_dual`] over the standard probe family at resolution 16 plus the
/// quadrant probe at the Alexiewicz maximizer.
pub fn norm_dual_standard(f: &Distribution, tol: f64) -> Result<f64> {
    let sup = alexiewicz_sup(f.primitive(), tol, SupOptions::default())?;
    let mut probes = standard_probes(16)?;
    if !sup.argmax.x.is_neg_inf() && !sup.argmax.y.is_neg_inf() {
        probes.push(quadrant_probe(sup.argmax.x, sup.argmax.y));
    }
    norm_dual(f, &probes, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IteratedReport {
    /// `sum_i [F(x_i,d) - F(x_i,c)] - [F(x_{i-1},d) - F(x_{i-1},c)]`
    pub x_outer: f64,
    /// The analogue with the roles of the axes exchanged.
    pub y_outer: f64,
    pub corner: f64,
    pub discrepancy: f64,
    pub agree: bool,
}

/// Compare both iterated integrals (as telescoping sums over a partition)
/// with the corner formula.
pub fn iterated_consistency(f: &Distribution, i: &Interval2, tol: f64) -> Result<IteratedReport> {
    let prim = f.primitive();
    let corner = corner_difference(prim, i)?;
    let mut sums = [0.0; 2];
    for (axis, sum) in sums.iter_mut().enumerate() {
        let (lo, hi) = if axis == 0 { (i.a, i.b) } else { (i.c, i.d) };
        let nodes = refine_partition(lo, hi, 64, &[], 0);
        let inner = |t: ExtReal| -> Result<f64> {
            if axis == 0 {
                Ok(prim.eval(ExtPoint2::new(t, i.d))? - prim.eval(ExtPoint2::new(t, i.c))?)
            } else {
                Ok(prim.eval(ExtPoint2::new(i.b, t))? - prim.eval(ExtPoint2::new(i.a, t))?)
            }
        };
        let mut prev = inner(nodes[0])?;
        for &t in &nodes[1..] {
            let cur = inner(t)?;
            *sum += cur - prev;
            prev = cur;
        }
    }
    let [x_outer, y_outer] = sums;
    let discrepancy = (x_outer - y_outer).abs().max((x_outer - corner).abs()).max((y_outer - corner).abs());
    Ok(IteratedReport { x_outer, y_outer, corner, discrepancy, agree: discrepancy <= tol })
}

/// Worked examples of iterated improper integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImproperExample {
    /// `d12 (x^y)` on `(0,1) x (0,inf)`.
    XPowY,
    /// `d12 arctan(xy)` on `R x [0,1]`.
    ArctanXY,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOrder {
    /// Integrate in `y` first, then in `x`.
    DyFirst,
    /// Integrate in `x` first, then in `y`.
    DxFirst,
}

// A domain map from the unit parameter interval, scaled by `s`.
#[derive(Clone, Copy)]
enum Domain {
    // (0, inf), variable = s * t/(1-t)
    HalfLine,
    // R, variable = s * t/(1-|t|) with t in (-1,1)
    Line,
    // [0,1]
    Unit,
}

impl Domain {
    fn range(self) -> (f64, f64) {
        match self {
            Domain::Line => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    fn map(self, t: f64, scale: f64) -> (f64, f64) {
        match self {
            Domain::HalfLine => {
                let (x, j) = maps::half_line(t);
                (scale * x, scale * j)
            }
            Domain::Line => {
                let (x, j) = maps::real_line(t);
                (scale * x, scale * j)
            }
            Domain::Unit => (t, 1.0),
        }
    }
}

const IMPROPER_MAX_INTERVALS: usize = 4000;

/// Nested adaptive Gauss-Kronrod quadrature of a worked example's mixed
/// partial derivative, in the requested order. Half the tolerance goes to
/// the outer integral and half to each inner one.
///
/// For `XPowY` the `x` variable is written `x = e^-s`, which turns the
/// integrand times `dx` into `e^{-sy}(1 - sy) ds`.
pub fn improper_iterated(example: ImproperExample, order: IterationOrder, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    // integrand in (first, second) with first = x-like variable
    let (dom_x, dom_y, integrand): (Domain, Domain, fn(f64, f64) -> f64) = match example {
        ImproperExample::XPowY => (Domain::HalfLine, Domain::HalfLine, |s, y| {
            let w = s * y;
            exp(-w) * (1.0 - w)
        }),
        ImproperExample::ArctanXY => (Domain::Line, Domain::Unit, |x, y| {
            let w = x * y;
            let w2 = w * w;
            (1.0 - w2) / ((1.0 + w2) * (1.0 + w2))
        }),
    };
    let (outer_dom, inner_dom, outer_is_x) = match order {
        IterationOrder::DyFirst => (dom_x, dom_y, true),
        IterationOrder::DxFirst => (dom_y, dom_x, false),
    };
    let mut inner_ok = true;
    let mut inner_err: f64 = 0.0;
    let (olo, ohi) = outer_dom.range();
    let (ilo, ihi) = inner_dom.range();
    let outer = adaptive(
        |t| {
            let (o, jo) = outer_dom.map(t, 1.0);
            // The inner variable lives on the scale 1/o for both examples.
            let scale = if o != 0.0 && !matches!(inner_dom, Domain::Unit) { 1.0 / o.abs() } else { 1.0 };
            let r = adaptive(
                |u| {
                    let (i, ji) = inner_dom.map(u, scale);
                    let (x, y) = if outer_is_x { (o, i) } else { (i, o) };
                    integrand(x, y) * ji
                },
                ilo,
                ihi,
                0.5 * tol,
                IMPROPER_MAX_INTERVALS,
            );
            inner_ok &= r.converged;
            inner_err = inner_err.max(r.error);
            r.value * jo
        },
        olo,
        ohi,
        0.5 * tol,
        IMPROPER_MAX_INTERVALS,
    );
    let error_estimate = outer.error + inner_err;
    Ok(QuadResult {
        value: outer.value,
        error_estimate,
        depth: outer.intervals as u32,
        converged: outer.converged && inner_ok && outer.value.is_finite(),
    })
}

/// Which of the lower limits is taken first in the staged corner limits of
/// `x^y` over `[a,b] x [c,d]`, `a -> 0`, `c -> 0`, `d -> inf`, `b -> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerLimitOrder {
    /// `c -> 0` innermost, then `a -> 0`.
    CFirst,
    /// `a -> 0` innermost, then `c -> 0`.
    AFirst,
}

/// `a^c + b^d - a^d - b^c` with each limit realised at its own scale:
/// the outermost limit uses `1e-3`, then `1e-9`, `1e-27`, `1e-81` innermost.
/// Powers are evaluated as `exp(y ln x)` with `ln a` held directly.
pub fn xpowy_corner_limit(order: CornerLimitOrder) -> f64 {
    let eps = [1e-3, 1e-9, 1e-27, 1e-81];
    let ln_b = ln_1p(-eps[0]);
    let d = 1.0 / eps[1];
    let (ln_a, c) = match order {
        CornerLimitOrder::CFirst => (-1.0 / eps[2], eps[3]),
        CornerLimitOrder::AFirst => (-1.0 / eps[3], eps[2]),
    };
    let pow = |ln_x: f64, y: f64| exp(y * ln_x);
    pow(ln_a, c) + pow(ln_b, d) - pow(ln_a, d) - pow(ln_b, c)
}

/// `[lo_1, hi_1] x ... x [lo_n, hi_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalND {
    limits: Vec<(ExtReal, ExtReal)>,
}

impl IntervalND {
    pub fn new(limits: Vec<(ExtReal, ExtReal)>) -> Result<Self> {
        if limits.is_empty() {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if limits.len() > 24 {
            return Err(Error::invalid("dimension too large for the corner formula"));
        }
        Ok(IntervalND { limits })
    }

    pub fn dim(&self) -> usize {
        self.limits.len()
    }

    pub fn limits(&self) -> &[(ExtReal, ExtReal)] {
        &self.limits
    }
}

/// The `2^n`-term corner formula. Positive terms come first (the all-lower
/// corner leading), then the negative ones, so that for `n = 2` the
/// evaluation order matches [`corner_difference`].
pub fn corner_integral_nd(f: &dyn Fn(&[ExtReal]) -> f64, i: &IntervalND) -> Result<f64> {
    let n = i.dim();
    let full = (1usize << n) - 1;
    let mut masks: Vec<usize> = (0..=full).filter(|m| m.count_ones() % 2 == 0).rev().collect();
    masks.extend((0..=full).filter(|m| m.count_ones() % 2 == 1));
    let mut point = alloc::vec![ExtReal::ZERO; n];
    let mut acc = 0.0;
    for mask in masks {
        // bit k set: lower limit on axis k
        for (k, (lo, hi)) in i.limits.iter().enumerate() {
            point[k] = if mask >> k & 1 == 1 { *lo } else { *hi };
        }
        let v = f(&point);
        if !v.is_finite() {
            return Err(Error::EvaluationFailure { at: point.iter().map(|t| t.value()).collect(), value: v });
        }
        if mask.count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extplane::make_interval;
    use crate::primitive::{catalog_primitive, Params};

    fn cat(name: &str) -> Distribution {
        Distribution::new(catalog_primitive(name, &Params::new()).unwrap())
    }

    #[test]
    fn corner_examples() {
        let f = cat("prodArctan");
        let e = ExtReal::of;
        let i = make_interval(e(0.0), ExtReal::POS_INF, e(0.0), ExtReal::POS_INF);
        assert_eq!(corner_integral(&f, &i).unwrap(), 0.25);
        let flipped = make_interval(ExtReal::POS_INF, e(0.0), e(0.0), ExtReal::POS_INF);
        assert_eq!(corner_integral(&f, &flipped).unwrap(), -0.25);
        assert_eq!(corner_integral(&f, &make_interval(e(2.0), e(2.0), e(0.0), e(1.0))).unwrap(), 0.0);
    }

    #[test]
    fn nd_corner_matches_two_dimensional_formula() {
        let f = cat("prodArctan");
        let prim = f.primitive().clone();
        let g = move |p: &[ExtReal]| prim.value(ExtPoint2::new(p[0], p[1]));
        let e = ExtReal::of;
        let i = Interval2 { a: e(-0.3), b: e(1.7), c: e(-2.0), d: e(0.4) };
        let nd = IntervalND::new(alloc::vec![(i.a, i.b), (i.c, i.d)]).unwrap();
        assert_eq!(corner_integral_nd(&g, &nd).unwrap(), corner_difference(f.primitive(), &i).unwrap());
        let id = |p: &[ExtReal]| p[0].value();
        let one = IntervalND::new(alloc::vec![(e(2.0), e(5.0))]).unwrap();
        assert_eq!(corner_integral_nd(&id, &one).unwrap(), 3.0);
    }

    #[test]
    fn sup_of_prod_arctan_is_one() {
        let r = alexiewicz_norm(&cat("prodArctan"), 1e-9).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
        assert_eq!(alexiewicz_norm(&cat("zero"), 1e-9).unwrap().value, 0.0);
    }

    #[test]
    fn corner_limits_of_x_pow_y() {
        assert_eq!(xpowy_corner_limit(CornerLimitOrder::CFirst), 0.0);
        assert_eq!(xpowy_corner_limit(CornerLimitOrder::AFirst), -1.0);
    }
}
