//! Riemann-Stieltjes sums against multipliers of bounded variation,
//! integration by parts, and the mean value theorem.

use alloc::vec::Vec;

use crate::extplane::{cell_tag, refine_partition, ExtPoint2, ExtReal, Feature, Grid2, Interval2, OrientedInterval};
use crate::integral::QuadResult;
use crate::primitive::SepTerm;
use crate::primitive::{BVFunction, Distribution, Field2, GridSample, Primitive};
use crate::variation::{trace_diverges, DIVERGENCE_GUARD};
use crate::{Error, Result};

/// Refinement levels for line and plane sums.
pub const MAX_LEVEL: u32 = 10;
const LINE_BASE: usize = 16;
const PLANE_BASE: usize = 16;
// Node budget for plane sums that must evaluate the integrator everywhere.
const PLANE_NODE_CAP: usize = 1 << 22;

/// A tagged cell of a division.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedCell {
    pub cell: Interval2,
    pub tag: ExtPoint2,
}

/// The tagged division used at `level` for a plane sum of `g` over `i`:
/// chart-midpoint tags, boundary cells tagged on the boundary.
pub fn tagged_division(g: &BVFunction, i: &Interval2, level: u32) -> Vec<TaggedCell> {
    let xs = refine_partition(i.a, i.b, PLANE_BASE, &g.x_features(), level);
    let ys = refine_partition(i.c, i.d, PLANE_BASE, &g.y_features(), level);
    let mut out = Vec::with_capacity((xs.len() - 1) * (ys.len() - 1));
    for wy in ys.windows(2) {
        for wx in xs.windows(2) {
            out.push(TaggedCell {
                cell: Interval2 { a: wx[0], b: wx[1], c: wy[0], d: wy[1] },
                tag: ExtPoint2::new(cell_tag(wx[0], wx[1]), cell_tag(wy[0], wy[1])),
            });
        }
    }
    out
}

fn tags(nodes: &[ExtReal]) -> Vec<ExtReal> {
    nodes.windows(2).map(|w| cell_tag(w[0], w[1])).collect()
}

fn check(v: f64, p: ExtPoint2) -> Result<f64> {
    crate::primitive::check_finite(v, p)
}

#[inline]
fn line_point(axis: u8, fixed: ExtReal, t: ExtReal) -> ExtPoint2 {
    if axis == 1 {
        ExtPoint2::new(t, fixed)
    } else {
        ExtPoint2::new(fixed, t)
    }
}

// Refinement driver shared by the sums: stop once k >= 2 and successive
// sums agree within tol.
fn refine_sum(tol: f64, max_level: u32, mut level: impl FnMut(u32) -> Result<Option<f64>>) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut prev = f64::NAN;
    let mut out = QuadResult { value: 0.0, error_estimate: f64::INFINITY, depth: 0, converged: false };
    for k in 0..=max_level {
        let Some(s) = level(k)? else { break };
        let err = (s - prev).abs();
        out = QuadResult { value: s, error_estimate: if k == 0 { f64::INFINITY } else { err }, depth: k, converged: false };
        if k >= 2 && err <= tol {
            out.converged = true;
            break;
        }
        prev = s;
    }
    Ok(out)
}

/// `int_lo^hi F(., fixed) d_1 g(., fixed)` (axis 1) or
/// `int_lo^hi F(fixed, .) d_2 g(fixed, .)` (axis 2).
pub fn rs_line_integral<F: Field2 + ?Sized>(
    f: &F,
    g: &BVFunction,
    axis: u8,
    fixed: ExtReal,
    lo: ExtReal,
    hi: ExtReal,
    tol: f64,
) -> Result<QuadResult> {
    if axis != 1 && axis != 2 {
        return Err(Error::invalid("axis must be 1 or 2"));
    }
    if lo > hi {
        return Err(Error::invalid("line range must be ordered"));
    }
    if lo == hi {
        return Ok(QuadResult::exact(0.0));
    }
    let features = if axis == 1 { g.x_features() } else { g.y_features() };
    let mut var_trace: Vec<f64> = Vec::new();
    let r = refine_sum(tol, MAX_LEVEL, |k| {
        let nodes = refine_partition(lo, hi, LINE_BASE, &features, k);
        let mut gv = Vec::with_capacity(nodes.len());
        for &t in &nodes {
            let p = line_point(axis, fixed, t);
            gv.push(check(g.value(p), p)?);
        }
        let (mut s, mut var) = (0.0, 0.0);
        for (c, w) in nodes.windows(2).enumerate() {
            let dg = gv[c + 1] - gv[c];
            if dg != 0.0 {
                var += dg.abs();
                s += f.eval(line_point(axis, fixed, cell_tag(w[0], w[1])))? * dg;
            }
        }
        let v = var_trace.last().map_or(var, |&p: &f64| p.max(var));
        var_trace.push(v);
        if v > DIVERGENCE_GUARD {
            return Err(Error::invalid("variation of the multiplier along the line diverges"));
        }
        Ok(Some(s))
    })?;
    if !r.converged && trace_diverges(&var_trace, tol) {
        return Err(Error::invalid("variation of the multiplier along the line diverges"));
    }
    Ok(r)
}

// Increments of a one-dimensional factor over the cells of `nodes`.
fn increments(u: &crate::primitive::Bv1, nodes: &[ExtReal]) -> Result<Vec<f64>> {
    let vals: Vec<f64> = nodes.iter().map(|&t| u.eval(t)).collect();
    if let Some(k) = vals.iter().position(|v| !v.is_finite()) {
        return Err(Error::EvaluationFailure { at: alloc::vec![nodes[k].value()], value: vals[k] });
    }
    Ok(vals.windows(2).map(|w| w[1] - w[0]).collect())
}

fn nonzero(d: &[f64]) -> Vec<usize> {
    d.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i).collect()
}

// sum F(tag) * dg over xs x ys for a separable g.
fn plane_sum_separable<F: Field2 + ?Sized>(f: &F, terms: &[SepTerm], xs: &[ExtReal], ys: &[ExtReal]) -> Result<f64> {
    let (tx, ty) = (tags(xs), tags(ys));
    let mut s = 0.0;
    for t in terms {
        let du = increments(&t.u, xs)?;
        let dv = increments(&t.v, ys)?;
        let (nu, nv) = (nonzero(&du), nonzero(&dv));
        let mut part = 0.0;
        for &j in &nv {
            for &i in &nu {
                part += f.eval(ExtPoint2::new(tx[i], ty[j]))? * (du[i] * dv[j]);
            }
        }
        s += t.coef * part;
    }
    Ok(s)
}

// sum integrand(tag) * (corner difference of integrator) over xs x ys.
fn plane_sum_generic<F: Field2 + ?Sized, G: Field2 + ?Sized>(
    integrand: &F,
    integrator: &G,
    xs: &[ExtReal],
    ys: &[ExtReal],
) -> Result<f64> {
    let tx = tags(xs);
    let mut prev: Vec<f64> = Vec::with_capacity(xs.len());
    let mut cur: Vec<f64> = Vec::with_capacity(xs.len());
    let mut s = 0.0;
    for (j, &y) in ys.iter().enumerate() {
        cur.clear();
        for &x in xs {
            cur.push(integrator.eval(ExtPoint2::new(x, y))?);
        }
        if j > 0 {
            let ty = cell_tag(ys[j - 1], y);
            for i in 0..xs.len() - 1 {
                let d = prev[i] + cur[i + 1] - prev[i + 1] - cur[i];
                if d != 0.0 {
                    s += integrand.eval(ExtPoint2::new(tx[i], ty))? * d;
                }
            }
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    Ok(s)
}

/// `int int_I F d_12 g`: corner-difference Riemann-Stieltjes sums on
/// refining chart-uniform divisions with `g`'s jump lines straddled.
pub fn rs_plane_integral<F: Field2 + ?Sized>(f: &F, g: &BVFunction, i: &Interval2, tol: f64) -> Result<QuadResult> {
    if i.is_degenerate() {
        return Ok(QuadResult::exact(0.0));
    }
    let (fx, fy) = (g.x_features(), g.y_features());
    let sep = g.separable();
    let mut var_trace: Vec<f64> = Vec::new();
    let r = refine_sum(tol, MAX_LEVEL, |k| {
        let xs = refine_partition(i.a, i.b, PLANE_BASE, &fx, k);
        let ys = refine_partition(i.c, i.d, PLANE_BASE, &fy, k);
        match &sep {
            Some(terms) => plane_sum_separable(f, terms, &xs, &ys).map(Some),
            None => {
                if k > 2 && xs.len() * ys.len() > PLANE_NODE_CAP {
                    return Ok(None);
                }
                let v = crate::variation::components_on(g, &xs, &ys)?.v12;
                var_trace.push(var_trace.last().map_or(v, |&p: &f64| p.max(v)));
                plane_sum_generic(f, g, &xs, &ys).map(Some)
            }
        }
    })?;
    if !r.converged && trace_diverges(&var_trace, tol) {
        return Err(Error::invalid("Vitali variation of the multiplier diverges"));
    }
    Ok(r)
}

/// `int int_I g d_12 F` for a continuous integrator `F`, on the divisions
/// that [`rs_plane_integral`] would use for `g`.
pub fn rs_plane_integral_of_multiplier<F: Field2 + ?Sized>(
    g: &BVFunction,
    f: &F,
    i: &Interval2,
    tol: f64,
) -> Result<QuadResult> {
    if i.is_degenerate() {
        return Ok(QuadResult::exact(0.0));
    }
    let (fx, fy) = (g.x_features(), g.y_features());
    refine_sum(tol, MAX_LEVEL, |k| {
        let xs = refine_partition(i.a, i.b, PLANE_BASE, &fx, k);
        let ys = refine_partition(i.c, i.d, PLANE_BASE, &fy, k);
        if k > 2 && xs.len() * ys.len() > PLANE_NODE_CAP {
            return Ok(None);
        }
        plane_sum_generic(g, f, &xs, &ys).map(Some)
    })
}

/// `int int_I f g` by integration by parts:
///
/// ```text
/// F(a,c)g(a,c) + F(b,d)g(b,d) - F(a,d)g(a,d) - F(b,c)g(b,c)
///   - int_a^b F(x,d) d_1 g(x,d) + int_a^b F(x,c) d_1 g(x,c)
///   - int_c^d F(b,y) d_2 g(b,y) + int_c^d F(a,y) d_2 g(a,y)
///   + int_a^b int_c^d F d_12 g
/// ```
///
/// Each of the five Stieltjes terms gets a fifth of the tolerance; their
/// error estimates add. Terms on the lower edges of the plane vanish
/// identically and are skipped.
pub fn integrate_product(f: &Distribution, g: &BVFunction, i: &Interval2, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if i.is_degenerate() {
        return Ok(QuadResult::exact(0.0));
    }
    let prim = f.primitive();
    let t = tol / 5.0;
    let fg = |x: ExtReal, y: ExtReal| -> Result<f64> {
        let p = ExtPoint2::new(x, y);
        Ok(prim.eval(p)? * g.eval(p)?)
    };
    let corners = fg(i.a, i.c)? + fg(i.b, i.d)? - fg(i.a, i.d)? - fg(i.b, i.c)?;
    let zero = QuadResult::exact(0.0);
    let top = rs_line_integral(prim, g, 1, i.d, i.a, i.b, t)?;
    let bottom = if i.c.is_neg_inf() { zero } else { rs_line_integral(prim, g, 1, i.c, i.a, i.b, t)? };
    let right = rs_line_integral(prim, g, 2, i.b, i.c, i.d, t)?;
    let left = if i.a.is_neg_inf() { zero } else { rs_line_integral(prim, g, 2, i.a, i.c, i.d, t)? };
    let plane = rs_plane_integral(prim, g, i, t)?;
    let value = corners - top.value + bottom.value - right.value + left.value + plane.value;
    let parts = [top, bottom, right, left, plane];
    Ok(QuadResult {
        value,
        error_estimate: parts.iter().map(|q| q.error_estimate).sum(),
        depth: parts.iter().map(|q| q.depth).max().unwrap_or(0),
        converged: parts.iter().all(|q| q.converged),
    })
}

/// [`integrate_product`] over an oriented interval.
pub fn integrate_product_oriented(
    f: &Distribution,
    g: &BVFunction,
    i: &OrientedInterval,
    tol: f64,
) -> Result<QuadResult> {
    if i.degenerate {
        return Ok(QuadResult::exact(0.0));
    }
    let mut r = integrate_product(f, g, &i.interval, tol)?;
    r.value *= i.sign;
    Ok(r)
}

/// The primitive of the product distribution `fg`, sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct PartsPrimitive {
    pub primitive: Primitive,
    /// Largest node change between the last two levels.
    pub error_estimate: f64,
    pub depth: u32,
    pub converged: bool,
}

const PARTS_MAX_LEVEL: u32 = 6;

/// `Phi(x,y) = F g - int_{-inf}^x F d_1 g - int_{-inf}^y F d_2 g + int int F d_12 g`
/// at every node of the uniform grid of the given resolution.
///
/// The uniform nodes are base nodes of every refined partition, so all node
/// values at one level come from running sums over a single division.
pub fn parts_primitive(f: &Distribution, g: &BVFunction, resolution: usize, tol: f64) -> Result<PartsPrimitive> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let grid = Grid2::uniform(resolution)?;
    let prim = f.primitive();
    let n = resolution + 1;
    let mut base = alloc::vec![0.0; n * n];
    for (k, p) in grid.nodes().enumerate() {
        base[k] = prim.eval(p)? * g.eval(p)?;
    }
    let (fx, fy) = (g.x_features(), g.y_features());
    let sep = g.separable();
    let mut prev: Option<Vec<f64>> = None;
    let mut out = None;
    for k in 0..=PARTS_MAX_LEVEL {
        let xs = refine_partition(ExtReal::NEG_INF, ExtReal::POS_INF, resolution, &fx, k);
        let ys = refine_partition(ExtReal::NEG_INF, ExtReal::POS_INF, resolution, &fy, k);
        if k > 2 && sep.is_none() && xs.len() * ys.len() > PLANE_NODE_CAP {
            break;
        }
        let ix = node_indices(grid.xs(), &xs);
        let iy = node_indices(grid.ys(), &ys);
        let mut phi = base.clone();
        // line terms along rows (d_1) and columns (d_2)
        for axis in [1u8, 2] {
            let (along, across, idx_along) = if axis == 1 { (&xs, grid.ys(), &ix) } else { (&ys, grid.xs(), &iy) };
            let tg = tags(along);
            for (m, &fixed) in across.iter().enumerate() {
                let gv: Vec<f64> =
                    along.iter().map(|&t| g.eval(line_point(axis, fixed, t))).collect::<Result<Vec<_>>>()?;
                let mut run = 0.0;
                let mut next = 0;
                for (c, w) in gv.windows(2).enumerate() {
                    while next < n && idx_along[next] == c {
                        subtract_line(&mut phi, axis, n, next, m, run);
                        next += 1;
                    }
                    let dg = w[1] - w[0];
                    if dg != 0.0 {
                        run += prim.eval(line_point(axis, fixed, tg[c]))? * dg;
                    }
                }
                while next < n {
                    subtract_line(&mut phi, axis, n, next, m, run);
                    next += 1;
                }
            }
        }
        // plane term: column-accumulated cell sums, prefix along x at output rows
        let (tx, ty) = (tags(&xs), tags(&ys));
        let ncx = xs.len() - 1;
        let mut colsum = alloc::vec![0.0; ncx];
        let add_row = |q: usize, colsum: &mut [f64], prev_row: &[f64], cur_row: &[f64]| -> Result<()> {
            for p in 0..ncx {
                let d = prev_row[p] + cur_row[p + 1] - prev_row[p + 1] - cur_row[p];
                if d != 0.0 {
                    colsum[p] += prim.eval(ExtPoint2::new(tx[p], ty[q]))? * d;
                }
            }
            Ok(())
        };
        let emit = |j: usize, colsum: &[f64], phi: &mut [f64]| {
            let mut run = 0.0;
            let mut next = 0;
            for (p, c) in colsum.iter().enumerate() {
                while next < n && ix[next] == p {
                    phi[j * n + next] += run;
                    next += 1;
                }
                run += c;
            }
            while next < n {
                phi[j * n + next] += run;
                next += 1;
            }
        };
        let mut next_row = 0;
        match &sep {
            Some(terms) => {
                let du: Vec<Vec<f64>> = terms.iter().map(|t| increments(&t.u, &xs)).collect::<Result<_>>()?;
                let dv: Vec<Vec<f64>> = terms.iter().map(|t| increments(&t.v, &ys)).collect::<Result<_>>()?;
                let nu: Vec<Vec<usize>> = du.iter().map(|d| nonzero(d)).collect();
                for q in 0..=ys.len() - 1 {
                    while next_row < n && iy[next_row] == q {
                        emit(next_row, &colsum, &mut phi);
                        next_row += 1;
                    }
                    if q == ys.len() - 1 {
                        break;
                    }
                    for (tk, t) in terms.iter().enumerate() {
                        let dvq = dv[tk][q];
                        if dvq == 0.0 {
                            continue;
                        }
                        for &p in &nu[tk] {
                            colsum[p] += t.coef * prim.eval(ExtPoint2::new(tx[p], ty[q]))? * (du[tk][p] * dvq);
                        }
                    }
                }
            }
            None => {
                let mut prev_row: Vec<f64> = Vec::new();
                for (q, &y) in ys.iter().enumerate() {
                    let cur: Vec<f64> =
                        xs.iter().map(|&x| g.eval(ExtPoint2::new(x, y))).collect::<Result<Vec<_>>>()?;
                    if q > 0 {
                        add_row(q - 1, &mut colsum, &prev_row, &cur)?;
                    }
                    while next_row < n && iy[next_row] == q {
                        emit(next_row, &colsum, &mut phi);
                        next_row += 1;
                    }
                    prev_row = cur;
                }
            }
        }
        let change = prev.as_ref().map(|p| max_diff(p, &phi));
        let done = k >= 2 && change.is_some_and(|c| c <= tol);
        out = Some((phi.clone(), change.unwrap_or(f64::INFINITY), k, done));
        if done {
            break;
        }
        prev = Some(phi);
    }
    let (values, error_estimate, depth, converged) = out.expect("at least one level");
    let sample = GridSample::new(grid, values)?;
    let label = alloc::format!("parts({}, {})", f.label(), g.label());
    Ok(PartsPrimitive { primitive: Primitive::grid_sample(label, sample), error_estimate, depth, converged })
}

#[inline]
fn subtract_line(phi: &mut [f64], axis: u8, n: usize, along: usize, across: usize, v: f64) {
    let k = if axis == 1 { across * n + along } else { along * n + across };
    phi[k] -= v;
}

// Index into `nodes` of each output node (which is always present).
fn node_indices(out: &[ExtReal], nodes: &[ExtReal]) -> Vec<usize> {
    out.iter().map(|t| nodes.binary_search(t).expect("output nodes are base nodes")).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}

/// Which edge condition on `g` selected the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdFVariant {
    /// `g` vanishes on the `+inf` edges: `int fg = int F d12 g = int g d12 F`.
    VanishesAtPosInf,
    /// `g` vanishes on the `-inf` edges: `int fg = int g d12 F`.
    VanishesAtNegInf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdFReport {
    pub variant: GdFVariant,
    /// `int int fg` by parts.
    pub product: f64,
    /// `int int F d12 g`, for the `+inf` variant.
    pub f_dg: Option<f64>,
    /// `int int g d12 F`.
    pub g_df: f64,
    pub discrepancy: f64,
    pub error_estimate: f64,
}

const EDGE_SAMPLES: usize = 64;

fn vanishes_on(g: &BVFunction, edge: ExtReal) -> Result<bool> {
    let grid = Grid2::uniform(EDGE_SAMPLES)?;
    let mut pts = g.x_features().into_iter().map(|f| ExtReal::of(f.at)).collect::<Vec<_>>();
    pts.extend(g.y_features().into_iter().map(|f| ExtReal::of(f.at)));
    pts.extend(grid.xs().iter().copied());
    for t in pts {
        if g.eval(ExtPoint2::new(edge, t))? != 0.0 || g.eval(ExtPoint2::new(t, edge))? != 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check the exchange of integrand and integrator for `g` vanishing on the
/// `+inf` edges or on the `-inf` edges (sampled at 65 points per edge and at
/// `g`'s feature coordinates).
pub fn gdf_identity_check(f: &Primitive, g: &BVFunction, tol: f64) -> Result<GdFReport> {
    let variant = if vanishes_on(g, ExtReal::POS_INF)? {
        GdFVariant::VanishesAtPosInf
    } else if vanishes_on(g, ExtReal::NEG_INF)? {
        GdFVariant::VanishesAtNegInf
    } else {
        return Err(Error::invalid("g must vanish on the +inf edges or on the -inf edges"));
    };
    let dist = Distribution::new(f.clone());
    let plane = Interval2::PLANE;
    let product = integrate_product(&dist, g, &plane, tol)?;
    let g_df = rs_plane_integral_of_multiplier(g, f, &plane, tol)?;
    let mut err = product.error_estimate + g_df.error_estimate;
    let mut disc = (product.value - g_df.value).abs();
    let f_dg = if variant == GdFVariant::VanishesAtPosInf {
        let r = rs_plane_integral(f, g, &plane, tol)?;
        err += r.error_estimate;
        disc = disc.max((r.value - product.value).abs()).max((r.value - g_df.value).abs());
        Some(r.value)
    } else {
        None
    };
    Ok(GdFReport { variant, product: product.value, f_dg, g_df: g_df.value, discrepancy: disc, error_estimate: err })
}

/// A point where the integrand takes the mean value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValue {
    pub point: ExtPoint2,
    pub ratio: f64,
    /// `g(-inf,-inf) + g(inf,inf) - g(-inf,inf) - g(inf,-inf)`
    pub delta: f64,
    pub resolution: usize,
}

const MONOTONE_CHECK_RESOLUTION: usize = 64;
const SCAN_START: usize = 64;
const SCAN_MAX: usize = 4096;

/// First mean value theorem: `int int F d12 g = F(xi, eta) * delta`.
/// Returns the ratio and the first node (row-major, coarsest grid first)
/// where `|F - ratio| <= tol`.
pub fn mean_value_point<F: Field2 + ?Sized>(f: &F, g: &BVFunction, tol: f64) -> Result<MeanValue> {
    let plane = Interval2::PLANE;
    let (xs, ys) = (
        refine_partition(ExtReal::NEG_INF, ExtReal::POS_INF, MONOTONE_CHECK_RESOLUTION, &g.x_features(), 0),
        refine_partition(ExtReal::NEG_INF, ExtReal::POS_INF, MONOTONE_CHECK_RESOLUTION, &g.y_features(), 0),
    );
    for wy in ys.windows(2) {
        for wx in xs.windows(2) {
            let d = crate::integral::corner_difference(g, &Interval2 { a: wx[0], b: wx[1], c: wy[0], d: wy[1] })?;
            if d < -tol {
                return Err(Error::precondition("g has a negative corner difference"));
            }
        }
    }
    let delta = crate::integral::corner_difference(g, &plane)?;
    if delta.abs() <= tol {
        return Err(Error::DegenerateIntegrator);
    }
    let ratio = rs_plane_integral(f, g, &plane, tol)?.value / delta;
    let mut r = SCAN_START;
    while r <= SCAN_MAX {
        for p in Grid2::uniform(r)?.nodes() {
            if (f.eval(p)? - ratio).abs() <= tol {
                return Ok(MeanValue { point: p, ratio, delta, resolution: r });
            }
        }
        r *= 2;
    }
    Err(Error::ResolutionInsufficient { resolution: SCAN_MAX })
}

/// Features of `g` along one axis, exposed for callers building their own divisions.
pub fn multiplier_features(g: &BVFunction, axis: u8) -> Vec<Feature> {
    if axis == 1 {
        g.x_features()
    } else {
        g.y_features()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitive::{catalog_bv, catalog_primitive, Params};

    fn prod_arctan() -> Distribution {
        Distribution::new(catalog_primitive("prodArctan", &Params::new()).unwrap())
    }

    #[test]
    fn constant_multiplier_gives_total_mass() {
        let f = prod_arctan();
        let r = integrate_product(&f, &BVFunction::constant(1.0), &Interval2::PLANE, 1e-9).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn single_jump_picks_integrand_value() {
        let f = prod_arctan();
        let g = catalog_bv("halfPlaneIndicator", &Params::new()).unwrap();
        let r = rs_line_integral(f.primitive(), &g, 1, ExtReal::POS_INF, ExtReal::NEG_INF, ExtReal::POS_INF, 1e-12)
            .unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn interval_indicator_reproduces_corner_formula() {
        let f = prod_arctan();
        let p = Params::new().with("a", -0.5).with("b", 2.0).with("c", 0.25).with("d", 3.0);
        let g = catalog_bv("intervalIndicator", &p).unwrap();
        let r = integrate_product(&f, &g, &Interval2::PLANE, 1e-9).unwrap();
        let e = ExtReal::of;
        let want =
            crate::integral::corner_difference(f.primitive(), &Interval2 { a: e(-0.5), b: e(2.0), c: e(0.25), d: e(3.0) })
                .unwrap();
        assert!((r.value - want).abs() < 1e-9, "{} vs {want}", r.value);
    }

    #[test]
    fn parts_with_unit_multiplier_is_the_primitive() {
        let f = prod_arctan();
        let phi = parts_primitive(&f, &BVFunction::constant(1.0), 8, 1e-9).unwrap();
        for p in Grid2::uniform(8).unwrap().nodes() {
            assert_eq!(phi.primitive.eval(p).unwrap(), f.primitive().eval(p).unwrap());
        }
    }
}
