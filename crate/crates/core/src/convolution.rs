//! Convolution with kernels of bounded variation and with integrable
//! kernels, the half-space Poisson kernel, and mollified step functions.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::extplane::{ExtPoint2, ExtReal, Grid2, Interval2};
use crate::integral::QuadResult;
use crate::num::{atan, hypot, sqrt, PI};
use crate::primitive::{BVFunction, Distribution, Field2, GridSample, Primitive};
use crate::quad::gauss_legendre;
use crate::stieltjes::integrate_product;
use crate::variation::hk_norm;
use crate::{Error, Result};

/// `Phi_z(x, y) = z (x^2 + y^2 + z^2)^(-3/2) / (2 pi)`.
pub fn poisson_kernel(x: f64, y: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid("Poisson kernel needs z > 0"));
    }
    let r2 = x * x + y * y + z * z;
    Ok(z / (2.0 * PI * r2 * sqrt(r2)))
}

pub type Kernel2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Quadrature rule attached to an [`L1Kernel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelRule {
    /// Tensor Gauss-Legendre over the support, `panels x order` points per
    /// axis; a lower-order rule on the same panels gives the error estimate.
    Tensor { panels: usize, order: usize },
    /// Whole-plane rule for the Poisson kernel in the substitution
    /// `r = z tan(phi)`, where the kernel measure becomes
    /// `sin(phi) dphi dtheta / (2 pi)`.
    PoissonRadial { z: f64 },
}

/// An integrable kernel with an effective support box and the mass it
/// leaves outside.
#[derive(Clone)]
pub struct L1Kernel {
    pub label: String,
    pub f: Kernel2,
    pub support: Interval2,
    pub l1_norm: f64,
    pub tail_bound: f64,
    pub rule: KernelRule,
}

impl fmt::Debug for L1Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("L1Kernel")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("l1_norm", &self.l1_norm)
            .field("tail_bound", &self.tail_bound)
            .field("rule", &self.rule)
            .finish()
    }
}

/// Support radius of the Poisson kernel, in units of `z`.
pub const POISSON_SUPPORT: f64 = 50.0;
const RADIAL_ORDER: usize = 8;
const RADIAL_THETA: usize = 64;
const RADIAL_THETA_MAX: usize = 2048;
// Radius up to which RADIAL_THETA angles resolve unit-scale features.
const RADIAL_THETA_SCALE: f64 = 2.0;
const RADIAL_REACH: f64 = 1e3;
const TENSOR_COARSE: usize = 5;

/// A weighted quadrature node: `w` already includes the kernel value.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Node {
    xi: f64,
    eta: f64,
    w: f64,
    coarse: f64,
}

impl L1Kernel {
    /// `Phi_z`, of unit mass. The quadrature covers the whole plane; the
    /// support box `[-50z, 50z]^2` and its tail mass are informational.
    pub fn poisson(z: f64) -> Result<L1Kernel> {
        poisson_kernel(0.0, 0.0, z)?;
        let r = POISSON_SUPPORT * z;
        Ok(L1Kernel {
            label: format!("poisson(z={z})"),
            f: Arc::new(move |x, y| {
                let r2 = x * x + y * y + z * z;
                z / (2.0 * PI * r2 * sqrt(r2))
            }),
            support: Interval2 { a: ExtReal::of(-r), b: ExtReal::of(r), c: ExtReal::of(-r), d: ExtReal::of(r) },
            l1_norm: 1.0,
            // mass outside the inscribed disc
            tail_bound: z / hypot(r, z),
            rule: KernelRule::PoissonRadial { z },
        })
    }

    /// A kernel supported (up to `tail_bound`) in the finite box `support`,
    /// integrated with the tensor rule. The L1 norm is computed by the rule.
    pub fn tensor(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        support: Interval2,
        tail_bound: f64,
        panels: usize,
        order: usize,
    ) -> Result<L1Kernel> {
        let fin = [support.a, support.b, support.c, support.d].iter().all(|t| t.is_finite());
        if !fin || support.is_degenerate() {
            return Err(Error::invalid("kernel support must be a finite nondegenerate box"));
        }
        if panels == 0 || order <= TENSOR_COARSE {
            return Err(Error::invalid(format!("tensor rule needs panels >= 1 and order > {TENSOR_COARSE}")));
        }
        if !(tail_bound >= 0.0) {
            return Err(Error::invalid("tail bound must be nonnegative"));
        }
        let mut k = L1Kernel {
            label: label.into(),
            f: Arc::new(f),
            support,
            l1_norm: 0.0,
            tail_bound,
            rule: KernelRule::Tensor { panels, order },
        };
        let mut norm = 0.0;
        for n in k.nodes_with(|_, _, w| w.abs())? {
            norm += n.w;
        }
        k.l1_norm = norm;
        Ok(k)
    }

    /// `c g`.
    pub fn scaled(&self, c: f64) -> L1Kernel {
        let g = self.f.clone();
        L1Kernel {
            label: format!("{c} {}", self.label),
            f: Arc::new(move |x, y| c * g(x, y)),
            support: self.support,
            l1_norm: c.abs() * self.l1_norm,
            tail_bound: c.abs() * self.tail_bound,
            rule: self.rule,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    fn nodes(&self) -> Result<Vec<Node>> {
        self.nodes_with(|_, _, w| w)
    }

    // Quadrature nodes with weights passed through `map(xi, eta, g * w)`.
    fn nodes_with(&self, map: impl Fn(f64, f64, f64) -> f64) -> Result<Vec<Node>> {
        let mut out = Vec::new();
        match self.rule {
            KernelRule::Tensor { panels, order } => {
                let (lo, hi) = ((self.support.a.value(), self.support.b.value()), (self.support.c.value(), self.support.d.value()));
                let fine = tensor_axis(lo.0, lo.1, panels, order);
                let fine_y = tensor_axis(hi.0, hi.1, panels, order);
                let coarse = tensor_axis(lo.0, lo.1, panels, TENSOR_COARSE);
                let coarse_y = tensor_axis(hi.0, hi.1, panels, TENSOR_COARSE);
                for &(eta, wy) in &fine_y {
                    for &(xi, wx) in &fine {
                        out.push(Node { xi, eta, w: map(xi, eta, self.eval(xi, eta) * wx * wy), coarse: 0.0 });
                    }
                }
                for &(eta, wy) in &coarse_y {
                    for &(xi, wx) in &coarse {
                        out.push(Node { xi, eta, w: 0.0, coarse: map(xi, eta, self.eval(xi, eta) * wx * wy) });
                    }
                }
            }
            KernelRule::PoissonRadial { z } => {
                let mut edges = alloc::vec![0.0];
                let mut s = 0.25;
                while s < RADIAL_REACH / z {
                    edges.push(atan(s));
                    s *= 2.0;
                }
                edges.push(atan(s));
                edges.push(0.5 * PI);
                let (gx, gw) = gauss_legendre(RADIAL_ORDER);
                for e in edges.windows(2) {
                    let (h, m) = (0.5 * (e[1] - e[0]), 0.5 * (e[1] + e[0]));
                    let theta = theta_points(z * crate::num::tan(e[1]));
                    for (x, w) in gx.iter().zip(&gw) {
                        let phi = m + h * x;
                        let r = z * crate::num::tan(phi);
                        let radial = crate::num::sin(phi) * w * h;
                        for k in 0..theta {
                            let th = 2.0 * PI * k as f64 / theta as f64;
                            let (xi, eta) = (r * crate::num::cos(th), r * crate::num::sin(th));
                            let w = map(xi, eta, radial / theta as f64);
                            let coarse = if k % 2 == 0 { 2.0 * w } else { 0.0 };
                            out.push(Node { xi, eta, w, coarse });
                        }
                    }
                }
            }
        }
        if let Some(n) = out.iter().find(|n| !n.w.is_finite() || !n.coarse.is_finite()) {
            return Err(Error::EvaluationFailure { at: alloc::vec![n.xi, n.eta], value: n.w });
        }
        Ok(out)
    }

    /// `int int g` by the kernel's own rule.
    pub fn mass(&self) -> Result<QuadResult> {
        let nodes = self.nodes()?;
        let (v, c) = nodes.iter().fold((0.0, 0.0), |(v, c), n| (v + n.w, c + n.coarse));
        Ok(QuadResult { value: v, error_estimate: (v - c).abs(), depth: 0, converged: true })
    }
}

// Angles on a circle of radius up to `r`, doubling with the radius.
fn theta_points(r: f64) -> usize {
    let mut m = RADIAL_THETA;
    let mut reach = RADIAL_THETA_SCALE;
    while reach < r && m < RADIAL_THETA_MAX {
        m *= 2;
        reach *= 2.0;
    }
    m
}

fn tensor_axis(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let (lo, hi) = (a + h * p as f64, a + h * (p + 1) as f64);
        let (m, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, w) in gx.iter().zip(&gw) {
            out.push((m + r * x, r * w));
        }
    }
    out
}

/// Primitive of an L1 convolution together with quadrature metadata.
#[derive(Debug, Clone)]
pub struct L1Convolution {
    pub distribution: Distribution,
    /// `value` is the total mass `H(inf, inf)`; the error estimate is the
    /// largest node disagreement between the fine and coarse rules plus the
    /// support tail times `max |F|`.
    pub quad: QuadResult,
}

/// `f * g` for an integrable kernel: the primitive
/// `H(x, y) = int int g(xi, eta) F(x - xi, y - eta)` sampled on the uniform
/// grid of the given resolution.
pub fn convolve_l1(f: &Distribution, g: &L1Kernel, resolution: usize, tol: f64) -> Result<L1Convolution> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let grid = Grid2::uniform(resolution)?;
    let nodes = g.nodes()?;
    let prim = f.primitive();
    let mut values = Vec::with_capacity((resolution + 1) * (resolution + 1));
    let (mut err, mut fmax): (f64, f64) = (0.0, 0.0);
    for p in grid.nodes() {
        fmax = fmax.max(prim.eval(p)?.abs());
        if p.x.is_neg_inf() || p.y.is_neg_inf() {
            values.push(0.0);
            continue;
        }
        let (mut h, mut hc) = (0.0, 0.0);
        for n in &nodes {
            let v = prim.eval(ExtPoint2::new(p.x.shifted(n.xi), p.y.shifted(n.eta)))?;
            h += n.w * v;
            hc += n.coarse * v;
        }
        err = err.max((h - hc).abs());
        values.push(h);
    }
    let total = *values.last().expect("grid has nodes");
    let err = err + g.tail_bound * fmax * if matches!(g.rule, KernelRule::Tensor { .. }) { 1.0 } else { 0.0 };
    let sample = GridSample::new(grid, values)?;
    let label = format!("({}) * {}", f.label(), g.label);
    Ok(L1Convolution {
        distribution: Distribution::new(Primitive::grid_sample(label, sample)),
        quad: QuadResult { value: total, error_estimate: err, depth: 0, converged: err <= tol },
    })
}

const KERNEL_BOUND_TOL: f64 = 1e-6;

/// `(f * g)(p) = int int f(s, t) g(x - s, y - t)`, as the product integral
/// of `f` against the reflected kernel. At the four infinite corners the
/// value is the limit `g(e1 inf, e2 inf) F(inf, inf)`.
pub fn convolve_bv(f: &Distribution, g: &BVFunction, p: ExtPoint2, tol: f64) -> Result<QuadResult> {
    let hk = hk_norm(g, KERNEL_BOUND_TOL)?;
    if !hk.converged {
        return Err(Error::precondition(format!("variation of {} did not converge", g.label())));
    }
    if !p.x.is_finite() && !p.y.is_finite() {
        let total = f.eval(ExtPoint2::new(ExtReal::POS_INF, ExtReal::POS_INF))?;
        return Ok(QuadResult::exact(g.eval(p)? * total));
    }
    integrate_product(f, &g.reflected(p.x, p.y), &Interval2::PLANE, tol)
}

/// `(g * f)(p) = int int g(s, t) f(x - s, y - t)` at a finite point, by
/// integrating `g` against the reflected distribution, whose primitive is
/// `F(x-s, y-t) - F(x-s, inf) - F(inf, y-t) + F(inf, inf)`.
pub fn convolve_bv_commuted(f: &Distribution, g: &BVFunction, p: ExtPoint2, tol: f64) -> Result<QuadResult> {
    if !p.x.is_finite() || !p.y.is_finite() {
        return Err(Error::invalid("the commuted form needs a finite point"));
    }
    let (x, y) = (p.x.value(), p.y.value());
    let prim = f.primitive().clone();
    let inf = ExtReal::POS_INF;
    let k = Primitive::closed_form(format!("{}((x,y) - .)", f.label()), move |q| {
        let (u, v) = (ExtReal::raw(x - q.x.value()), ExtReal::raw(y - q.y.value()));
        prim.value(ExtPoint2::new(u, v)) - prim.value(ExtPoint2::new(u, inf)) - prim.value(ExtPoint2::new(inf, v))
            + prim.value(ExtPoint2::new(inf, inf))
    });
    integrate_product(&Distribution::new(k), g, &Interval2::PLANE, tol)
}

/// A step function on a rectangular partition with cells
/// `(p_(i-1), p_i] x (q_(j-1), q_j]`; zero on the lower edges.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction2 {
    xs: Vec<ExtReal>,
    ys: Vec<ExtReal>,
    /// `(xs.len()-1) * (ys.len()-1)` cell values, row-major in y.
    values: Vec<f64>,
}

impl StepFunction2 {
    /// Partitions must run from `-inf` to `inf`, strictly increasing; the
    /// first row and column of cells must vanish.
    pub fn new(xs: Vec<ExtReal>, ys: Vec<ExtReal>, values: Vec<f64>) -> Result<Self> {
        for axis in [&xs, &ys] {
            if axis.len() < 3 || !axis[0].is_neg_inf() || !axis[axis.len() - 1].is_pos_inf() {
                return Err(Error::invalid("step partitions run from -inf to inf with an interior node"));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("step partitions must be strictly increasing"));
            }
        }
        let (nx, ny) = (xs.len() - 1, ys.len() - 1);
        if values.len() != nx * ny {
            return Err(Error::invalid(format!("expected {} cell values, got {}", nx * ny, values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("cell values must be finite"));
        }
        let edge = (0..nx).any(|i| values[i] != 0.0) || (0..ny).any(|j| values[j * nx] != 0.0);
        if edge {
            return Err(Error::invalid("first row and column of cells must be zero"));
        }
        Ok(StepFunction2 { xs, ys, values })
    }

    pub fn zero(n: usize) -> Result<Self> {
        let grid = Grid2::uniform(n)?;
        StepFunction2::new(grid.xs().to_vec(), grid.ys().to_vec(), alloc::vec![0.0; n * n])
    }

    pub fn xs(&self) -> &[ExtReal] {
        &self.xs
    }

    pub fn ys(&self) -> &[ExtReal] {
        &self.ys
    }

    pub fn cell(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.xs.len() - 1) + i]
    }

    fn index(nodes: &[ExtReal], t: ExtReal) -> Option<usize> {
        if t.is_neg_inf() {
            None
        } else {
            Some(nodes.partition_point(|p| *p < t) - 1)
        }
    }

    pub fn eval(&self, p: ExtPoint2) -> f64 {
        match (Self::index(&self.xs, p.x), Self::index(&self.ys, p.y)) {
            (Some(i), Some(j)) => self.cell(i, j),
            _ => 0.0,
        }
    }
}

/// Step approximation of `F` on the uniform `n x n` grid: each cell takes
/// the value at its upper-right node, the first row and column are zero.
pub fn step_approximate(f: &Primitive, n: usize) -> Result<StepFunction2> {
    if n < 2 {
        return Err(Error::invalid("step approximation needs n >= 2"));
    }
    let grid = Grid2::uniform(n)?;
    let (xs, ys) = (grid.xs(), grid.ys());
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            values.push(if i == 0 || j == 0 { 0.0 } else { f.eval(ExtPoint2::new(xs[i + 1], ys[j + 1]))? });
        }
    }
    StepFunction2::new(xs.to_vec(), ys.to_vec(), values)
}

// Kernel mass of the quadrant (-inf, u] x (-inf, v].
fn poisson_quadrant(u: f64, v: f64, z: f64) -> f64 {
    let q = if u.is_infinite() && v.is_infinite() {
        0.25 * u.signum() * v.signum()
    } else if u.is_infinite() {
        u.signum() * atan(v / z) / (2.0 * PI)
    } else if v.is_infinite() {
        v.signum() * atan(u / z) / (2.0 * PI)
    } else {
        let h = hypot(hypot(u, v), z);
        atan((u / h) * (v / z)) / (2.0 * PI)
    };
    0.25 + (atan(u / z) + atan(v / z)) / (2.0 * PI) + q
}

/// `u_z = sigma * Phi_z` on the uniform grid. Writing `sigma` as a sum of
/// shifted quadrant indicators reduces every node to closed-form kernel
/// masses; on the upper edges these become the Cauchy marginals.
pub fn mollify_step(sigma: &StepFunction2, z: f64, resolution: usize) -> Result<Primitive> {
    poisson_kernel(0.0, 0.0, z)?;
    let grid = Grid2::uniform(resolution)?;
    let (nx, ny) = (sigma.xs.len() - 1, sigma.ys.len() - 1);
    let cell = |i: usize, j: usize| if i == 0 || j == 0 { 0.0 } else { sigma.cell(i - 1, j - 1) };
    let mut corners = Vec::new();
    for j in 1..=ny {
        for i in 1..=nx {
            let c = cell(i, j) - cell(i - 1, j) - cell(i, j - 1) + cell(i - 1, j - 1);
            if c != 0.0 {
                corners.push((sigma.xs[i - 1].value(), sigma.ys[j - 1].value(), c));
            }
        }
    }
    let mut values = Vec::with_capacity((resolution + 1) * (resolution + 1));
    for p in grid.nodes() {
        if p.x.is_neg_inf() || p.y.is_neg_inf() {
            values.push(0.0);
            continue;
        }
        let (x, y) = (p.x.value(), p.y.value());
        let mut s = 0.0;
        for &(px, py, c) in &corners {
            s += c * poisson_quadrant(x - px, y - py, z);
        }
        values.push(s);
    }
    let sample = GridSample::new(grid, values)?;
    Ok(Primitive::grid_sample(format!("mollified(z={z})"), sample))
}
