//! Functions of bounded Hardy-Krause variation.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::special::ramp;
use super::{check_finite, Eval1, Eval2, Field2, Params};
use crate::extplane::{ExtPoint2, ExtReal, Feature, Grid2, Interval2};
use crate::{Error, Result};

/// A one-dimensional factor of a product multiplier.
#[derive(Clone)]
pub enum Bv1 {
    Constant(f64),
    /// Indicator of an interval with chosen closedness at each end.
    Indicator { lo: ExtReal, hi: ExtReal, lo_closed: bool, hi_closed: bool },
    /// The ramp `u_n`, or `u_n(-x)` when `flip` is set.
    Ramp { n: f64, flip: bool },
    /// Arbitrary evaluator with its known jumps and kinks.
    Closed { f: Eval1, features: Vec<Feature> },
}

impl fmt::Debug for Bv1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bv1::Constant(c) => write!(f, "Constant({c})"),
            Bv1::Indicator { lo, hi, lo_closed, hi_closed } => write!(
                f,
                "Indicator{}{lo}, {hi}{}",
                if *lo_closed { '[' } else { '(' },
                if *hi_closed { ']' } else { ')' }
            ),
            Bv1::Ramp { n, flip } => write!(f, "Ramp(n={n}, flip={flip})"),
            Bv1::Closed { features, .. } => write!(f, "Closed({} features)", features.len()),
        }
    }
}

impl Bv1 {
    pub fn closed(f: impl Fn(ExtReal) -> f64 + Send + Sync + 'static, features: Vec<Feature>) -> Self {
        Bv1::Closed { f: Arc::new(f), features }
    }

    #[inline]
    pub fn eval(&self, x: ExtReal) -> f64 {
        match self {
            Bv1::Constant(c) => *c,
            Bv1::Indicator { lo, hi, lo_closed, hi_closed } => {
                let above = if *lo_closed { x >= *lo } else { x > *lo };
                let below = if *hi_closed { x <= *hi } else { x < *hi };
                if above && below {
                    1.0
                } else {
                    0.0
                }
            }
            Bv1::Ramp { n, flip } => {
                let v = x.value();
                ramp(*n, if *flip { -v } else { v })
            }
            Bv1::Closed { f, .. } => f(x),
        }
    }

    pub fn features(&self) -> Vec<Feature> {
        match self {
            Bv1::Constant(_) => Vec::new(),
            Bv1::Indicator { lo, hi, .. } => alloc::vec![
                Feature { at: lo.value(), jump: true },
                Feature { at: hi.value(), jump: true }
            ],
            Bv1::Ramp { n, flip } => {
                let (a, b) = (-n, 1.0 - n);
                if *flip {
                    alloc::vec![Feature { at: -b, jump: false }, Feature { at: -a, jump: false }]
                } else {
                    alloc::vec![Feature { at: a, jump: false }, Feature { at: b, jump: false }]
                }
            }
            Bv1::Closed { features, .. } => features.clone(),
        }
    }

    /// `x -> self(x0 - x)`; an infinite `x0` gives the constant `self(x0)`.
    pub fn reflected(&self, x0: ExtReal) -> Bv1 {
        if !x0.is_finite() {
            return Bv1::Constant(self.eval(x0));
        }
        let c = x0.value();
        let inner = self.clone();
        let features = self.features().into_iter().map(|f| Feature { at: c - f.at, jump: f.jump }).collect();
        Bv1::closed(move |s| inner.eval(ExtReal::raw(c - s.value())), features)
    }
}

/// Cell values on a [`Grid2`]; cells are `(x_{i-1}, x_i] x (y_{j-1}, y_j]`, the
/// first cell on each axis also containing `-inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConstant {
    grid: Grid2,
    /// Row-major, `y` outer; `(nx-1)*(ny-1)` entries.
    values: Vec<f64>,
}

impl GridConstant {
    pub fn new(grid: Grid2, values: Vec<f64>) -> Result<Self> {
        let (nx, ny) = (grid.xs().len() - 1, grid.ys().len() - 1);
        if values.len() != nx * ny {
            return Err(Error::invalid("gridConstant needs one value per cell"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("gridConstant values must be finite"));
        }
        Ok(GridConstant { grid, values })
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn cell(axis: &[ExtReal], t: ExtReal) -> usize {
        axis.partition_point(|&s| s < t).clamp(1, axis.len() - 1) - 1
    }

    pub fn eval(&self, p: ExtPoint2) -> f64 {
        let i = Self::cell(self.grid.xs(), p.x);
        let j = Self::cell(self.grid.ys(), p.y);
        self.values[j * (self.grid.xs().len() - 1) + i]
    }
}

#[derive(Clone)]
pub enum BvKind {
    ClosedForm { f: Eval2, x_features: Vec<Feature>, y_features: Vec<Feature> },
    GridConstant(Arc<GridConstant>),
    /// Indicator of a closed interval.
    IndicatorInterval(Interval2),
    Product(Bv1, Bv1),
    Scaled(f64, Arc<BVFunction>),
    Sum(Arc<BVFunction>, Arc<BVFunction>),
    /// `(s, t) -> inner(x0 - s, y0 - t)`.
    Reflected { inner: Arc<BVFunction>, x0: ExtReal, y0: ExtReal },
    /// `inner` with its values on one coordinate line replaced.
    LineOverride { inner: Arc<BVFunction>, axis: u8, at: ExtReal, value: f64 },
}

impl fmt::Debug for BvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BvKind::ClosedForm { x_features, y_features, .. } => f
                .debug_struct("ClosedForm")
                .field("x_features", x_features)
                .field("y_features", y_features)
                .finish(),
            BvKind::GridConstant(g) => f.debug_tuple("GridConstant").field(&g.grid().resolution()).finish(),
            BvKind::IndicatorInterval(i) => f.debug_tuple("IndicatorInterval").field(i).finish(),
            BvKind::Product(u, v) => f.debug_tuple("Product").field(u).field(v).finish(),
            BvKind::Scaled(c, g) => f.debug_tuple("Scaled").field(c).field(g).finish(),
            BvKind::Sum(g, h) => f.debug_tuple("Sum").field(g).field(h).finish(),
            BvKind::Reflected { inner, x0, y0 } => {
                f.debug_struct("Reflected").field("inner", inner).field("x0", x0).field("y0", y0).finish()
            }
            BvKind::LineOverride { inner, axis, at, value } => f
                .debug_struct("LineOverride")
                .field("inner", inner)
                .field("axis", axis)
                .field("at", at)
                .field("value", value)
                .finish(),
        }
    }
}

/// A multiplier `g` of bounded Hardy-Krause variation on the extended plane.
#[derive(Clone)]
pub struct BVFunction {
    label: String,
    kind: BvKind,
}

impl fmt::Debug for BVFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BVFunction").field("label", &self.label).finish()
    }
}

/// One term `coef * u(x) v(y)` of a separable multiplier.
#[derive(Debug, Clone)]
pub(crate) struct SepTerm {
    pub coef: f64,
    pub u: Bv1,
    pub v: Bv1,
}

impl BVFunction {
    pub fn new(label: impl Into<String>, kind: BvKind) -> Self {
        BVFunction { label: label.into(), kind }
    }

    pub fn closed_form(
        label: impl Into<String>,
        f: impl Fn(ExtPoint2) -> f64 + Send + Sync + 'static,
        x_features: Vec<Feature>,
        y_features: Vec<Feature>,
    ) -> Self {
        BVFunction::new(label, BvKind::ClosedForm { f: Arc::new(f), x_features, y_features })
    }

    pub fn product(label: impl Into<String>, u: Bv1, v: Bv1) -> Self {
        BVFunction::new(label, BvKind::Product(u, v))
    }

    pub fn grid_constant(label: impl Into<String>, g: GridConstant) -> Self {
        BVFunction::new(label, BvKind::GridConstant(Arc::new(g)))
    }

    pub fn indicator(i: Interval2) -> Self {
        BVFunction::new(format!("indicator[{},{}]x[{},{}]", i.a, i.b, i.c, i.d), BvKind::IndicatorInterval(i))
    }

    pub fn constant(c: f64) -> Self {
        BVFunction::product(format!("constant({c})"), Bv1::Constant(c), Bv1::Constant(1.0))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &BvKind {
        &self.kind
    }

    pub fn scaled(&self, c: f64) -> Self {
        BVFunction::new(format!("{c}*{}", self.label), BvKind::Scaled(c, Arc::new(self.clone())))
    }

    pub fn plus(&self, other: &BVFunction) -> Self {
        BVFunction::new(
            format!("{} + {}", self.label, other.label),
            BvKind::Sum(Arc::new(self.clone()), Arc::new(other.clone())),
        )
    }

    /// `(s, t) -> g(x0 - s, y0 - t)`, the kernel of a convolution at `(x0, y0)`.
    pub fn reflected(&self, x0: ExtReal, y0: ExtReal) -> Self {
        BVFunction::new(
            format!("{}(({x0},{y0}) - .)", self.label),
            BvKind::Reflected { inner: Arc::new(self.clone()), x0, y0 },
        )
    }

    /// Replace the values on the line `x = at` (axis 1) or `y = at` (axis 2).
    pub fn with_line_value(&self, axis: u8, at: ExtReal, value: f64) -> Result<Self> {
        if axis != 1 && axis != 2 {
            return Err(Error::invalid("axis must be 1 or 2"));
        }
        Ok(BVFunction::new(
            format!("{} (line {axis}={at} set to {value})", self.label),
            BvKind::LineOverride { inner: Arc::new(self.clone()), axis, at, value },
        ))
    }

    #[inline]
    pub fn value(&self, p: ExtPoint2) -> f64 {
        match &self.kind {
            BvKind::ClosedForm { f, .. } => f(p),
            BvKind::GridConstant(g) => g.eval(p),
            BvKind::IndicatorInterval(i) => {
                if i.contains(p) {
                    1.0
                } else {
                    0.0
                }
            }
            BvKind::Product(u, v) => u.eval(p.x) * v.eval(p.y),
            BvKind::Scaled(c, g) => c * g.value(p),
            BvKind::Sum(g, h) => g.value(p) + h.value(p),
            BvKind::Reflected { inner, x0, y0 } => inner.value(ExtPoint2::new(reflect(*x0, p.x), reflect(*y0, p.y))),
            BvKind::LineOverride { inner, axis, at, value } => {
                let on = if *axis == 1 { p.x == *at } else { p.y == *at };
                if on {
                    *value
                } else {
                    inner.value(p)
                }
            }
        }
    }

    pub fn eval(&self, p: ExtPoint2) -> Result<f64> {
        check_finite(self.value(p), p)
    }

    /// Coordinates along x where `g` jumps or kinks.
    pub fn x_features(&self) -> Vec<Feature> {
        self.features(true)
    }

    /// Coordinates along y where `g` jumps or kinks.
    pub fn y_features(&self) -> Vec<Feature> {
        self.features(false)
    }

    fn features(&self, along_x: bool) -> Vec<Feature> {
        let jump = |t: ExtReal| Feature { at: t.value(), jump: true };
        let mut out = match &self.kind {
            BvKind::ClosedForm { x_features, y_features, .. } => {
                if along_x {
                    x_features.clone()
                } else {
                    y_features.clone()
                }
            }
            BvKind::GridConstant(g) => {
                let axis = if along_x { g.grid().xs() } else { g.grid().ys() };
                axis[1..axis.len() - 1].iter().map(|&t| jump(t)).collect()
            }
            BvKind::IndicatorInterval(i) => {
                if along_x {
                    alloc::vec![jump(i.a), jump(i.b)]
                } else {
                    alloc::vec![jump(i.c), jump(i.d)]
                }
            }
            BvKind::Product(u, v) => {
                if along_x {
                    u.features()
                } else {
                    v.features()
                }
            }
            BvKind::Scaled(_, g) => g.features(along_x),
            BvKind::Sum(g, h) => {
                let mut f = g.features(along_x);
                f.extend(h.features(along_x));
                f
            }
            BvKind::Reflected { inner, x0, y0 } => {
                let c = if along_x { *x0 } else { *y0 };
                if c.is_finite() {
                    inner
                        .features(along_x)
                        .into_iter()
                        .map(|f| Feature { at: c.value() - f.at, jump: f.jump })
                        .collect()
                } else {
                    Vec::new()
                }
            }
            BvKind::LineOverride { inner, axis, at, .. } => {
                let mut f = inner.features(along_x);
                if (*axis == 1) == along_x {
                    f.push(jump(*at));
                }
                f
            }
        };
        out.retain(|f| f.at.is_finite());
        out.sort_by(|a, b| a.at.total_cmp(&b.at).then(b.jump.cmp(&a.jump)));
        out.dedup_by(|a, b| a.at == b.at);
        out
    }

    /// Decomposition into `sum coef * u(x) v(y)` when the structure allows it.
    pub(crate) fn separable(&self) -> Option<Vec<SepTerm>> {
        match &self.kind {
            BvKind::Product(u, v) => Some(alloc::vec![SepTerm { coef: 1.0, u: u.clone(), v: v.clone() }]),
            BvKind::IndicatorInterval(i) => Some(alloc::vec![SepTerm {
                coef: 1.0,
                u: Bv1::Indicator { lo: i.a, hi: i.b, lo_closed: true, hi_closed: true },
                v: Bv1::Indicator { lo: i.c, hi: i.d, lo_closed: true, hi_closed: true },
            }]),
            BvKind::Scaled(c, g) => {
                let mut terms = g.separable()?;
                for t in &mut terms {
                    t.coef *= c;
                }
                Some(terms)
            }
            BvKind::Sum(g, h) => {
                let mut terms = g.separable()?;
                terms.extend(h.separable()?);
                Some(terms)
            }
            BvKind::Reflected { inner, x0, y0 } => Some(
                inner
                    .separable()?
                    .into_iter()
                    .map(|t| SepTerm { coef: t.coef, u: t.u.reflected(*x0), v: t.v.reflected(*y0) })
                    .collect(),
            ),
            _ => None,
        }
    }
}

#[inline]
fn reflect(c: ExtReal, s: ExtReal) -> ExtReal {
    if c.is_finite() {
        ExtReal::raw(c.value() - s.value())
    } else {
        c
    }
}

impl Field2 for BVFunction {
    fn eval(&self, p: ExtPoint2) -> Result<f64> {
        BVFunction::eval(self, p)
    }
}

pub const BV_CATALOG: &[&str] = &[
    "quadrantIndicator",
    "halfPlaneIndicator",
    "intervalIndicator",
    "pointIndicator",
    "approxIdentity",
    "approxIdentityReflected",
    "constant",
    "diagonalIndicator",
];

/// Build a catalog multiplier.
///
/// | name | function | parameters |
/// |---|---|---|
/// | `quadrantIndicator` | indicator of `[-inf,x) x [-inf,y)` | `x`, `y` (0) |
/// | `halfPlaneIndicator` | indicator of `x >= 0` | |
/// | `intervalIndicator` | indicator of `[a,b] x [c,d]` | `a`, `b`, `c`, `d` (0, 1, 0, 1) |
/// | `pointIndicator` | indicator of `{(x,y)}` | `x`, `y` (0) |
/// | `approxIdentity` | `u_n(x) u_n(y)` | `n` (1) |
/// | `approxIdentityReflected` | `u_n(-x) u_n(-y)` | `n` (1) |
/// | `constant` | `c` | `c` (1) |
/// | `diagonalIndicator` | indicator of `y > x`, not of bounded variation | |
pub fn catalog_bv(name: &str, params: &Params) -> Result<BVFunction> {
    let ninf = ExtReal::NEG_INF;
    Ok(match name {
        "quadrantIndicator" => {
            let x = params.ext("x", ExtReal::ZERO)?;
            let y = params.ext("y", ExtReal::ZERO)?;
            BVFunction::product(
                format!("quadrantIndicator({x},{y})"),
                Bv1::Indicator { lo: ninf, hi: x, lo_closed: true, hi_closed: false },
                Bv1::Indicator { lo: ninf, hi: y, lo_closed: true, hi_closed: false },
            )
        }
        "halfPlaneIndicator" | "halfPlane" => BVFunction::product(
            "halfPlaneIndicator",
            Bv1::Indicator { lo: ExtReal::ZERO, hi: ExtReal::POS_INF, lo_closed: true, hi_closed: true },
            Bv1::Constant(1.0),
        ),
        "intervalIndicator" => {
            let a = params.ext("a", ExtReal::ZERO)?;
            let b = params.ext("b", ExtReal::of(1.0))?;
            let c = params.ext("c", ExtReal::ZERO)?;
            let d = params.ext("d", ExtReal::of(1.0))?;
            if a > b || c > d {
                return Err(Error::invalid("intervalIndicator needs a <= b and c <= d"));
            }
            BVFunction::indicator(Interval2 { a, b, c, d })
        }
        "pointIndicator" => {
            let x = params.ext("x", ExtReal::ZERO)?;
            let y = params.ext("y", ExtReal::ZERO)?;
            BVFunction::indicator(Interval2 { a: x, b: x, c: y, d: y })
        }
        "approxIdentity" | "approxIdentityReflected" => {
            let n = params.num("n", 1.0)?;
            let flip = name == "approxIdentityReflected";
            BVFunction::product(format!("{name}({n})"), Bv1::Ramp { n, flip }, Bv1::Ramp { n, flip })
        }
        "constant" => BVFunction::constant(params.num("c", 1.0)?),
        "diagonalIndicator" => BVFunction::closed_form(
            "diagonalIndicator",
            |p| if p.y > p.x { 1.0 } else { 0.0 },
            Vec::new(),
            Vec::new(),
        ),
        other => return Err(Error::invalid(format!("unknown catalog multiplier: {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_indicator_is_half_open() {
        let g = catalog_bv("quadrantIndicator", &Params::new().with("x", 1.0).with("y", 2.0)).unwrap();
        assert_eq!(g.value(ExtPoint2::of(f64::NEG_INFINITY, f64::NEG_INFINITY)), 1.0);
        assert_eq!(g.value(ExtPoint2::of(0.999, 1.999)), 1.0);
        assert_eq!(g.value(ExtPoint2::of(1.0, 0.0)), 0.0);
        assert_eq!(g.value(ExtPoint2::of(0.0, 2.0)), 0.0);
        assert_eq!(g.x_features(), alloc::vec![Feature { at: 1.0, jump: true }]);
    }

    #[test]
    fn grid_constant_cells_are_upper_closed() {
        let grid = Grid2::uniform(2).unwrap();
        let g = GridConstant::new(grid, alloc::vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(g.eval(ExtPoint2::of(f64::NEG_INFINITY, f64::NEG_INFINITY)), 1.0);
        assert_eq!(g.eval(ExtPoint2::of(0.0, 0.0)), 1.0);
        assert_eq!(g.eval(ExtPoint2::of(0.1, 0.0)), 2.0);
        assert_eq!(g.eval(ExtPoint2::of(0.0, f64::INFINITY)), 3.0);
        assert_eq!(g.eval(ExtPoint2::of(f64::INFINITY, f64::INFINITY)), 4.0);
    }

    #[test]
    fn reflection_keeps_infinite_centres() {
        let g = catalog_bv("quadrantIndicator", &Params::new()).unwrap();
        let k = g.reflected(ExtReal::of(1.0), ExtReal::POS_INF);
        // g(1 - s, inf) = 0 for every s
        assert_eq!(k.value(ExtPoint2::of(5.0, -3.0)), 0.0);
        let k = g.reflected(ExtReal::of(1.0), ExtReal::of(1.0));
        assert_eq!(k.value(ExtPoint2::of(2.0, 2.0)), 1.0);
        assert_eq!(k.value(ExtPoint2::of(1.0, 2.0)), 0.0);
        assert_eq!(k.x_features(), alloc::vec![Feature { at: 1.0, jump: true }]);
        assert!(k.separable().is_some());
    }
}
