//! Primitives in `B_c`, continuous functions on the extended plane, and
//! multipliers of bounded Hardy-Krause variation.

mod bv;
mod catalog;
pub mod special;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::extplane::{ExtPoint2, ExtReal, Grid2};
use crate::{Error, Result};

pub use bv::{catalog_bv, BVFunction, Bv1, BvKind, GridConstant, BV_CATALOG};
pub(crate) use bv::SepTerm;
pub use catalog::{catalog_primitive, PRIMITIVE_CATALOG};

pub type Eval2 = Arc<dyn Fn(ExtPoint2) -> f64 + Send + Sync>;
pub type Eval1 = Arc<dyn Fn(ExtReal) -> f64 + Send + Sync>;

/// Anything that can be evaluated on the extended plane.
pub trait Field2: Send + Sync {
    fn eval(&self, p: ExtPoint2) -> Result<f64>;
}

#[inline]
pub(crate) fn check_finite(v: f64, p: ExtPoint2) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationFailure { at: alloc::vec![p.x.value(), p.y.value()], value: v })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Num(f64),
    Text(String),
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Num(v)
    }
}
impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

/// Catalog parameters. Extended reals may be given as numbers or as the
/// strings `"inf"` / `"-inf"`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(pub BTreeMap<String, Param>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, v: impl Into<Param>) -> Self {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn num(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(Param::Num(v)) if v.is_finite() => Ok(*v),
            Some(other) => Err(Error::invalid(alloc::format!("parameter {key}: expected a finite number, got {other:?}"))),
        }
    }

    pub fn ext(&self, key: &str, default: ExtReal) -> Result<ExtReal> {
        match self.0.get(key) {
            None => Ok(default),
            Some(Param::Num(v)) => ExtReal::new(*v),
            Some(Param::Text(s)) => parse_ext(s),
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.0.get(key) {
            Some(Param::Text(s)) => Some(s),
            _ => None,
        }
    }
}

pub fn parse_ext(s: &str) -> Result<ExtReal> {
    match s.trim() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtReal::POS_INF),
        "-inf" | "-infinity" => Ok(ExtReal::NEG_INF),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::invalid(alloc::format!("not an extended real: {other}")))
            .and_then(ExtReal::new),
    }
}

/// Node values on a [`Grid2`], bilinear in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSample {
    grid: Grid2,
    /// Row-major, `y` outer.
    values: Vec<f64>,
}

impl GridSample {
    pub fn new(grid: Grid2, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.xs().len() * grid.ys().len() {
            return Err(Error::invalid("grid sample size does not match its grid"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid sample values must be finite"));
        }
        Ok(GridSample { grid, values })
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.xs().len() + i]
    }

    pub fn eval(&self, p: ExtPoint2) -> f64 {
        let (i, wx) = self.grid.locate_x(p.x);
        let (j, wy) = self.grid.locate_y(p.y);
        let v00 = self.node(i, j);
        if wx == 0.0 && wy == 0.0 {
            return v00;
        }
        let v10 = self.node(i + 1, j);
        let v01 = self.node(i, j + 1);
        let v11 = self.node(i + 1, j + 1);
        let lo = (1.0 - wx) * v00 + wx * v10;
        let hi = (1.0 - wx) * v01 + wx * v11;
        (1.0 - wy) * lo + wy * hi
    }
}

#[derive(Clone)]
pub enum PrimitiveKind {
    ClosedForm(Eval2),
    GridSample(Arc<GridSample>),
    Catalog { name: String, params: Params, inner: Arc<Primitive> },
}

impl fmt::Debug for PrimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimitiveKind::ClosedForm(_) => f.write_str("ClosedForm"),
            PrimitiveKind::GridSample(g) => f.debug_tuple("GridSample").field(&g.grid().resolution()).finish(),
            PrimitiveKind::Catalog { name, params, .. } => {
                f.debug_struct("Catalog").field("name", name).field("params", params).finish()
            }
        }
    }
}

/// A continuous function on the extended plane vanishing on the `x = -inf`
/// and `y = -inf` edges: the primitive of a distribution.
#[derive(Clone)]
pub struct Primitive {
    label: String,
    kind: PrimitiveKind,
}

impl fmt::Debug for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            PrimitiveKind::ClosedForm(_) => "closedForm",
            PrimitiveKind::GridSample(_) => "gridSample",
            PrimitiveKind::Catalog { .. } => "catalog",
        };
        f.debug_struct("Primitive").field("label", &self.label).field("kind", &kind).finish()
    }
}

impl Primitive {
    pub fn closed_form(label: impl Into<String>, f: impl Fn(ExtPoint2) -> f64 + Send + Sync + 'static) -> Self {
        Primitive { label: label.into(), kind: PrimitiveKind::ClosedForm(Arc::new(f)) }
    }

    pub fn grid_sample(label: impl Into<String>, sample: GridSample) -> Self {
        Primitive { label: label.into(), kind: PrimitiveKind::GridSample(Arc::new(sample)) }
    }

    pub(crate) fn catalog_entry(name: &str, params: Params, inner: Primitive) -> Self {
        Primitive {
            label: name.to_string(),
            kind: PrimitiveKind::Catalog { name: name.to_string(), params, inner: Arc::new(inner) },
        }
    }

    pub fn zero() -> Self {
        Primitive::closed_form("zero", |_| 0.0)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &PrimitiveKind {
        &self.kind
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The grid sample behind this primitive, if it is one.
    pub fn as_grid_sample(&self) -> Option<&GridSample> {
        match &self.kind {
            PrimitiveKind::GridSample(g) => Some(g),
            PrimitiveKind::Catalog { inner, .. } => inner.as_grid_sample(),
            PrimitiveKind::ClosedForm(_) => None,
        }
    }

    /// Raw evaluation without the finiteness check.
    #[inline]
    pub fn value(&self, p: ExtPoint2) -> f64 {
        match &self.kind {
            PrimitiveKind::ClosedForm(f) => f(p),
            PrimitiveKind::GridSample(g) => g.eval(p),
            PrimitiveKind::Catalog { inner, .. } => inner.value(p),
        }
    }

    pub fn eval(&self, p: ExtPoint2) -> Result<f64> {
        check_finite(self.value(p), p)
    }

    /// Sample at every node of `grid`.
    pub fn sample(&self, grid: &Grid2) -> Result<GridSample> {
        let values = grid.nodes().map(|p| self.eval(p)).collect::<Result<Vec<_>>>()?;
        GridSample::new(grid.clone(), values)
    }

    /// Primitive of `c1 f + c2 g`.
    pub fn linear_combination(c1: f64, f: &Primitive, c2: f64, g: &Primitive) -> Primitive {
        let (f, g) = (f.clone(), g.clone());
        let label = alloc::format!("{c1}*{} + {c2}*{}", f.label, g.label);
        Primitive::closed_form(label, move |p| c1 * f.value(p) + c2 * g.value(p))
    }
}

impl Field2 for Primitive {
    fn eval(&self, p: ExtPoint2) -> Result<f64> {
        Primitive::eval(self, p)
    }
}

pub fn eval_primitive(f: &Primitive, p: ExtPoint2) -> Result<f64> {
    f.eval(p)
}

/// A continuous function on the extended plane with no boundary condition.
#[derive(Clone)]
pub struct ContinuousFn2 {
    label: String,
    f: Eval2,
}

impl fmt::Debug for ContinuousFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousFn2").field("label", &self.label).finish()
    }
}

impl ContinuousFn2 {
    pub fn new(label: impl Into<String>, f: impl Fn(ExtPoint2) -> f64 + Send + Sync + 'static) -> Self {
        ContinuousFn2 { label: label.into(), f: Arc::new(f) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn value(&self, p: ExtPoint2) -> f64 {
        (self.f)(p)
    }

    /// The primitive `G(x,y) - G(x,-inf) - G(-inf,y) + G(-inf,-inf)`, which has
    /// the same mixed derivative as `G` and vanishes on the lower edges.
    pub fn corrected(&self) -> Primitive {
        let g = self.f.clone();
        let label = alloc::format!("{} (corrected)", self.label);
        Primitive::closed_form(label, move |p| {
            let lo = ExtReal::NEG_INF;
            let top = g(p) - g(ExtPoint2::new(p.x, lo));
            let left = g(ExtPoint2::new(lo, p.y)) - g(ExtPoint2::new(lo, lo));
            top - left
        })
    }

    /// Treat the function as a primitive without correction.
    pub fn as_primitive_unchecked(&self) -> Primitive {
        let g = self.f.clone();
        Primitive { label: self.label.clone(), kind: PrimitiveKind::ClosedForm(g) }
    }
}

impl Field2 for ContinuousFn2 {
    fn eval(&self, p: ExtPoint2) -> Result<f64> {
        check_finite(self.value(p), p)
    }
}

/// A distribution `f = d12 F`, represented by its primitive.
#[derive(Debug, Clone)]
pub struct Distribution {
    primitive: Primitive,
}

impl Distribution {
    /// Wrap a primitive without running the validation sweep.
    pub fn new(primitive: Primitive) -> Self {
        Distribution { primitive }
    }

    /// Wrap a primitive after checking it with [`validate_primitive`].
    pub fn validated(primitive: Primitive, resolution: usize) -> Result<Self> {
        let report = validate_primitive(&primitive, resolution)?;
        if report.passed {
            Ok(Distribution { primitive })
        } else {
            Err(Error::precondition(alloc::format!("primitive {} failed validation", primitive.label())))
        }
    }

    pub fn zero() -> Self {
        Distribution::new(Primitive::zero())
    }

    pub fn primitive(&self) -> &Primitive {
        &self.primitive
    }

    pub fn label(&self) -> &str {
        self.primitive.label()
    }

    pub fn linear_combination(c1: f64, f: &Distribution, c2: f64, g: &Distribution) -> Distribution {
        Distribution::new(Primitive::linear_combination(c1, &f.primitive, c2, &g.primitive))
    }
}

impl From<Primitive> for Distribution {
    fn from(p: Primitive) -> Self {
        Distribution::new(p)
    }
}

impl Field2 for Distribution {
    fn eval(&self, p: ExtPoint2) -> Result<f64> {
        self.primitive.eval(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub resolution: usize,
    /// Largest `|F|` on the `x = -inf` and `y = -inf` edges.
    pub boundary_residual: f64,
    pub boundary_ok: bool,
    /// `(resolution, max adjacent-node |dF|)` over successive doublings.
    pub continuity: Vec<(usize, f64)>,
    pub continuity_ok: bool,
    pub passed: bool,
    /// Set when an evaluation failed; the sweep stops there.
    pub failure: Option<Error>,
}

/// Closed-form primitives may leave this much on the lower edges.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;
const CONTINUITY_DOUBLINGS: u32 = 3;

/// Check the `B_c` conditions on sample grids: vanishing lower edges and a
/// strictly decreasing maximal adjacent-node oscillation over three doublings.
pub fn validate_primitive(f: &Primitive, resolution: usize) -> Result<ValidationReport> {
    if resolution < 4 {
        return Err(Error::invalid("validation resolution must be at least 4"));
    }
    let mut report = ValidationReport {
        resolution,
        boundary_residual: 0.0,
        boundary_ok: false,
        continuity: Vec::new(),
        continuity_ok: false,
        passed: false,
        failure: None,
    };
    let exact = f.as_grid_sample().is_some();
    for k in 0..=CONTINUITY_DOUBLINGS {
        let r = resolution << k;
        let grid = Grid2::uniform(r)?;
        let sample = match f.sample(&grid) {
            Ok(s) => s,
            Err(e) => {
                report.failure = Some(e);
                return Ok(report);
            }
        };
        let n = r + 1;
        if k == 0 {
            let mut res: f64 = 0.0;
            for i in 0..n {
                res = res.max(sample.node(i, 0).abs()).max(sample.node(0, i).abs());
            }
            report.boundary_residual = res;
            report.boundary_ok = if exact { res == 0.0 } else { res <= BOUNDARY_TOLERANCE };
        }
        let mut osc: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let v = sample.node(i, j);
                if i + 1 < n {
                    osc = osc.max((sample.node(i + 1, j) - v).abs());
                }
                if j + 1 < n {
                    osc = osc.max((sample.node(i, j + 1) - v).abs());
                }
            }
        }
        report.continuity.push((r, osc));
    }
    report.continuity_ok = report.continuity.windows(2).all(|w| w[1].1 < w[0].1 || w[0].1 == 0.0 && w[1].1 == 0.0);
    report.passed = report.boundary_ok && report.continuity_ok;
    Ok(report)
}

/// Whether two primitives agree within `tol` at every node of each listed
/// resolution. With `tol = 0` this is the node-equality surrogate for
/// uniqueness of primitives.
pub fn primitives_agree(f: &Primitive, g: &Primitive, resolutions: &[usize], tol: f64) -> Result<bool> {
    for &r in resolutions {
        let grid = Grid2::uniform(r)?;
        for p in grid.nodes() {
            if (f.eval(p)? - g.eval(p)?).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
