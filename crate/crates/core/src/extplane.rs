//! Extended reals, the compactifying chart, points, intervals and grids.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::num::Dd;
use crate::{Error, Result};

/// A point of `[-inf, inf]`. Never NaN.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtKind {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const NEG_INF: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const POS_INF: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// IEEE infinities map to the infinite endpoints; NaN is rejected.
    pub fn new(v: f64) -> Result<Self> {
        if v.is_nan() {
            Err(Error::invalid("NaN is not an extended real"))
        } else {
            Ok(ExtReal(v))
        }
    }

    /// Like [`ExtReal::new`] but panics on NaN. Meant for literals.
    #[track_caller]
    pub fn of(v: f64) -> Self {
        assert!(!v.is_nan(), "NaN is not an extended real");
        ExtReal(v)
    }

    pub fn from_kind(k: ExtKind) -> Result<Self> {
        match k {
            ExtKind::NegInf => Ok(Self::NEG_INF),
            ExtKind::PosInf => Ok(Self::POS_INF),
            ExtKind::Finite(v) if v.is_finite() => Ok(ExtReal(v)),
            ExtKind::Finite(v) => Err(Error::invalid(alloc::format!("finite payload {v} is not finite"))),
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn kind(self) -> ExtKind {
        if self.0 == f64::NEG_INFINITY {
            ExtKind::NegInf
        } else if self.0 == f64::INFINITY {
            ExtKind::PosInf
        } else {
            ExtKind::Finite(self.0)
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
    #[inline]
    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }
    #[inline]
    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn checked_add(self, o: ExtReal) -> Result<ExtReal> {
        let s = self.0 + o.0;
        if s.is_nan() {
            Err(Error::invalid("inf - inf is undefined"))
        } else {
            Ok(ExtReal(s))
        }
    }

    pub fn checked_sub(self, o: ExtReal) -> Result<ExtReal> {
        self.checked_add(-o)
    }

    /// `self - s` for a finite shift; infinite points stay put.
    #[inline]
    pub fn shifted(self, s: f64) -> ExtReal {
        debug_assert!(s.is_finite());
        ExtReal(self.0 - s)
    }

    pub(crate) fn raw(v: f64) -> ExtReal {
        debug_assert!(!v.is_nan());
        ExtReal(v)
    }
}

impl core::ops::Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal(-self.0)
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            ExtKind::NegInf => f.write_str("-inf"),
            ExtKind::PosInf => f.write_str("inf"),
            ExtKind::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtPoint2 {
    pub x: ExtReal,
    pub y: ExtReal,
}

impl ExtPoint2 {
    pub fn new(x: ExtReal, y: ExtReal) -> Self {
        ExtPoint2 { x, y }
    }

    /// Panics on NaN coordinates.
    #[track_caller]
    pub fn of(x: f64, y: f64) -> Self {
        ExtPoint2 { x: ExtReal::of(x), y: ExtReal::of(y) }
    }
}

/// `[a,b] x [c,d]` with `a <= b`, `c <= d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval2 {
    pub a: ExtReal,
    pub b: ExtReal,
    pub c: ExtReal,
    pub d: ExtReal,
}

impl Interval2 {
    pub const PLANE: Interval2 = Interval2 {
        a: ExtReal::NEG_INF,
        b: ExtReal::POS_INF,
        c: ExtReal::NEG_INF,
        d: ExtReal::POS_INF,
    };

    /// Lower-left quadrant `[-inf,x] x [-inf,y]`.
    pub fn quadrant(x: ExtReal, y: ExtReal) -> Interval2 {
        Interval2 { a: ExtReal::NEG_INF, b: x, c: ExtReal::NEG_INF, d: y }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b || self.c == self.d
    }

    pub fn contains(&self, p: ExtPoint2) -> bool {
        self.a <= p.x && p.x <= self.b && self.c <= p.y && p.y <= self.d
    }

    /// Corners in the order `(a,c), (b,d), (a,d), (b,c)`.
    pub fn corner_points(&self) -> [ExtPoint2; 4] {
        corner_points(self)
    }
}

pub fn corner_points(i: &Interval2) -> [ExtPoint2; 4] {
    [
        ExtPoint2::new(i.a, i.c),
        ExtPoint2::new(i.b, i.d),
        ExtPoint2::new(i.a, i.d),
        ExtPoint2::new(i.b, i.c),
    ]
}

/// A normalized interval together with the sign of the original limit order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedInterval {
    pub interval: Interval2,
    pub sign: f64,
    pub degenerate: bool,
}

impl From<Interval2> for OrientedInterval {
    fn from(interval: Interval2) -> Self {
        OrientedInterval { interval, sign: 1.0, degenerate: interval.is_degenerate() }
    }
}

pub fn make_interval(a: ExtReal, b: ExtReal, c: ExtReal, d: ExtReal) -> OrientedInterval {
    let mut sign = 1.0;
    let (a, b) = if a <= b {
        (a, b)
    } else {
        sign = -sign;
        (b, a)
    };
    let (c, d) = if c <= d {
        (c, d)
    } else {
        sign = -sign;
        (d, c)
    };
    let interval = Interval2 { a, b, c, d };
    OrientedInterval { interval, sign, degenerate: interval.is_degenerate() }
}

pub fn make_interval_f64(a: f64, b: f64, c: f64, d: f64) -> Result<OrientedInterval> {
    Ok(make_interval(ExtReal::new(a)?, ExtReal::new(b)?, ExtReal::new(c)?, ExtReal::new(d)?))
}

/// The chart `t -> t/(1+|t|)` from `[-inf, inf]` onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Chart;

/// Chart image of an extended real, kept in double-double form so that
/// [`Chart::inverse`] recovers the original value to within one ulp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartCoord {
    pos: f64,
    repr: Repr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Repr {
    End,
    // u itself, for |t| <= 1
    Inner(Dd),
    // 1 + |t| and the sign, for |t| > 1
    Outer(bool, Dd),
}

impl ChartCoord {
    /// The coordinate in `[-1, 1]`.
    pub fn position(&self) -> f64 {
        self.pos
    }
}

impl Chart {
    pub const NAME: &'static str = "t/(1+|t|)";

    pub fn forward(&self, t: ExtReal) -> ChartCoord {
        let v = t.value();
        if !v.is_finite() {
            return ChartCoord { pos: v.signum(), repr: Repr::End };
        }
        let s = crate::num::dd_sum(1.0, v.abs());
        if v.abs() <= 1.0 {
            let u = Dd::new(v).div(s);
            ChartCoord { pos: u.to_f64(), repr: Repr::Inner(u) }
        } else {
            let w = Dd::new(1.0).div(s);
            let p = Dd::new(1.0).sub(w).to_f64();
            let neg = v < 0.0;
            ChartCoord { pos: if neg { -p } else { p }, repr: Repr::Outer(neg, s) }
        }
    }

    pub fn inverse(&self, c: ChartCoord) -> ExtReal {
        match c.repr {
            Repr::End => {
                if c.pos > 0.0 {
                    ExtReal::POS_INF
                } else {
                    ExtReal::NEG_INF
                }
            }
            Repr::Inner(u) => {
                let w = Dd::new(1.0).sub(u.abs());
                ExtReal::raw(u.div(w).to_f64())
            }
            Repr::Outer(neg, s) => {
                let t = s.sub(Dd::new(1.0)).to_f64();
                ExtReal::raw(if neg { -t } else { t })
            }
        }
    }

    /// Plain double chart position, used wherever only ordering and
    /// interpolation weights matter.
    #[inline]
    pub fn position(&self, t: ExtReal) -> f64 {
        position(t)
    }

    /// Inverse chart of a plain position; `+-1` map to the infinite endpoints.
    pub fn from_position(&self, u: f64) -> ExtReal {
        from_position(u)
    }
}

#[inline]
pub(crate) fn position(t: ExtReal) -> f64 {
    let v = t.value();
    if v == f64::INFINITY {
        1.0
    } else if v == f64::NEG_INFINITY {
        -1.0
    } else {
        v / (1.0 + v.abs())
    }
}

pub(crate) fn from_position(u: f64) -> ExtReal {
    if u >= 1.0 {
        ExtReal::POS_INF
    } else if u <= -1.0 {
        ExtReal::NEG_INF
    } else if u.abs() <= 0.5 {
        let w = crate::num::dd_sum(1.0, -u.abs());
        ExtReal::raw(Dd::new(u).div(w).to_f64())
    } else {
        // 1 - |u| is exact here
        ExtReal::raw(u / (1.0 - u.abs()))
    }
}

/// A tensor grid of `[-inf, inf]^2`. Both axes start at `-inf` and end at `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    xs: Vec<ExtReal>,
    ys: Vec<ExtReal>,
    xpos: Vec<f64>,
    ypos: Vec<f64>,
    resolution: usize,
}

pub fn uniform_grid(resolution: usize, _chart: &Chart) -> Result<Grid2> {
    Grid2::uniform(resolution)
}

pub(crate) fn uniform_positions(resolution: usize) -> Vec<f64> {
    let r = resolution as f64;
    (0..=resolution).map(|k| (2.0 * k as f64 - r) / r).collect()
}

pub(crate) fn uniform_nodes(resolution: usize) -> Vec<ExtReal> {
    uniform_positions(resolution).into_iter().map(from_position).collect()
}

impl Grid2 {
    pub fn uniform(resolution: usize) -> Result<Grid2> {
        if resolution < 2 {
            return Err(Error::invalid("grid resolution must be at least 2"));
        }
        let pos = uniform_positions(resolution);
        let nodes: Vec<ExtReal> = pos.iter().map(|&u| from_position(u)).collect();
        Ok(Grid2 { xs: nodes.clone(), ys: nodes, xpos: pos.clone(), ypos: pos, resolution })
    }

    /// Grid from explicit axes. `resolution` is recorded as the number of x cells.
    pub fn from_axes(xs: Vec<ExtReal>, ys: Vec<ExtReal>) -> Result<Grid2> {
        for axis in [&xs, &ys] {
            if axis.len() < 2 || !axis[0].is_neg_inf() || !axis[axis.len() - 1].is_pos_inf() {
                return Err(Error::invalid("grid axes must run from -inf to inf"));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("grid axes must be strictly ascending"));
            }
        }
        let xpos = xs.iter().map(|&t| position(t)).collect();
        let ypos = ys.iter().map(|&t| position(t)).collect();
        let resolution = xs.len() - 1;
        Ok(Grid2 { xs, ys, xpos, ypos, resolution })
    }

    pub fn xs(&self) -> &[ExtReal] {
        &self.xs
    }
    pub fn ys(&self) -> &[ExtReal] {
        &self.ys
    }
    pub fn resolution(&self) -> usize {
        self.resolution
    }
    pub fn x_positions(&self) -> &[f64] {
        &self.xpos
    }
    pub fn y_positions(&self) -> &[f64] {
        &self.ypos
    }

    /// Row-major (y outer, x inner) iteration over all nodes.
    pub fn nodes(&self) -> impl Iterator<Item = ExtPoint2> + '_ {
        self.ys
            .iter()
            .flat_map(move |&y| self.xs.iter().map(move |&x| ExtPoint2::new(x, y)))
    }

    pub(crate) fn locate_x(&self, t: ExtReal) -> (usize, f64) {
        locate(&self.xs, &self.xpos, t)
    }
    pub(crate) fn locate_y(&self, t: ExtReal) -> (usize, f64) {
        locate(&self.ys, &self.ypos, t)
    }
}

// Cell index i and weight w in [0,1] so that t sits between nodes i and i+1.
fn locate(nodes: &[ExtReal], pos: &[f64], t: ExtReal) -> (usize, f64) {
    let n = nodes.len();
    match nodes.binary_search(&t) {
        Ok(i) => {
            if i + 1 == n {
                (n - 2, 1.0)
            } else {
                (i, 0.0)
            }
        }
        Err(i) => {
            let i = i.clamp(1, n - 1) - 1;
            let (p0, p1) = (pos[i], pos[i + 1]);
            let w = ((position(t) - p0) / (p1 - p0)).clamp(0.0, 1.0);
            (i, w)
        }
    }
}

/// A coordinate line that a partition must resolve: a jump is straddled by
/// its neighbouring doubles, a kink is inserted as a plain node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub at: f64,
    pub jump: bool,
}

/// Nodes of `[lo, hi]` at refinement `level`: the base nodes (chart-uniform
/// nodes of resolution `base`, the endpoints, and the features) with every base
/// segment cut into `2^level` chart-equal pieces.
pub(crate) fn refine_partition(
    lo: ExtReal,
    hi: ExtReal,
    base: usize,
    features: &[Feature],
    level: u32,
) -> Vec<ExtReal> {
    let mut nodes = Vec::with_capacity(base + 2 + 3 * features.len());
    nodes.push(lo);
    nodes.push(hi);
    for t in uniform_nodes(base) {
        if lo < t && t < hi {
            nodes.push(t);
        }
    }
    for f in features {
        if !f.at.is_finite() {
            continue;
        }
        let candidates = if f.jump { [f.at.next_down(), f.at, f.at.next_up()] } else { [f.at; 3] };
        for v in candidates {
            let t = ExtReal::raw(v);
            if lo < t && t < hi {
                nodes.push(t);
            }
        }
    }
    nodes.sort_unstable();
    nodes.dedup();
    if level == 0 || nodes.len() < 2 {
        return nodes;
    }
    let m = 1usize << level;
    let mut out = Vec::with_capacity((nodes.len() - 1) * m + 1);
    out.push(nodes[0]);
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (pa, pb) = (position(a), position(b));
        for j in 1..m {
            let s = j as f64 / m as f64;
            let t = from_position(pa + (pb - pa) * s);
            if a < t && t < b && Some(&t) > out.last() {
                out.push(t);
            }
        }
        out.push(b);
    }
    out
}

/// Tag of the cell `[a, b]`: chart midpoint, or the infinite endpoint for
/// cells touching the boundary.
#[inline]
pub(crate) fn cell_tag(a: ExtReal, b: ExtReal) -> ExtReal {
    if a.is_neg_inf() {
        a
    } else if b.is_pos_inf() {
        b
    } else {
        let t = from_position(0.5 * (position(a) + position(b)));
        t.clamp(a, b)
    }
}
