//! One-dimensional quadrature: Gauss-Legendre rules and a globally adaptive
//! Gauss-Kronrod (7/15) integrator.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::num::{cos, PI};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive 1-d integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral1 {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    /// Number of subintervals used.
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Option<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let value = resk * h;
    if !value.is_finite() {
        return None;
    }
    // Rounding floor: the Kronrod sum cannot be trusted below a few ulps of
    // the absolute integrand mass.
    let floor = 50.0 * f64::EPSILON * resabs * h.abs();
    let error = ((resk - resg) * h).abs().max(floor);
    Some((value, error))
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`,
/// bisecting the piece with the largest error until the summed error is at
/// most `tol` or `max_intervals` pieces are in use. The integrand is never
/// evaluated at the endpoints.
pub fn adaptive(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, max_intervals: usize) -> Integral1 {
    if a == b {
        return Integral1 { value: 0.0, error: 0.0, converged: true, intervals: 0 };
    }
    let Some((v, e)) = gk15(&mut f, a, b) else {
        return Integral1 { value: f64::NAN, error: f64::INFINITY, converged: false, intervals: 1 };
    };
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total_err = e;
    while total_err > tol && heap.len() < max_intervals {
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        if !(p.a < m && m < p.b) {
            heap.push(p);
            break;
        }
        let (Some((v1, e1)), Some((v2, e2))) = (gk15(&mut f, p.a, m), gk15(&mut f, m, p.b)) else {
            return Integral1 { value: f64::NAN, error: f64::INFINITY, converged: false, intervals: heap.len() };
        };
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
        total_err = heap.iter().map(|q| q.error).sum();
    }
    // Sum in position order so the result does not depend on heap layout.
    let mut pieces: Vec<Piece> = heap.into_vec();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = pieces.iter().map(|p| p.value).sum();
    let error: f64 = pieces.iter().map(|p| p.error).sum();
    Integral1 { value, error, converged: error <= tol, intervals: pieces.len() }
}

/// Maps for improper domains onto finite parameter intervals.
pub mod maps {
    /// `(0, inf)` from `t in (0, 1)`: `x = t/(1-t)`. Returns `(x, dx/dt)`.
    #[inline]
    pub fn half_line(t: f64) -> (f64, f64) {
        let s = 1.0 - t;
        (t / s, 1.0 / (s * s))
    }

    /// `(-inf, inf)` from `t in (-1, 1)` through the chart inverse.
    #[inline]
    pub fn real_line(t: f64) -> (f64, f64) {
        let s = 1.0 - t.abs();
        (t / s, 1.0 / (s * s))
    }
}
