//! One-dimensional building blocks for the catalog.

use alloc::vec::Vec;

use crate::extplane::position;
use crate::num::{atan, cos, exp, sin, FRAC_PI_2, PI};
use crate::quad::adaptive;
use crate::ExtReal;

#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        sin(x) / x
    }
}

/// `Si(x) = int_0^x sin(s)/s ds`, tabulated by cumulative Gauss-Kronrod
/// quadrature on `[0, 30]` (step 1/128, cubic Hermite between nodes using the
/// exact derivative) and the asymptotic expansion beyond.
#[derive(Debug, Clone)]
pub struct SiTable {
    vals: Vec<f64>,
    ders: Vec<f64>,
}

const SI_STEPS_PER_UNIT: f64 = 128.0;
const SI_XMAX: f64 = 30.0;

impl SiTable {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new() -> Self {
        let n = (SI_XMAX * SI_STEPS_PER_UNIT) as usize;
        let h = 1.0 / SI_STEPS_PER_UNIT;
        let mut vals = Vec::with_capacity(n + 1);
        let mut ders = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        let per_step = Self::TOLERANCE / n as f64;
        for k in 0..=n {
            let x = k as f64 * h;
            vals.push(acc);
            ders.push(sinc(x));
            if k < n {
                acc += adaptive(sinc, x, x + h, per_step, 64).value;
            }
        }
        SiTable { vals, ders }
    }

    pub fn si(&self, x: f64) -> f64 {
        if x < 0.0 {
            return -self.si(-x);
        }
        if x == f64::INFINITY {
            return FRAC_PI_2;
        }
        if x >= SI_XMAX {
            return si_asymptotic(x);
        }
        let s = x * SI_STEPS_PER_UNIT;
        let k = (s as usize).min(self.vals.len() - 2);
        let t = s - k as f64;
        let h = 1.0 / SI_STEPS_PER_UNIT;
        let (y0, y1) = (self.vals[k], self.vals[k + 1]);
        let (d0, d1) = (self.ders[k] * h, self.ders[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1
    }
}

impl Default for SiTable {
    fn default() -> Self {
        Self::new()
    }
}

fn si_asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    // f ~ (1/x) sum (-1)^k (2k)!/x^{2k},  g ~ (1/x^2) sum (-1)^k (2k+1)!/x^{2k}
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, 1.0);
    for k in 0..40 {
        f += tf;
        g += tg;
        let kf = k as f64;
        let nf = -tf * (2.0 * kf + 1.0) * (2.0 * kf + 2.0) * inv2;
        let ng = -tg * (2.0 * kf + 2.0) * (2.0 * kf + 3.0) * inv2;
        if nf.abs() > tf.abs() || nf.abs() < 1e-18 {
            break;
        }
        tf = nf;
        tg = ng;
    }
    FRAC_PI_2 - f / x * cos(x) - g * inv2 * sin(x)
}

/// `v + sum_{k<depth} a^k sin(3^k pi v)` on `[0, 1]`, vanishing at 0.
/// Angles are tripled through the complex cube to avoid large arguments.
pub fn weierstrass(v: f64, a: f64, depth: u32) -> f64 {
    let (mut c, mut s) = (cos(PI * v), sin(PI * v));
    let mut amp = 1.0;
    let mut acc = v;
    for _ in 0..depth {
        acc += amp * s;
        let (c2, s2) = (c * c, s * s);
        let nc = c * (c2 - 3.0 * s2);
        let ns = s * (3.0 * c2 - s2);
        c = nc;
        s = ns;
        amp *= a;
    }
    acc
}

/// Cantor function on `[0, 1]` truncated after `depth` ternary digits and
/// finished linearly.
pub fn cantor(v: f64, depth: u32) -> f64 {
    let mut v = v.clamp(0.0, 1.0);
    let mut r = 0.0;
    let mut scale = 0.5;
    for _ in 0..depth {
        if v <= 1.0 / 3.0 {
            v *= 3.0;
        } else if v >= 2.0 / 3.0 {
            r += scale;
            v = 3.0 * v - 2.0;
        } else {
            return r + scale;
        }
        scale *= 0.5;
    }
    r + 2.0 * scale * v
}

/// Chart coordinate rescaled to `[0, 1]`.
#[inline]
pub fn unit_chart(t: ExtReal) -> f64 {
    0.5 * (1.0 + position(t))
}

/// `t^2 sin(t^-4)`, continuous on the extended line with value 0 at 0 and at infinity.
pub fn oscill_factor(t: f64) -> f64 {
    let a = t.abs();
    if a < 1e-70 || a == f64::INFINITY {
        0.0
    } else if a > 1e4 {
        1.0 / (t * t)
    } else {
        t * t * sin(1.0 / (t * t * t * t))
    }
}

/// The approximate-identity ramp: 0 for `x <= -n`, `x + n` on `[-n, 1-n]`, 1 beyond.
pub fn ramp(n: f64, x: f64) -> f64 {
    if x <= -n {
        0.0
    } else if x >= 1.0 - n {
        1.0
    } else {
        x + n
    }
}

/// `(pi/2 + arctan x)/pi`, exactly 0 and 1 at the endpoints.
#[inline]
pub fn arctan_cdf(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else {
        (FRAC_PI_2 + atan(x)) / PI
    }
}

/// `int_{-inf}^x sin(n s) on (0, 2 pi)`.
pub fn sin_strip(n: f64, x: f64) -> f64 {
    if x <= 0.0 || x >= 2.0 * PI {
        0.0
    } else {
        (1.0 - cos(n * x)) / n
    }
}

#[inline]
pub fn tent(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

/// Edge profiles for the boundary-value construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeProfile {
    /// `amp * (pi/2 + arctan x)/pi`
    Ramp { amp: f64 },
    /// `amp / (1 + e^{-(x-center)})`
    Logistic { amp: f64, center: f64 },
    /// `amp * e^{-(x-center)^2}`
    Bump { amp: f64, center: f64 },
}

impl EdgeProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            EdgeProfile::Ramp { amp } => amp * arctan_cdf(x),
            EdgeProfile::Logistic { amp, center } => {
                if x == f64::NEG_INFINITY {
                    0.0
                } else {
                    amp / (1.0 + exp(-(x - center)))
                }
            }
            EdgeProfile::Bump { amp, center } => {
                if x.is_infinite() {
                    0.0
                } else {
                    amp * exp(-(x - center) * (x - center))
                }
            }
        }
    }
}
