//! Variation on the extended line and plane: one-dimensional, Vitali,
//! sectional, and the Hardy-Krause norm.

use alloc::vec::Vec;

use crate::extplane::{refine_partition, ExtPoint2, ExtReal, Feature};
use crate::primitive::BVFunction;
use crate::{Error, Result};

/// Estimates above this are reported as divergent.
pub const DIVERGENCE_GUARD: f64 = 1e12;
/// Refinement levels beyond the base partition.
pub const MAX_DOUBLINGS: u32 = 10;
const BASE: usize = 4;
const GRID_CAP: usize = 1 << 24;

/// A supremum over nested partitions, with the per-level values.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationEstimate {
    pub value: f64,
    /// Nondecreasing: each entry is the running maximum over levels.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub diverged: bool,
}

/// Whether the last five increments of a trace fail to decay.
pub(crate) fn trace_diverges(trace: &[f64], tol: f64) -> bool {
    if trace.len() < 6 {
        return false;
    }
    let inc: Vec<f64> = trace.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &inc[inc.len() - 5..];
    tail.iter().all(|&d| d > tol) && tail.windows(2).all(|w| w[1] >= 0.9 * w[0])
}

// Run level computations until the running maximum is unchanged over two
// doublings, exceeds the guard, or shows non-decaying growth.
fn refine(tol: f64, mut level: impl FnMut(u32) -> Result<Option<f64>>) -> Result<VariationEstimate> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut diverged = false;
    for k in 0..=MAX_DOUBLINGS {
        let Some(raw) = level(k)? else { break };
        let v = trace.last().map_or(raw, |&p: &f64| p.max(raw));
        trace.push(v);
        if v > DIVERGENCE_GUARD {
            diverged = true;
            break;
        }
        let n = trace.len();
        if k >= 2 && v - trace[n - 2] <= tol && trace[n - 2] - trace[n - 3] <= tol {
            converged = true;
            break;
        }
        if trace_diverges(&trace, tol) {
            diverged = true;
            break;
        }
    }
    let value = trace.last().copied().unwrap_or(0.0);
    Ok(VariationEstimate { value, trace, converged, diverged })
}

fn checked(v: f64, x: ExtReal, y: ExtReal) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationFailure { at: alloc::vec![x.value(), y.value()], value: v })
    }
}

fn sum_abs_increments(vals: &[f64]) -> f64 {
    vals.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Variation of `g` on the extended line as the supremum over chart-uniform
/// partitions (with `features` straddled) of doubling resolution.
pub fn variation_1d(g: &dyn Fn(ExtReal) -> f64, features: &[Feature], tol: f64) -> Result<VariationEstimate> {
    refine(tol, |k| {
        let nodes = refine_partition(ExtReal::NEG_INF, ExtReal::POS_INF, BASE, features, k);
        let vals = nodes
            .iter()
            .map(|&t| checked(g(t), t, ExtReal::ZERO))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(sum_abs_increments(&vals)))
    })
}

/// The four Hardy-Krause components on one grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HkComponents {
    pub sup: f64,
    /// `sup_y V(x -> g(x,y))`
    pub v1: f64,
    /// `sup_x V(y -> g(x,y))`
    pub v2: f64,
    pub v12: f64,
}

impl HkComponents {
    pub fn total(&self) -> f64 {
        self.sup + self.v1 + self.v2 + self.v12
    }

    fn max(self, o: HkComponents) -> HkComponents {
        HkComponents { sup: self.sup.max(o.sup), v1: self.v1.max(o.v1), v2: self.v2.max(o.v2), v12: self.v12.max(o.v12) }
    }
}

fn partitions(g: &BVFunction, base: usize, level: u32) -> (Vec<ExtReal>, Vec<ExtReal>) {
    let (ninf, pinf) = (ExtReal::NEG_INF, ExtReal::POS_INF);
    (
        refine_partition(ninf, pinf, base, &g.x_features(), level),
        refine_partition(ninf, pinf, base, &g.y_features(), level),
    )
}

/// All four components of `g` on the partition `xs x ys`.
pub(crate) fn components_on(g: &BVFunction, xs: &[ExtReal], ys: &[ExtReal]) -> Result<HkComponents> {
    if let Some(terms) = g.separable() {
        if let [t] = terms.as_slice() {
            let u = xs.iter().map(|&x| checked(t.u.eval(x), x, ExtReal::ZERO)).collect::<Result<Vec<_>>>()?;
            let v = ys.iter().map(|&y| checked(t.v.eval(y), ExtReal::ZERO, y)).collect::<Result<Vec<_>>>()?;
            let c = t.coef.abs();
            let umax = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let (vu, vv) = (sum_abs_increments(&u), sum_abs_increments(&v));
            return Ok(HkComponents { sup: c * umax * vmax, v1: c * vmax * vu, v2: c * umax * vv, v12: c * vu * vv });
        }
    }
    let nx = xs.len();
    let mut prev: Vec<f64> = Vec::with_capacity(nx);
    let mut cur: Vec<f64> = Vec::with_capacity(nx);
    let mut col_var = alloc::vec![0.0; nx];
    let mut out = HkComponents::default();
    for (j, &y) in ys.iter().enumerate() {
        cur.clear();
        for &x in xs {
            cur.push(checked(g.value(ExtPoint2::new(x, y)), x, y)?);
        }
        out.sup = cur.iter().fold(out.sup, |m, v| m.max(v.abs()));
        out.v1 = out.v1.max(sum_abs_increments(&cur));
        if j > 0 {
            for i in 0..nx {
                col_var[i] += (cur[i] - prev[i]).abs();
                if i > 0 {
                    out.v12 += (cur[i] - cur[i - 1] - prev[i] + prev[i - 1]).abs();
                }
            }
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    out.v2 = col_var.iter().fold(0.0, |m: f64, v| m.max(*v));
    Ok(out)
}

fn component_refine(
    g: &BVFunction,
    tol: f64,
    pick: impl Fn(&HkComponents) -> f64,
) -> Result<(VariationEstimate, HkComponents)> {
    let mut best = HkComponents::default();
    let est = refine(tol, |k| {
        let (xs, ys) = partitions(g, BASE, k);
        if k > 0 && xs.len() * ys.len() > GRID_CAP {
            return Ok(None);
        }
        best = best.max(components_on(g, &xs, &ys)?);
        Ok(Some(pick(&best)))
    })?;
    Ok((est, best))
}

/// Vitali variation: the sum of absolute corner differences over all cells.
pub fn vitali_variation(g: &BVFunction, tol: f64) -> Result<VariationEstimate> {
    Ok(component_refine(g, tol, |c| c.v12)?.0)
}

/// `||V_1 g||_inf` (axis 1) or `||V_2 g||_inf` (axis 2), maximizing the line
/// variation over the grid's rows or columns.
pub fn sectional_variation_sup(g: &BVFunction, axis: u8, tol: f64) -> Result<VariationEstimate> {
    match axis {
        1 => Ok(component_refine(g, tol, |c| c.v1)?.0),
        2 => Ok(component_refine(g, tol, |c| c.v2)?.0),
        _ => Err(Error::invalid("axis must be 1 or 2")),
    }
}

/// `||g||_bv = ||g||_inf + ||V_1 g||_inf + ||V_2 g||_inf + V_12 g`.
pub fn hk_norm(g: &BVFunction, tol: f64) -> Result<VariationEstimate> {
    Ok(hk_norm_components(g, tol)?.0)
}

/// [`hk_norm`] together with its components at the final level.
pub fn hk_norm_components(g: &BVFunction, tol: f64) -> Result<(VariationEstimate, HkComponents)> {
    component_refine(g, tol, HkComponents::total)
}

/// The components on a single chart-uniform grid of the given resolution
/// with `g`'s jump lines straddled.
pub fn hk_components_at(g: &BVFunction, resolution: usize) -> Result<HkComponents> {
    if resolution < 2 {
        return Err(Error::invalid("resolution must be at least 2"));
    }
    let (xs, ys) = partitions(g, resolution, 0);
    components_on(g, &xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::atan;
    use crate::primitive::{catalog_bv, Params};

    #[test]
    fn one_dimensional_examples() {
        let step = |t: ExtReal| if t >= ExtReal::ZERO { 1.0 } else { 0.0 };
        let r = variation_1d(&step, &[Feature { at: 0.0, jump: true }], 1e-12).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
        let r = variation_1d(&|t: ExtReal| atan(t.value()), &[], 1e-7).unwrap();
        assert!((r.value - core::f64::consts::PI).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn example_norms() {
        let q = catalog_bv("quadrantIndicator", &Params::new().with("x", 0.5).with("y", -1.0)).unwrap();
        assert_eq!(hk_norm(&q, 1e-9).unwrap().value, 4.0);
        let h = catalog_bv("halfPlaneIndicator", &Params::new()).unwrap();
        assert_eq!(hk_norm(&h, 1e-9).unwrap().value, 2.0);
        let i = catalog_bv("intervalIndicator", &Params::new()).unwrap();
        let c = hk_components_at(&i, 64).unwrap();
        assert_eq!((c.sup, c.v1, c.v2, c.v12), (1.0, 2.0, 2.0, 4.0));
    }

    #[test]
    fn diagonal_diverges() {
        let d = catalog_bv("diagonalIndicator", &Params::new()).unwrap();
        let r = vitali_variation(&d, 1e-9).unwrap();
        assert!(r.diverged && !r.converged);
        assert!(r.trace.windows(2).all(|w| w[1] > w[0]));
    }
}
