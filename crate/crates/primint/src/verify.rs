//! Verification suites. Every check becomes one [`SuiteRow`]; randomized
//! checks draw from a ChaCha stream seeded by the job seed.

use primint_core::convolution::{convolve_bv, convolve_l1, L1Kernel};
use primint_core::integral::{
    alexiewicz_norm, corner_difference, corner_integral, corner_integral_nd, grid_sup, improper_iterated,
    norm_dual_standard, norm_prime, xpowy_corner_limit, CornerLimitOrder, ImproperExample, IntervalND, IterationOrder,
};
use primint_core::operators::{
    algebra_product, approx_identity, convergence_limit, lattice_join, lattice_meet, order_leq, quadrant_sequence,
    translate,
};
use primint_core::primitive::special::arctan_cdf;
use primint_core::primitive::PRIMITIVE_CATALOG;
use primint_core::stieltjes::integrate_product;
use primint_core::variation::{hk_norm, vitali_variation};
use primint_core::{
    catalog_bv, catalog_primitive, make_interval, BVFunction, Distribution, ExtPoint2, ExtReal, Grid2, Interval2,
    Params, Primitive,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::SuiteRow;
use crate::CliError;

pub const SUITES: &[&str] = &["holder", "norms", "lattice", "mspace", "algebra", "convergence", "fubini", "convolution", "ftc"];

pub type Rows = Result<Vec<SuiteRow>, CliError>;

pub fn run_suite(name: &str, seed: u64) -> Rows {
    match name {
        "holder" => holder(seed, HOLDER_CASES),
        "norms" => Ok([exact_norms()?, bv_norms()?, divergence_witness()?, norm_sandwich()?, translation()?].concat()),
        "lattice" => Ok([lattice_identities(seed, LATTICE_TRIPLES)?, incomparable_pair()?].concat()),
        "mspace" => join_norms(),
        "algebra" => Ok([submultiplicative(seed, ALGEBRA_PAIRS)?, zero_divisor()?, approximate_unit()?].concat()),
        "convergence" => quadrant_convergence(seed),
        "fubini" => fubini(),
        "convolution" => Ok([poisson_mass()?, poisson_chain(CHAIN_RESOLUTION)?, bv_corner_limits()?].concat()),
        "ftc" => Ok([ftc()?, indicator_coincidence(seed, COINCIDENCE_CASES)?, nd_corner()?].concat()),
        other => Err(CliError::usage(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}

fn cat(name: &str) -> Result<Distribution, CliError> {
    cat_with(name, Params::new())
}

fn cat_with(name: &str, p: Params) -> Result<Distribution, CliError> {
    Ok(Distribution::new(catalog_primitive(name, &p)?))
}

fn bv(name: &str, p: Params) -> Result<BVFunction, CliError> {
    Ok(catalog_bv(name, &p)?)
}

fn ulps(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / (f64::EPSILON * scale.abs().max(f64::MIN_POSITIVE))
}

pub const HOLDER_CASES: usize = 200;
pub const HOLDER_SLACK: f64 = 1e-6;
const HOLDER_TOL: f64 = 1e-8;
const HOLDER_DISTRIBUTIONS: &[&str] = &["prodArctan", "gauss", "tentBump", "sinStrip", "boundaryBuild"];

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn random_multiplier(rng: &mut ChaCha8Rng) -> Result<BVFunction, CliError> {
    let (x, y) = (round3(rng.random_range(-4.0..4.0)), round3(rng.random_range(-4.0..4.0)));
    let w = round3(rng.random_range(0.5..4.0));
    let xy = |n: &str| bv(n, Params::new().with("x", x).with("y", y));
    match rng.random_range(0..7) {
        0 => xy("quadrantIndicator"),
        1 => bv("intervalIndicator", Params::new().with("a", x).with("b", x + w).with("c", y).with("d", y + w)),
        2 => bv("approxIdentity", Params::new().with("n", w)),
        3 => bv("approxIdentityReflected", Params::new().with("n", w)),
        4 => Ok(BVFunction::constant(x)),
        5 => bv("halfPlaneIndicator", Params::new()),
        _ => xy("pointIndicator"),
    }
}

fn random_corner(rng: &mut ChaCha8Rng) -> ExtReal {
    match rng.random_range(0..10) {
        0 => ExtReal::POS_INF,
        _ => ExtReal::of(round3(rng.random_range(-8.0..8.0))),
    }
}

/// `|int_{-inf}^x int_{-inf}^y f g| <= ||f|| ||g||_bv` on random cases.
pub fn holder(seed: u64, cases: usize) -> Rows {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs = Vec::new();
    for name in HOLDER_DISTRIBUTIONS {
        let f = cat(name)?;
        let n = alexiewicz_norm(&f, HOLDER_TOL)?.value;
        fs.push((f, n));
    }
    let mut rows = Vec::with_capacity(cases);
    for k in 0..cases {
        let (f, fnorm) = &fs[rng.random_range(0..fs.len())];
        let g = random_multiplier(&mut rng)?;
        let (x, y) = (random_corner(&mut rng), random_corner(&mut rng));
        let i = Interval2 { a: ExtReal::NEG_INF, b: x, c: ExtReal::NEG_INF, d: y };
        let v = integrate_product(f, &g, &i, HOLDER_TOL)?;
        // the grid estimate of the sup can only fall short of the true sup
        let norm = fnorm.max(f.primitive().eval(ExtPoint2::new(x, y))?.abs());
        let gn = hk_norm(&g, HOLDER_TOL)?.value;
        let bound = norm * gn;
        rows.push(SuiteRow::new(
            format!("holder.quadrant.{k:03}"),
            v.value.abs() <= bound + HOLDER_SLACK,
            format!("f={} g={} corner=({x},{y}): |{:.9}| <= {:.9}", f.label(), g.label(), v.value, bound),
        ));
    }
    Ok(rows)
}

pub const EXACT_NORM_TOL: f64 = 1e-3;

/// `sinStrip` with parameter `n` has norm `2/n`.
pub fn exact_norms() -> Rows {
    let mut rows = Vec::new();
    for n in [1.0, 2.0, 4.0, 8.0] {
        let f = cat_with("sinStrip", Params::new().with("n", n))?;
        let v = alexiewicz_norm(&f, EXACT_NORM_TOL / 10.0)?;
        rows.push(SuiteRow::new(
            format!("norms.sinStrip.{n}"),
            (v.value - 2.0 / n).abs() <= EXACT_NORM_TOL,
            format!("||f_{n}|| = {:.9}, expected {}", v.value, 2.0 / n),
        ));
    }
    Ok(rows)
}

/// Hardy-Krause norms of the three indicator examples.
pub fn bv_norms() -> Rows {
    let cases = [
        ("quadrantIndicator", bv("quadrantIndicator", Params::new())?, 4.0),
        ("halfPlaneIndicator", bv("halfPlaneIndicator", Params::new())?, 2.0),
        ("intervalIndicator", bv("intervalIndicator", Params::new())?, 9.0),
    ];
    let mut rows = Vec::new();
    for (name, g, want) in cases {
        let v = hk_norm(&g, 1e-9)?;
        rows.push(SuiteRow::new(
            format!("norms.bv.{name}"),
            v.value == want && v.converged,
            format!("||g||_bv = {} (trace {:?}), expected {want}", v.value, v.trace),
        ));
    }
    Ok(rows)
}

pub const SANDWICH_TOL: f64 = 1e-6;

/// `||f|| <= ||f||' <= 4||f||` and `||f||/4 <= ||f||''_lower <= ||f||`.
pub fn norm_sandwich() -> Rows {
    let tol = SANDWICH_TOL;
    let mut rows = Vec::new();
    for name in PRIMITIVE_CATALOG {
        let f = cat(name)?;
        let n = alexiewicz_norm(&f, tol)?.value;
        let p = norm_prime(&f, tol)?.value;
        let d = norm_dual_standard(&f, tol)?;
        rows.push(SuiteRow::new(
            format!("norms.prime.{name}"),
            n <= p + tol && p <= 4.0 * n + tol,
            format!("{n:.9} <= {p:.9} <= {:.9}", 4.0 * n),
        ));
        rows.push(SuiteRow::new(
            format!("norms.dual.{name}"),
            n / 4.0 <= d + tol && d <= n + tol,
            format!("{:.9} <= {d:.9} <= {n:.9}", n / 4.0),
        ));
    }
    Ok(rows)
}

pub const LATTICE_TRIPLES: usize = 10;
pub const LATTICE_RESOLUTION: usize = 32;

/// Distributive and modular identities, exact at every node.
pub fn lattice_identities(seed: u64, triples: usize) -> Rows {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid2::uniform(LATTICE_RESOLUTION)?;
    let mut rows = Vec::new();
    for k in 0..triples {
        let names: Vec<&str> = (0..3).map(|_| PRIMITIVE_CATALOG[rng.random_range(0..PRIMITIVE_CATALOG.len())]).collect();
        let [a, b, c] = [0, 1, 2].map(|i| catalog_primitive(names[i], &Params::new()));
        let (a, b, c) = (a?, b?, c?);
        let lhs = lattice_meet(&a, &lattice_join(&b, &c));
        let rhs = lattice_join(&lattice_meet(&a, &b), &lattice_meet(&a, &c));
        let lhs2 = lattice_join(&a, &lattice_meet(&b, &c));
        let rhs2 = lattice_meet(&lattice_join(&a, &b), &lattice_join(&a, &c));
        let (j, m) = (lattice_join(&a, &b), lattice_meet(&a, &b));
        let mut bad = 0;
        for p in grid.nodes() {
            let ok = lhs.value(p) == rhs.value(p)
                && lhs2.value(p) == rhs2.value(p)
                && j.value(p) + m.value(p) == a.value(p) + b.value(p);
            bad += usize::from(!ok);
        }
        rows.push(SuiteRow::new(
            format!("lattice.identities.{k:02}"),
            bad == 0,
            format!("{} {} {}: {bad} mismatched nodes", names[0], names[1], names[2]),
        ));
    }
    Ok(rows)
}

/// The two `gauss2` members are incomparable in both directions.
pub fn incomparable_pair() -> Rows {
    let g0 = cat_with("gauss2", Params::new().with("which", 0.0))?;
    let g1 = cat_with("gauss2", Params::new().with("which", 1.0))?;
    let (a, b) = (order_leq(&g0, &g1, 64)?, order_leq(&g1, &g0, 64)?);
    Ok(vec![SuiteRow::new("lattice.gauss2.incomparable", !a && !b, format!("g0 <= g1: {a}, g1 <= g0: {b}"))])
}

const NONNEG: &[&str] = &["prodArctan", "gauss", "tentBump", "sincQuadrant", "cantor2d", "weier2d", "approxIdentity", "zero"];
pub const SUP_RESOLUTION: usize = 64;

/// `||F1 v F2||_inf = max(||F1||_inf, ||F2||_inf)` for nonnegative primitives.
pub fn join_norms() -> Rows {
    let mut rows = Vec::new();
    for a in NONNEG {
        for b in NONNEG {
            let (f, g) = (catalog_primitive(a, &Params::new())?, catalog_primitive(b, &Params::new())?);
            let j = grid_sup(&lattice_join(&f, &g), SUP_RESOLUTION)?.0;
            let want = grid_sup(&f, SUP_RESOLUTION)?.0.max(grid_sup(&g, SUP_RESOLUTION)?.0);
            let u = ulps(j, want, want);
            rows.push(SuiteRow::new(format!("mspace.join.{a}.{b}"), u <= 4.0, format!("{j} vs {want} ({u} ulp)")));
        }
    }
    Ok(rows)
}

pub const ALGEBRA_PAIRS: usize = 50;

/// `||F1 F2||_inf <= ||F1||_inf ||F2||_inf`.
pub fn submultiplicative(seed: u64, pairs: usize) -> Rows {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for k in 0..pairs {
        let (a, b) = (
            PRIMITIVE_CATALOG[rng.random_range(0..PRIMITIVE_CATALOG.len())],
            PRIMITIVE_CATALOG[rng.random_range(0..PRIMITIVE_CATALOG.len())],
        );
        let (f, g) = (cat(a)?, cat(b)?);
        let s = grid_sup(algebra_product(&f, &g).primitive(), SUP_RESOLUTION)?.0;
        let bound = grid_sup(f.primitive(), SUP_RESOLUTION)?.0 * grid_sup(g.primitive(), SUP_RESOLUTION)?.0;
        rows.push(SuiteRow::new(
            format!("algebra.submultiplicative.{k:02}"),
            s <= bound + 4.0 * f64::EPSILON * bound,
            format!("{a} * {b}: {s} <= {bound}"),
        ));
    }
    Ok(rows)
}

/// Two nonzero tent bumps with disjoint supports multiply to zero.
pub fn zero_divisor() -> Rows {
    let a = cat("tentBump")?;
    let b = cat_with("tentBump", Params::new().with("cx", 5.0).with("cy", 5.0))?;
    let (na, nb) = (grid_sup(a.primitive(), SUP_RESOLUTION)?.0, grid_sup(b.primitive(), SUP_RESOLUTION)?.0);
    let ab = grid_sup(algebra_product(&a, &b).primitive(), SUP_RESOLUTION)?.0;
    Ok(vec![SuiteRow::new(
        "algebra.zero-divisor",
        na > 0.0 && nb > 0.0 && ab == 0.0,
        format!("||a|| = {na}, ||b|| = {nb}, ||ab|| = {ab}"),
    )])
}

/// `||F - U_n F||_inf` decreases over `n = 4, 8, 16`.
pub fn approximate_unit() -> Rows {
    let mut rows = Vec::new();
    for name in ["prodArctan", "sinc2d", "expRadial"] {
        let f = cat(name)?;
        let mut gaps = Vec::new();
        for n in [4.0, 8.0, 16.0] {
            let uf = algebra_product(&approx_identity(n)?, &f);
            let d = Distribution::linear_combination(1.0, &f, -1.0, &uf);
            gaps.push(grid_sup(d.primitive(), SUP_RESOLUTION)?.0);
        }
        rows.push(SuiteRow::new(
            format!("algebra.unit.{name}"),
            gaps.windows(2).all(|w| w[1] < w[0]),
            format!("gaps {gaps:?}"),
        ));
    }
    Ok(rows)
}

pub const CONVERGENCE_TOL: f64 = 1e-4;

/// Integrals against quadrant indicators approaching a limit quadrant.
pub fn quadrant_convergence(seed: u64) -> Rows {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let points = [(0.3, -1.2), (round3(rng.random_range(-3.0..3.0)), round3(rng.random_range(-3.0..3.0)))];
    for name in ["prodArctan", "gauss", "sinStrip"] {
        let f = cat(name)?;
        for &(x, y) in &points {
            let (seq, lim) = quadrant_sequence(x, y, 20)?;
            let r = convergence_limit(&f, &seq, &lim, CONVERGENCE_TOL)?;
            let ok = r.threshold.is_some_and(|k| r.differences[k..].iter().all(|d| *d <= CONVERGENCE_TOL));
            rows.push(SuiteRow::new(
                format!("convergence.quadrant.{name}.({x},{y})"),
                ok,
                format!("threshold {:?}, last difference {:.3e}, bound {}", r.threshold, r.differences.last().unwrap_or(&f64::NAN), r.bound),
            ));
        }
    }
    Ok(rows)
}

/// Iterated improper integrals that disagree with the corner limits.
pub fn fubini() -> Rows {
    let mut rows = Vec::new();
    for (order, label) in [(IterationOrder::DyFirst, "dyfirst"), (IterationOrder::DxFirst, "dxfirst")] {
        let r = improper_iterated(ImproperExample::XPowY, order, 1e-8)?;
        rows.push(SuiteRow::new(
            format!("fubini.xpowy.{label}"),
            r.converged && r.value.abs() <= 1e-6,
            format!("{:.3e} (err {:.1e})", r.value, r.error_estimate),
        ));
    }
    let (c, a) = (xpowy_corner_limit(CornerLimitOrder::CFirst), xpowy_corner_limit(CornerLimitOrder::AFirst));
    rows.push(SuiteRow::new("fubini.xpowy.corner-limits", c == 0.0 && a == -1.0, format!("c first {c}, a first {a}")));
    let r = improper_iterated(ImproperExample::ArctanXY, IterationOrder::DyFirst, 1e-6)?;
    rows.push(SuiteRow::new(
        "fubini.arctanxy.dyfirst",
        (r.value - std::f64::consts::PI).abs() <= 1e-3,
        format!("{:.9}, expected pi", r.value),
    ));
    let r = improper_iterated(ImproperExample::ArctanXY, IterationOrder::DxFirst, 1e-8)?;
    rows.push(SuiteRow::new("fubini.arctanxy.dxfirst", r.value.abs() <= 1e-6, format!("{:.3e}, expected 0", r.value)));
    Ok(rows)
}

pub const MASS_TOL: f64 = 1e-6;
pub const CHAIN_RESOLUTION: usize = 16;
pub const CHAIN_Z: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
pub const CORNER_TOL: f64 = 1e-4;

pub fn poisson_mass() -> Rows {
    let mut rows = Vec::new();
    for z in [CHAIN_Z.as_slice(), &[1.0, 4.0]].concat() {
        let m = L1Kernel::poisson(z)?.mass()?;
        rows.push(SuiteRow::new(
            format!("convolution.mass.{z}"),
            (m.value - 1.0).abs() <= MASS_TOL,
            format!("mass {:.12}", m.value),
        ));
    }
    Ok(rows)
}

fn node_gap(a: &Primitive, b: &Primitive, grid: &Grid2) -> f64 {
    grid.nodes().map(|p| (a.value(p) - b.value(p)).abs()).fold(0.0, f64::max)
}

/// `||f * Phi_z - f||` over grid nodes decreases as `z` shrinks.
pub fn poisson_chain(resolution: usize) -> Rows {
    let grid = Grid2::uniform(resolution)?;
    let mut rows = Vec::new();
    for name in ["gauss", "tentBump", "prodArctan"] {
        let f = cat(name)?;
        let mut gaps = Vec::new();
        for z in CHAIN_Z {
            let h = convolve_l1(&f, &L1Kernel::poisson(z)?, resolution, MASS_TOL)?;
            gaps.push(node_gap(h.distribution.primitive(), f.primitive(), &grid));
        }
        rows.push(SuiteRow::new(
            format!("convolution.chain.{name}"),
            gaps.windows(2).all(|w| w[1] < w[0]),
            format!("gaps {gaps:?}"),
        ));
    }
    Ok(rows)
}

/// `(f * g)` at the four infinite corners is `g(e1 inf, e2 inf) F(inf, inf)`.
pub fn bv_corner_limits() -> Rows {
    let mut rows = Vec::new();
    let inf = ExtReal::POS_INF;
    for (fname, gname, params) in [
        ("prodArctan", "quadrantIndicator", Params::new().with("x", 0.5).with("y", -1.0)),
        ("gauss", "approxIdentity", Params::new().with("n", 2.0)),
        ("sinStrip", "approxIdentityReflected", Params::new()),
    ] {
        let f = cat(fname)?;
        let g = bv(gname, params)?;
        let total = f.primitive().eval(ExtPoint2::new(inf, inf))?;
        for (x, y) in [(inf, inf), (-inf, -inf), (inf, -inf), (-inf, inf)] {
            let p = ExtPoint2::new(x, y);
            let v = convolve_bv(&f, &g, p, 1e-8)?.value;
            let want = g.eval(p)? * total;
            rows.push(SuiteRow::new(
                format!("convolution.corner.{fname}.{gname}.({x},{y})"),
                (v - want).abs() <= CORNER_TOL,
                format!("{v:.9} vs {want:.9}"),
            ));
        }
    }
    Ok(rows)
}

pub const FTC_RESOLUTION: usize = 64;

/// `int_{-inf}^x int_{-inf}^y f = F(x, y)` at every node, to 4 ulp.
pub fn ftc() -> Rows {
    let grid = Grid2::uniform(FTC_RESOLUTION)?;
    let mut rows = Vec::new();
    for name in PRIMITIVE_CATALOG {
        let f = cat(name)?;
        let mut worst: f64 = 0.0;
        for p in grid.nodes() {
            let i = make_interval(ExtReal::NEG_INF, p.x, ExtReal::NEG_INF, p.y);
            let v = corner_integral(&f, &i)?;
            let want = f.primitive().eval(p)?;
            let scale = [ExtPoint2::new(ExtReal::NEG_INF, p.y), ExtPoint2::new(p.x, ExtReal::NEG_INF), p]
                .iter()
                .map(|&q| f.primitive().value(q).abs())
                .fold(0.0, f64::max);
            worst = worst.max(if v == want { 0.0 } else { ulps(v, want, scale) });
        }
        rows.push(SuiteRow::new(format!("ftc.{name}"), worst <= 4.0, format!("worst {worst} ulp over {} nodes", (FTC_RESOLUTION + 1).pow(2))));
    }
    Ok(rows)
}

/// The Vitali variation of the diagonal indicator keeps growing.
pub fn divergence_witness() -> Rows {
    let g = bv("diagonalIndicator", Params::new())?;
    let v = vitali_variation(&g, 1e-6)?;
    let increasing = v.trace.windows(2).all(|w| w[1] > w[0]);
    Ok(vec![SuiteRow::new(
        "norms.diagonal.diverges",
        increasing && v.trace.len() >= 6 && !v.converged,
        format!("trace {:?}, diverged {}", v.trace, v.diverged),
    )])
}

pub const TRANSLATION_TOL: f64 = 1e-6;

/// `||tau f|| = ||f||` and `||f - tau_h f||` decreasing as the shift shrinks.
pub fn translation() -> Rows {
    let tol = TRANSLATION_TOL / 10.0;
    let mut rows = Vec::new();
    for name in ["prodArctan", "gauss", "sinStrip"] {
        let f = cat(name)?;
        let n = alexiewicz_norm(&f, tol)?.value;
        let moved = alexiewicz_norm(&translate(&f, 1.5, -0.75)?, tol)?.value;
        rows.push(SuiteRow::new(
            format!("norms.translation.invariant.{name}"),
            (n - moved).abs() <= TRANSLATION_TOL,
            format!("{n:.9} vs {moved:.9}"),
        ));
        let mut gaps = Vec::new();
        for k in 1..=6 {
            let h = 0.5f64.powi(k);
            let d = Distribution::linear_combination(1.0, &f, -1.0, &translate(&f, h, -h)?);
            gaps.push(alexiewicz_norm(&d, tol)?.value);
        }
        rows.push(SuiteRow::new(
            format!("norms.translation.continuous.{name}"),
            gaps.windows(2).all(|w| w[1] < w[0]),
            format!("gaps {gaps:?}"),
        ));
    }
    Ok(rows)
}

pub const COINCIDENCE_CASES: usize = 30;
pub const COINCIDENCE_TOL: f64 = 1e-6;

/// The product integral against an interval indicator is the corner
/// integral over that interval.
pub fn indicator_coincidence(seed: u64, cases: usize) -> Rows {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for name in ["prodArctan", "gauss", "sinStrip"] {
        let f = cat(name)?;
        for k in 0..cases {
            let (a, c) = (round3(rng.random_range(-5.0..5.0)), round3(rng.random_range(-5.0..5.0)));
            let (w, h) = (round3(rng.random_range(0.1..5.0)), round3(rng.random_range(0.1..5.0)));
            let i = Interval2 { a: ExtReal::of(a), b: ExtReal::of(a + w), c: ExtReal::of(c), d: ExtReal::of(c + h) };
            let g = bv("intervalIndicator", Params::new().with("a", a).with("b", a + w).with("c", c).with("d", c + h))?;
            let v = integrate_product(&f, &g, &Interval2::PLANE, COINCIDENCE_TOL / 10.0)?.value;
            let want = corner_difference(f.primitive(), &i)?;
            rows.push(SuiteRow::new(
                format!("ftc.indicator.{name}.{k:02}"),
                (v - want).abs() <= COINCIDENCE_TOL,
                format!("[{a},{}]x[{c},{}]: {v:.9} vs {want:.9}", a + w, c + h),
            ));
        }
    }
    Ok(rows)
}

/// Corner formula in three dimensions for a product of arctan CDFs on
/// `[0, inf]^3`, against the direct eight-corner sum.
pub fn nd_corner() -> Rows {
    let f = |x: &[ExtReal]| x.iter().map(|t| arctan_cdf(t.value())).product::<f64>();
    let (lo, hi) = (ExtReal::ZERO, ExtReal::POS_INF);
    let v = corner_integral_nd(&f, &IntervalND::new(vec![(lo, hi); 3])?)?;
    let mut direct = 0.0;
    let mut scale: f64 = 0.0;
    for mask in 0..8u32 {
        let p: Vec<ExtReal> = (0..3).map(|k| if mask >> k & 1 == 1 { hi } else { lo }).collect();
        let lows = 3 - mask.count_ones();
        let term = f(&p);
        scale = scale.max(term.abs());
        direct += if lows % 2 == 0 { term } else { -term };
    }
    let u = ulps(v, direct, scale);
    Ok(vec![SuiteRow::new(
        "ftc.corner3d",
        u <= 4.0 && ulps(v, 0.125, scale) <= 4.0,
        format!("{v} vs direct {direct}, expected 0.125"),
    )])
}
