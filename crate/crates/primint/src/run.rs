//! Command dispatch.

use std::time::Instant;

use primint_core::convolution::{convolve_bv, convolve_l1, mollify_step, step_approximate, L1Kernel};
use primint_core::integral::{
    alexiewicz_sup, corner_integral, corner_integral_nd, grid_sup, improper_iterated, iterated_consistency,
    norm_prime, xpowy_corner_limit, CornerLimitOrder, ImproperExample, IntervalND, IterationOrder, SupOptions,
};
use primint_core::operators::{
    algebra_product, change_of_variables, lattice_join, lattice_meet, order_leq, translate, AxisMapKind,
    LinearAxisMap,
};
use primint_core::primitive::{special::arctan_cdf, BV_CATALOG, PRIMITIVE_CATALOG};
use primint_core::stieltjes::{integrate_product_oriented, parts_primitive};
use primint_core::variation::{hk_norm_components, vitali_variation};
use primint_core::{
    catalog_bv, catalog_primitive, BVFunction, Distribution, ExtPoint2, ExtReal, Grid2, Params, Primitive,
    VariationEstimate,
};
use serde_json::json;

use crate::gridio;
use crate::job::{to_params, FnRef, JobSpec, MapKind, Real};
use crate::report::Report;
use crate::verify;
use crate::CliError;

pub const COMMANDS: &[&str] = &[
    "integrate",
    "norm",
    "normprime",
    "bvnorm",
    "variation",
    "parts",
    "product",
    "lattice",
    "order",
    "translate",
    "changevars",
    "convolve-bv",
    "convolve-l1",
    "mollify",
    "iterated",
    "improper",
    "ndcorner",
    "catalog",
    "verify",
];

pub const KERNELS: &[&str] = &["poisson"];

const DEFAULT_STEPS: usize = 16;
const DEFAULT_Z: f64 = 1.0;

/// Run one job. Errors carry their exit status; a report's own status is
/// [`Report::exit_code`].
pub fn run(spec: &JobSpec) -> Result<Report, CliError> {
    if !COMMANDS.contains(&spec.command.as_str()) {
        return Err(CliError::usage(format!("unknown command {:?}; expected one of {}", spec.command, COMMANDS.join(", "))));
    }
    spec.check()?;
    let start = Instant::now();
    let r = Report::new(spec);
    let mut report = match spec.command.as_str() {
        "integrate" => integrate(spec, r)?,
        "norm" => {
            let sup = alexiewicz_sup(primary(spec)?.primitive(), spec.tol(), SupOptions::default())?;
            r.quad(&sup.quad).with("argmax", point(sup.argmax)).with("gridResolution", sup.resolution)
        }
        "normprime" => r.quad(&norm_prime(&primary(spec)?, spec.tol())?),
        "bvnorm" => {
            let (est, c) = hk_norm_components(&multiplier(spec)?, spec.tol())?;
            variation_report(r, &est).with("components", json!({"sup": c.sup, "v1": c.v1, "v2": c.v2, "v12": c.v12}))
        }
        "variation" => variation_report(r, &vitali_variation(&multiplier(spec)?, spec.tol())?),
        "parts" => {
            let p = parts_primitive(&primary(spec)?, &multiplier(spec)?, spec.resolution(), spec.tol())?;
            let top = p.primitive.eval(ExtPoint2::new(ExtReal::POS_INF, ExtReal::POS_INF))?;
            let mut r = r.exact(top);
            r.error_estimate = Some(Real(p.error_estimate));
            r.converged = p.converged;
            r.depth = Some(p.depth);
            save(spec, &p.primitive)?;
            r
        }
        "product" => {
            let (f, g) = (primary(spec)?, other(spec)?);
            let h = algebra_product(&f, &g);
            let res = spec.resolution();
            let bound = grid_sup(f.primitive(), res)?.0 * grid_sup(g.primitive(), res)?.0;
            save(spec, h.primitive())?;
            r.exact(grid_sup(h.primitive(), res)?.0).with("bound", bound)
        }
        "lattice" => {
            let (f, g) = (primary(spec)?, other(spec)?);
            let h = match spec.op.as_deref().unwrap_or("join") {
                "join" => lattice_join(f.primitive(), g.primitive()),
                "meet" => lattice_meet(f.primitive(), g.primitive()),
                op => return Err(CliError::usage(format!("lattice op must be join or meet, got {op:?}"))),
            };
            save(spec, &h)?;
            r.exact(grid_sup(&h, spec.resolution())?.0)
        }
        "order" => {
            let (f, g) = (primary(spec)?, other(spec)?);
            let leq = order_leq(&f, &g, spec.resolution())?;
            let geq = order_leq(&g, &f, spec.resolution())?;
            r.exact(if leq { 1.0 } else { 0.0 }).with("leq", leq).with("geq", geq)
        }
        "translate" => {
            let f = primary(spec)?;
            let [s, t] = spec.shift.ok_or_else(|| CliError::usage("translate needs shift [s, t]"))?;
            let moved = translate(&f, s, t)?;
            let tol = spec.tol();
            let n = alexiewicz_sup(moved.primitive(), tol, SupOptions::default())?.quad;
            let diff = Distribution::linear_combination(1.0, &f, -1.0, &moved);
            let gap = alexiewicz_sup(diff.primitive(), tol, SupOptions::default())?.quad;
            let base = alexiewicz_sup(f.primitive(), tol, SupOptions::default())?.quad;
            let mut r = r.quad(&n).with("norm", Real(base.value)).with("gap", Real(gap.value));
            r.converged = n.converged && gap.converged && base.converged;
            r
        }
        "changevars" => {
            let f = primary(spec)?;
            let m = spec.map.ok_or_else(|| CliError::usage("changevars needs a map"))?;
            let kind = match m.kind {
                MapKind::Straight => AxisMapKind::Straight,
                MapKind::Swapped => AxisMapKind::Swapped,
            };
            let map = LinearAxisMap::new(kind, m.alpha, m.beta, m.gamma1, m.gamma2)?;
            let i = spec.interval()?;
            let v = change_of_variables(&f, &map, &i)?;
            r.exact(v).with("direct", Real(corner_integral(&f, &i.into())?))
        }
        "convolve-bv" => {
            let [x, y] = spec.point.ok_or_else(|| CliError::usage("convolve-bv needs a point"))?;
            let p = ExtPoint2::new(x.ext()?, y.ext()?);
            r.quad(&convolve_bv(&primary(spec)?, &multiplier(spec)?, p, spec.tol())?)
        }
        "convolve-l1" => {
            let f = primary(spec)?;
            let k = kernel(spec)?;
            let out = convolve_l1(&f, &k, spec.resolution(), spec.tol())?;
            let gap = node_gap(out.distribution.primitive(), f.primitive(), spec.resolution())?;
            save(spec, out.distribution.primitive())?;
            r.quad(&out.quad).with("gap", Real(gap)).with("kernelMass", Real(k.mass()?.value))
        }
        "mollify" => {
            let f = primary(spec)?;
            let sigma = step_approximate(f.primitive(), spec.steps.unwrap_or(DEFAULT_STEPS))?;
            let u = mollify_step(&sigma, poisson_z(spec)?, spec.resolution())?;
            let grid = Grid2::uniform(spec.resolution())?;
            let gap = grid.nodes().map(|p| (u.value(p) - sigma.eval(p)).abs()).fold(0.0, f64::max);
            let step_gap = grid.nodes().map(|p| (f.primitive().value(p) - sigma.eval(p)).abs()).fold(0.0, f64::max);
            save(spec, &u)?;
            let top = u.eval(ExtPoint2::new(ExtReal::POS_INF, ExtReal::POS_INF))?;
            r.exact(top).with("gap", Real(gap)).with("stepGap", Real(step_gap))
        }
        "iterated" => {
            let rep = iterated_consistency(&primary(spec)?, &spec.interval()?, spec.tol())?;
            let mut r = r
                .exact(rep.corner)
                .with("xOuter", Real(rep.x_outer))
                .with("yOuter", Real(rep.y_outer))
                .with("discrepancy", Real(rep.discrepancy));
            r.error_estimate = Some(Real(rep.discrepancy));
            r.converged = rep.agree;
            r
        }
        "improper" => improper(spec, r)?,
        "ndcorner" => {
            let limits = spec.limits.as_ref().ok_or_else(|| CliError::usage("ndcorner needs limits"))?;
            let limits = limits.iter().map(|[a, b]| Ok((a.ext()?, b.ext()?))).collect::<Result<Vec<_>, CliError>>()?;
            let i = IntervalND::new(limits)?;
            let f = |x: &[ExtReal]| x.iter().map(|t| arctan_cdf(t.value())).product::<f64>();
            r.exact(corner_integral_nd(&f, &i)?).with("dim", i.dim())
        }
        "catalog" => r
            .with("primitives", PRIMITIVE_CATALOG)
            .with("multipliers", BV_CATALOG)
            .with("kernels", KERNELS)
            .with("commands", COMMANDS)
            .with("suites", verify::SUITES),
        "verify" => {
            let name = spec.suite.as_deref().ok_or_else(|| CliError::usage("verify needs a suite"))?;
            let rows = verify::run_suite(name, spec.seed())?;
            let passed = rows.iter().filter(|r| r.passed).count();
            let mut r = r.with("passed", passed).with("failed", rows.len() - passed);
            r.suite = Some(rows);
            r
        }
        _ => unreachable!("command list checked above"),
    };
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn integrate(spec: &JobSpec, r: Report) -> Result<Report, CliError> {
    let f = primary(spec)?;
    let i = spec.oriented()?;
    Ok(match &spec.bv {
        None => r.exact(corner_integral(&f, &i)?),
        Some(_) => r.quad(&integrate_product_oriented(&f, &multiplier(spec)?, &i, spec.tol())?),
    })
}

fn improper(spec: &JobSpec, r: Report) -> Result<Report, CliError> {
    let example = match spec.example.as_deref() {
        Some("xpowy") => ImproperExample::XPowY,
        Some("arctanxy") => ImproperExample::ArctanXY,
        other => return Err(CliError::usage(format!("improper example must be xpowy or arctanxy, got {other:?}"))),
    };
    let order = match spec.order.as_deref().unwrap_or("dyfirst") {
        "dyfirst" => IterationOrder::DyFirst,
        "dxfirst" => IterationOrder::DxFirst,
        other => return Err(CliError::usage(format!("order must be dyfirst or dxfirst, got {other:?}"))),
    };
    let r = r.quad(&improper_iterated(example, order, spec.tol())?);
    Ok(match example {
        ImproperExample::XPowY => r
            .with("cornerLimitCFirst", Real(xpowy_corner_limit(CornerLimitOrder::CFirst)))
            .with("cornerLimitAFirst", Real(xpowy_corner_limit(CornerLimitOrder::AFirst))),
        ImproperExample::ArctanXY => r,
    })
}

fn variation_report(mut r: Report, est: &VariationEstimate) -> Report {
    r.value = Some(Real(est.value));
    let n = est.trace.len();
    r.error_estimate = Some(Real(if n >= 2 { est.trace[n - 1] - est.trace[n - 2] } else { f64::INFINITY }));
    r.converged = est.converged;
    r.depth = Some(n.saturating_sub(1) as u32);
    let trace: Vec<Real> = est.trace.iter().map(|&v| Real(v)).collect();
    r.with("trace", trace).with("diverged", est.diverged)
}

fn point(p: ExtPoint2) -> [Real; 2] {
    [p.x.into(), p.y.into()]
}

fn node_gap(a: &Primitive, b: &Primitive, resolution: usize) -> Result<f64, CliError> {
    let grid = Grid2::uniform(resolution)?;
    let mut gap: f64 = 0.0;
    for p in grid.nodes() {
        gap = gap.max((a.eval(p)? - b.eval(p)?).abs());
    }
    Ok(gap)
}

fn save(spec: &JobSpec, p: &Primitive) -> Result<(), CliError> {
    if let Some(path) = &spec.output {
        let sample = p.sample(&Grid2::uniform(spec.resolution())?)?;
        gridio::save_sample(path, p.label(), &sample)?;
    }
    Ok(())
}

fn params_of<'a>(r: &'a FnRef, top: Option<&'a crate::job::ParamMap>) -> Params {
    match r {
        FnRef::Catalog { params, .. } => to_params(params),
        _ => top.map(to_params).unwrap_or_default(),
    }
}

fn load_distribution(r: &FnRef, params: Params) -> Result<Distribution, CliError> {
    match r {
        FnRef::Name(name) | FnRef::Catalog { name, .. } => Ok(Distribution::new(catalog_primitive(name, &params)?)),
        FnRef::File { file } => {
            let (label, sample) = gridio::load_sample(file)?;
            Distribution::validated(Primitive::grid_sample(label, sample), 4).map_err(|e| CliError::io(file, e))
        }
    }
}

fn primary(spec: &JobSpec) -> Result<Distribution, CliError> {
    let r = spec.primitive.as_ref().ok_or_else(|| CliError::usage(format!("{} needs a primitive", spec.command)))?;
    load_distribution(r, params_of(r, spec.params.as_ref()))
}

fn other(spec: &JobSpec) -> Result<Distribution, CliError> {
    let r = spec.other.as_ref().ok_or_else(|| CliError::usage(format!("{} needs a second primitive", spec.command)))?;
    load_distribution(r, params_of(r, None))
}

fn multiplier(spec: &JobSpec) -> Result<BVFunction, CliError> {
    let r = spec.bv.as_ref().ok_or_else(|| CliError::usage(format!("{} needs a multiplier", spec.command)))?;
    let top = if spec.primitive.is_none() { spec.params.as_ref() } else { None };
    match r {
        FnRef::Name(name) | FnRef::Catalog { name, .. } => Ok(catalog_bv(name, &params_of(r, top))?),
        FnRef::File { file } => {
            let (label, cells) = gridio::load_cells(file)?;
            Ok(BVFunction::grid_constant(label, cells))
        }
    }
}

fn poisson_z(spec: &JobSpec) -> Result<f64, CliError> {
    let Some(r) = &spec.kernel else { return Ok(DEFAULT_Z) };
    match r {
        FnRef::Name(name) | FnRef::Catalog { name, .. } if name == "poisson" => {
            Ok(params_of(r, None).num("z", DEFAULT_Z)?)
        }
        FnRef::Name(name) | FnRef::Catalog { name, .. } => {
            Err(CliError::usage(format!("unknown kernel {name:?}; expected one of {}", KERNELS.join(", "))))
        }
        FnRef::File { file } => Err(CliError::io(file, "kernels are catalog entries only")),
    }
}

fn kernel(spec: &JobSpec) -> Result<L1Kernel, CliError> {
    Ok(L1Kernel::poisson(poisson_z(spec)?)?)
}
