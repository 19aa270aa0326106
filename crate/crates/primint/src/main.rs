use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use primint::job::{MapKind, MapSpec, ParamMap, ParamValue};
use primint::{CliError, FnRef, JobSpec, Real};

/// Continuous primitive integral on the extended plane.
///
/// Runs one job given as a JSON file (`--spec`) and/or flags; flags override
/// the file. Prints the JSON report on stdout and a summary on stderr.
///
/// Exit status: 0 ok, 2 not converged or a check failed, 1 numerical
/// error, 64 usage error, 66 unreadable or malformed file.
#[derive(Debug, Parser)]
#[command(name = "primint", version)]
struct Args {
    /// One of: integrate norm normprime bvnorm variation parts product
    /// lattice order translate changevars convolve-bv convolve-l1 mollify
    /// iterated improper ndcorner catalog verify
    command: Option<String>,
    /// JSON job specification.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Catalog name, or a `.csv`/`.json` grid file.
    #[arg(long)]
    primitive: Option<String>,
    /// Second primitive for product, lattice and order.
    #[arg(long)]
    other: Option<String>,
    /// Catalog multiplier, or a `.json` cell grid.
    #[arg(long)]
    bv: Option<String>,
    /// `key=value` parameters for the primitive (or the multiplier when no
    /// primitive is given).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_hyphen_values = true)]
    interval: Option<Vec<String>>,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
    point: Option<Vec<String>>,
    #[arg(long, num_args = 2, value_names = ["S", "T"], allow_hyphen_values = true)]
    shift: Option<Vec<f64>>,
    /// `straight|swapped,alpha,beta,gamma1,gamma2`
    #[arg(long)]
    map: Option<String>,
    /// Poisson kernel height.
    #[arg(long)]
    z: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// join or meet.
    #[arg(long)]
    op: Option<String>,
    /// xpowy or arctanxy.
    #[arg(long)]
    example: Option<String>,
    /// dyfirst or dxfirst.
    #[arg(long)]
    order: Option<String>,
    /// One `lo,hi` pair per axis.
    #[arg(long = "limit", value_name = "LO,HI", allow_hyphen_values = true)]
    limits: Vec<String>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the computed primitive here (`.csv` or `.json`).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn reference(s: &str) -> FnRef {
    let lower = s.to_ascii_lowercase();
    if lower.ends_with(".csv") || lower.ends_with(".json") {
        FnRef::File { file: PathBuf::from(s) }
    } else {
        FnRef::Name(s.to_string())
    }
}

fn real(s: &str) -> Result<Real, CliError> {
    Ok(Real(primint_core::primitive::parse_ext(s)?.value()))
}

fn param_map(items: &[String]) -> Result<ParamMap, CliError> {
    let mut m = ParamMap::new();
    for it in items {
        let (k, v) = it.split_once('=').ok_or_else(|| CliError::usage(format!("expected KEY=VALUE, got {it:?}")))?;
        let v = match real(v) {
            Ok(r) => ParamValue::Num(r),
            Err(_) => ParamValue::Text(v.to_string()),
        };
        m.insert(k.to_string(), v);
    }
    Ok(m)
}

fn map_spec(s: &str) -> Result<MapSpec, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::usage(format!("--map expects kind,alpha,beta,gamma1,gamma2, got {s:?}"));
    if parts.len() != 5 {
        return Err(bad());
    }
    let kind = match parts[0] {
        "straight" => MapKind::Straight,
        "swapped" => MapKind::Swapped,
        _ => return Err(bad()),
    };
    let n = |k: usize| parts[k].parse::<f64>().map_err(|_| bad());
    Ok(MapSpec { kind, alpha: n(1)?, beta: n(2)?, gamma1: n(3)?, gamma2: n(4)? })
}

fn build(args: Args) -> Result<JobSpec, CliError> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            JobSpec::from_json(&text).map_err(|e| CliError::io(path, e))?
        }
        None => JobSpec::default(),
    };
    if let Some(c) = args.command {
        spec.command = c;
    }
    if spec.command.is_empty() {
        return Err(CliError::usage("no command given"));
    }
    if let Some(p) = &args.primitive {
        spec.primitive = Some(reference(p));
    }
    if let Some(p) = &args.other {
        spec.other = Some(reference(p));
    }
    if let Some(p) = &args.bv {
        spec.bv = Some(reference(p));
    }
    if !args.params.is_empty() {
        spec.params = Some(param_map(&args.params)?);
    }
    if let Some(v) = &args.interval {
        spec.interval = Some([real(&v[0])?, real(&v[1])?, real(&v[2])?, real(&v[3])?]);
    }
    if let Some(v) = &args.point {
        spec.point = Some([real(&v[0])?, real(&v[1])?]);
    }
    if let Some(v) = &args.shift {
        spec.shift = Some([v[0], v[1]]);
    }
    if let Some(m) = &args.map {
        spec.map = Some(map_spec(m)?);
    }
    if let Some(z) = args.z {
        let mut params = ParamMap::new();
        params.insert("z".into(), ParamValue::Num(Real(z)));
        spec.kernel = Some(FnRef::Catalog { name: "poisson".into(), params });
    }
    if !args.limits.is_empty() {
        let mut limits = Vec::new();
        for l in &args.limits {
            let (a, b) = l.split_once(',').ok_or_else(|| CliError::usage(format!("--limit expects LO,HI, got {l:?}")))?;
            limits.push([real(a)?, real(b)?]);
        }
        spec.limits = Some(limits);
    }
    spec.steps = args.steps.or(spec.steps);
    spec.op = args.op.or(spec.op);
    spec.example = args.example.or(spec.example);
    spec.order = args.order.or(spec.order);
    spec.suite = args.suite.or(spec.suite);
    spec.tol = args.tol.or(spec.tol);
    spec.resolution = args.resolution.or(spec.resolution);
    spec.seed = args.seed.or(spec.seed);
    spec.output = args.output.or(spec.output);
    Ok(spec)
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let spec = match build(args) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match primint::run(&spec) {
        Ok(report) => {
            println!("{}", report.to_json());
            eprintln!("{}", report.summary());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => fail(e),
    }
}
