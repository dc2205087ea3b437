//! `ncs4`: command-line front end for the exact geometry engine.

use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ncs4_core::connection::{check_metric_compatibility, check_torsion_free};
use ncs4_core::curvature::{closed_form_tensor, gcb_integrand};
use ncs4_core::json::{euler_to_json, local_to_json, module_vec_to_json, qscalar_to_json, trace_value_to_json, SCHEMA};
use ncs4_core::{
    closed_form_connection, euler_characteristic, parse_local, quadrature_oracle, run_suite, solve_connection,
    tau_delta, tau_delta_loc, Context, CurvatureTensor, GeometryError, Metric, Perturbation, Suite, TraceError,
};

#[derive(Parser)]
#[command(name = "ncs4", version, about = "Exact geometry of the theta-deformed four-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PerturbationArgs {
    /// Conformal factor delta, e.g. "(1+T^2)^3"
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Shorthand for delta = (1+T^2)^N
    #[arg(long = "N", allow_hyphen_values = true)]
    n: Option<i32>,
    /// Formal mode: alpha as a central hermitian expression in T
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites
    Verify {
        /// algebra, derivations, module, connection, curvature, trace or all
        suite: String,
        #[command(flatten)]
        pert: PerturbationArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Levi-Civita connection table
    Connection {
        #[command(flatten)]
        pert: PerturbationArgs,
        #[arg(long)]
        compare_closed_form: bool,
        #[arg(long)]
        json: bool,
    },
    /// Nonzero curvature components, Ricci, scalar curvature and integrand
    Curvature {
        #[command(flatten)]
        pert: PerturbationArgs,
        #[arg(long)]
        json: bool,
    },
    /// Euler characteristic from the Gauss-Chern-Bonnet integrand
    Gcb {
        #[command(flatten)]
        pert: PerturbationArgs,
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Trace of an element
    Trace {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        pert: PerturbationArgs,
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a central element in |Z|^2, |W|^2 and T
    Center {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an expression to normal form
    Mul {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Self { kind, message: message.to_string() }
    }
}

impl From<ncs4_core::ParseError> for Failure {
    fn from(e: ncs4_core::ParseError) -> Self {
        Failure::new("ParseError", e)
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        let kind = match e {
            GeometryError::UnsupportedDelta(_) => "UnsupportedDelta",
            GeometryError::NotInvertibleMetric(_) => "NotInvertibleMetric",
            GeometryError::NotInImage => "NotInImage",
        };
        Failure::new(kind, e)
    }
}

impl From<TraceError> for Failure {
    fn from(e: TraceError) -> Self {
        let kind = match &e {
            TraceError::NotCentral => "NotCentral",
            TraceError::DivergentIntegral(_) => "DivergentIntegral",
            TraceError::AlphaBoundaryNonzero { .. } => "AlphaBoundaryNonzero",
            TraceError::AlphaSingular(_) => "AlphaSingular",
            TraceError::ConvergenceFailure(_) => "ConvergenceFailure",
            TraceError::NonPolynomialDelta => "NonPolynomialDelta",
            TraceError::UnresolvedDelta(_) => "UnresolvedDelta",
            TraceError::NotReal => "NotReal",
            TraceError::ClosedFormMismatch { .. } => "ClosedFormMismatch",
            TraceError::Curvature(_) => "ClosedFormMismatch",
            TraceError::Geometry(_) => "UnsupportedDelta",
        };
        Failure::new(kind, e)
    }
}

/// Successful command output: text, JSON and exit status.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn perturbation(args: &PerturbationArgs) -> Result<Perturbation, Failure> {
    match (&args.delta, args.n, &args.alpha) {
        (None, None, None) => Ok(Perturbation::identity()),
        (Some(d), None, None) => Ok(Perturbation::from_delta(&parse_local(d)?)?),
        (None, Some(n), None) => Ok(Perturbation::one_plus_t2_pow(n)),
        (None, None, Some(a)) => Ok(Perturbation::formal(parse_local(a)?)?),
        _ => Err(Failure::new("UsageError", "give at most one of --delta, --N, --alpha")),
    }
}

fn describe(p: &Perturbation) -> String {
    if p.is_formal() {
        format!("formal, alpha = {}", p.alpha())
    } else {
        p.delta().to_string()
    }
}

fn with_schema(command: &str, p: Option<&Perturbation>, mut body: Value) -> Value {
    body["schema"] = json!(SCHEMA);
    body["command"] = json!(command);
    if let Some(p) = p {
        body["delta"] = json!(describe(p));
    }
    body
}

fn cmd_verify(suite: &str, pert: &PerturbationArgs, seed: u64, tolerance: f64) -> Result<Output, Failure> {
    let suite: Suite = suite.parse().map_err(|e| Failure::new("UsageError", e))?;
    let p = perturbation(pert)?;
    let ctx = Context::new(p.clone(), seed, tolerance);
    let report = run_suite(suite, &ctx);
    let mut body = report.to_json();
    body["suite"] = json!(suite.name());
    body["seed"] = json!(seed);
    Ok(Output { text: report.to_string(), json: with_schema("verify", Some(&p), body), ok: report.passed() })
}

fn cmd_connection(pert: &PerturbationArgs, compare: bool) -> Result<Output, Failure> {
    let p = perturbation(pert)?;
    let h = Metric::new(p.clone())?;
    let table = solve_connection(&h);
    let mut text = Vec::new();
    let mut entries = Vec::new();
    for a in 1..=4 {
        for b in 1..=4 {
            let v = table.entry(a, b);
            text.push(format!("nabla_{} E_{} = {}", a, b, v));
            entries.push(json!({"a": a, "b": b, "value": module_vec_to_json(v)}));
        }
    }
    let mut checks = vec![
        ("metric-compatible", check_metric_compatibility(&table, &h)),
        ("torsion-free", check_torsion_free(&table)),
    ];
    if compare {
        checks.insert(0, ("levi-civita-unique", table.first_difference(&closed_form_connection(&p, None)).is_none()));
    }
    let mut check_json = Vec::new();
    for (id, ok) in &checks {
        let detail = match (*id, ok) {
            ("levi-civita-unique", true) => "Koszul = closed form",
            ("levi-civita-unique", false) => "Koszul differs from closed form",
            (_, true) => "holds",
            (_, false) => "violated",
        };
        let status = if *ok { "pass" } else { "fail" };
        text.push(format!("{}: {} ({})", id, status, detail));
        check_json.push(json!({"id": id, "status": status, "detail": detail}));
    }
    let ok = checks.iter().all(|(_, ok)| *ok);
    let body = json!({"table": entries, "checks": check_json});
    Ok(Output { text: text.join("\n"), json: with_schema("connection", Some(&p), body), ok })
}

fn cmd_curvature(pert: &PerturbationArgs) -> Result<Output, Failure> {
    let p = perturbation(pert)?;
    let h = Metric::new(p.clone())?;
    let ct = CurvatureTensor::compute(&solve_connection(&h), &h);
    let mut text = Vec::new();
    let mut comps = Vec::new();
    for (&(a, b, pp, q), v) in ct.nonzero() {
        if a < b && pp < q {
            text.push(format!("R_{}{}{}{} = {}", a, b, pp, q, v));
            comps.push(json!({"a": a, "b": b, "p": pp, "q": q, "value": local_to_json(v)}));
        }
    }
    let ric = ct.ricci();
    let mut ric_json = Vec::new();
    for (a, row) in ric.iter().enumerate() {
        for (b, r) in row.iter().enumerate().filter(|(_, r)| !r.is_zero()) {
            text.push(format!("Ric_{}{} = {}", a + 1, b + 1, r));
            ric_json.push(json!({"a": a + 1, "b": b + 1, "value": local_to_json(r)}));
        }
    }
    let s = ct.scalar(&ric);
    text.push(format!("S = {}", s));
    let table_ok = {
        let expected = closed_form_tensor(&p);
        ct.nonzero().count() == expected.len() && expected.iter().all(|(k, v)| &ct.component(k.0, k.1, k.2, k.3) == v)
    };
    let integrand = gcb_integrand(&ct, &p);
    let ok = table_ok && integrand.is_ok();
    let integrand_json = match &integrand {
        Ok(x) => {
            text.push(format!("integrand = {}", x));
            local_to_json(x)
        }
        Err(e) => {
            text.push(format!("integrand: {}", e));
            Value::Null
        }
    };
    text.push(format!("closed form: {}", if ok { "match" } else { "mismatch" }));
    let body = json!({
        "components": comps,
        "ricci": ric_json,
        "scalar": local_to_json(&s),
        "integrand": integrand_json,
        "closed_form_match": ok,
    });
    Ok(Output { text: text.join("\n"), json: with_schema("curvature", Some(&p), body), ok })
}

fn cmd_gcb(pert: &PerturbationArgs, numeric: bool, tolerance: f64) -> Result<Output, Failure> {
    let p = perturbation(pert)?;
    let e = euler_characteristic(&p)?;
    let mut text = vec![
        format!("chi = {} (exact)", e.chi),
        format!("alpha(1) = {}, alpha(-1) = {}", e.alpha_at_1, e.alpha_at_minus1),
        format!("integrand = {}", e.integrand),
    ];
    let mut body = euler_to_json(&e);
    if numeric {
        let value = quadrature_oracle(&e.integrand, &p, tolerance * 32.0 * PI * PI)? / (32.0 * PI * PI);
        text.push(format!("chi (quadrature) = {:.12}", value));
        body["numeric_chi"] = json!(value);
    }
    Ok(Output { text: text.join("\n"), json: with_schema("gcb", Some(&p), body), ok: true })
}

fn cmd_trace(expr: &str, pert: &PerturbationArgs, numeric: bool, tolerance: f64) -> Result<Output, Failure> {
    let p = perturbation(pert)?;
    let x = parse_local(expr)?;
    let value = match (x.as_algebra(), p.delta().as_algebra()) {
        (Some(a), Some(_)) => tau_delta(a, &p)?,
        _ => tau_delta_loc(&x, &p)?,
    };
    let mut text = vec![format!("tau = {}", value)];
    let mut body = json!({"input": x.to_string(), "value": trace_value_to_json(&value)});
    if numeric {
        let approx = quadrature_oracle(&x, &p, tolerance)?;
        match value.to_f64() {
            Some(exact) => text.push(format!("exact ~ {:.12}, quadrature = {:.12}", exact, approx)),
            None => text.push(format!("quadrature = {:.12}", approx)),
        }
        body["numeric"] = json!(approx);
    }
    Ok(Output { text: text.join("\n"), json: with_schema("trace", Some(&p), body), ok: true })
}

fn cmd_center(expr: &str) -> Result<Output, Failure> {
    let x = parse_local(expr)?;
    let central = x.is_central();
    let mut text = vec![format!("central: {}", central)];
    let mut terms = Vec::new();
    if central {
        let parts = x.num().center_decompose().map_err(|e| Failure::new("NotCentral", e))?;
        for ((j, l, eps), c) in &parts {
            text.push(format!("|Z|^{} |W|^{} T^{}: {}", 2 * j, 2 * l, eps, c));
            terms.push(json!({"abs_z2": j, "abs_w2": l, "t": eps, "coeff": qscalar_to_json(c)}));
        }
        if !x.den().is_one() {
            text.push(format!("denominator: {}", x.den().to_element()));
        }
    }
    let body = json!({"input": x.to_string(), "central": central, "terms": terms, "value": local_to_json(&x)});
    Ok(Output { text: text.join("\n"), json: with_schema("center", None, body), ok: true })
}

fn cmd_mul(expr: &str) -> Result<Output, Failure> {
    let x = parse_local(expr)?;
    let body = json!({"value": local_to_json(&x), "text": x.to_string()});
    Ok(Output { text: x.to_string(), json: with_schema("mul", None, body), ok: true })
}

/// Write to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", text).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json_mode, result) = match &cli.command {
        Command::Verify { suite, pert, seed, tolerance, json } => (*json, cmd_verify(suite, pert, *seed, *tolerance)),
        Command::Connection { pert, compare_closed_form, json } => (*json, cmd_connection(pert, *compare_closed_form)),
        Command::Curvature { pert, json } => (*json, cmd_curvature(pert)),
        Command::Gcb { pert, numeric, tolerance, json } => (*json, cmd_gcb(pert, *numeric, *tolerance)),
        Command::Trace { expr, pert, numeric, tolerance, json } => (*json, cmd_trace(expr, pert, *numeric, *tolerance)),
        Command::Center { expr, json } => (*json, cmd_center(expr)),
        Command::Mul { expr, json } => (*json, cmd_mul(expr)),
    };
    match result {
        Ok(out) => {
            if json_mode {
                emit(&serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            } else {
                emit(&out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            if json_mode {
                let body = json!({"schema": SCHEMA, "error": f.kind, "message": f.message});
                emit(&serde_json::to_string_pretty(&body).expect("JSON values serialize"));
            }
            eprintln!("error: {}: {}", f.kind, f.message);
            ExitCode::from(2)
        }
    }
}
