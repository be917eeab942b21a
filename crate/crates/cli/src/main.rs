//! `torusasym`: evaluate colored Jones polynomials of torus knots, assemble
//! their asymptotic expansions, and run the verification suites.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 numerical failure. Errors are reported as one JSON object on stderr.

mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use torusasym::asymptotics::{classify_region, expand, ExpansionSpec};
use torusasym::jones::{evaluate, EvalPoint, Method};
use torusasym::suite::{verify, DEFAULT_BOUND};
use torusasym::{Error, Precision, TorusKnot};

use output::{csv_text, emit, expansion_json, json_text, Numbers};
use parse::{format_xi, parse_n_list, parse_xi, NList};

const PRECISION_ENV: &str = "TORUSASYM_PRECISION";
const DEFAULT_DIGITS: u32 = 30;

#[derive(Parser)]
#[command(name = "torusasym", version, about = "Colored Jones asymptotics of torus knots")]
struct Cli {
    /// Working precision in decimal digits (default: $TORUSASYM_PRECISION, else 30).
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct KnotArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
}

#[derive(Args)]
struct OutputArgs {
    /// Write rows as CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write records as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Integral,
    Sum,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate J_N(T(a,b); e^{ξ/N}).
    Eval {
        #[command(flatten)]
        knot: KnotArgs,
        /// N, or a range start:stop:x2 / start:stop:+100.
        #[arg(long = "N", value_parser = parse_n_list)]
        n: NList,
        /// ξ written as RE+IMi.
        #[arg(long, value_parser = parse_xi, allow_hyphen_values = true)]
        xi: Complex64,
        #[arg(long, value_enum, default_value = "integral")]
        method: MethodArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Assemble the asymptotic expansion and compare it with the exact value.
    Expand {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, value_parser = parse_xi, allow_hyphen_values = true)]
        xi: Complex64,
        #[arg(long = "N", value_parser = parse_n_list, default_value = "100")]
        n: NList,
        /// Number of 1/N correction orders.
        #[arg(long = "J", default_value_t = 0)]
        order_j: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the character-variety and Chern-Simons/torsion suites.
    Verify {
        /// Include every torus knot with ab at most this.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        /// Add this offset to every compared quantity (harness self-test).
        #[arg(long, default_value_t = 0.0, hide = true)]
        perturb: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Classify a rectangular grid of ξ by the behaviour of the expansion.
    Region {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        re_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        re_max: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im_min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        im_max: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Config(String, String),
    Numeric(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.kind().into(), e.to_string())
        } else {
            Failure::Numeric(e)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn config(kind: &str, message: impl Into<String>) -> Failure {
    Failure::Config(kind.into(), message.into())
}

fn report_failure(f: Failure) -> ExitCode {
    let (code, body) = match f {
        Failure::Config(kind, message) => (2, json!({ "error": "invalid_input", "kind": kind, "message": message })),
        Failure::Numeric(e) => (3, json!({ "error": "numeric_failure", "kind": e.kind(), "message": e.to_string() })),
        Failure::Io(e) => (3, json!({ "error": "io", "kind": "io", "message": e.to_string() })),
    };
    eprintln!("{body}");
    ExitCode::from(code)
}

fn precision(digits: Option<u32>) -> Result<Precision, Failure> {
    let digits = match digits {
        Some(d) => d,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| config("invalid_precision", format!("{PRECISION_ENV}='{v}' is not an integer")))?,
            Err(_) => DEFAULT_DIGITS,
        },
    };
    Ok(Precision::with_digits(digits)?)
}

fn cmd_eval(knot: TorusKnot, ns: &[u64], xi: Complex64, method: MethodArg, out: &OutputArgs, p: &Precision) -> Result<ExitCode, Failure> {
    let method = match method {
        MethodArg::Integral => Method::Integral,
        MethodArg::Sum => Method::Sum,
    };
    let nums = Numbers { digits: p.working_digits() };
    let points = ns.iter().map(|&n| EvalPoint::new(xi, n)).collect::<Result<Vec<_>, _>>()?;
    let values: Vec<_> = points.par_iter().map(|pt| evaluate(&knot, pt, method, p)).collect();
    let mut records = Vec::with_capacity(values.len());
    for (pt, v) in points.iter().zip(values) {
        let (value, used) = v?;
        records.push(json!({
            "a": knot.a(),
            "b": knot.b(),
            "N": pt.n(),
            "xi": format_xi(xi),
            "method": match used { Method::Integral => "integral", Method::Sum => "sum" },
            "value_re": nums.re(&value),
            "value_im": nums.im(&value),
            "abs": nums.abs(&value),
            "precision_digits": nums.digits,
        }));
    }
    if let Some(path) = &out.csv {
        let header = ["a", "b", "N", "xi", "method", "value_re", "value_im", "abs", "precision_digits"];
        let rows = records.iter().map(|r| header.iter().map(|h| plain(&r[*h])).collect::<Vec<_>>());
        emit(Some(path), &csv_text(&header, rows))?;
    }
    if let Some(path) = &out.json {
        emit(Some(path), &json_text(&Value::Array(records.clone())))?;
    }
    if out.csv.is_none() && out.json.is_none() {
        write_stdout(records)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// A single record prints as one JSON object, several as one object per line.
fn write_stdout(records: Vec<Value>) -> Result<(), Failure> {
    let text = if records.len() == 1 {
        json_text(&records[0])
    } else {
        records.iter().map(|r| format!("{r}\n")).collect()
    };
    Ok(emit(None, &text)?)
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn cmd_expand(knot: TorusKnot, xi: Complex64, ns: &[u64], order_j: usize, out: &OutputArgs, p: &Precision) -> Result<ExitCode, Failure> {
    let nums = Numbers { digits: p.working_digits() };
    let reports: Vec<_> = ns
        .par_iter()
        .map(|&n| expand(&ExpansionSpec { knot, xi, n, order_j }, p))
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let xi_s = format_xi(xi);
    let records: Vec<Value> = reports.iter().map(|r| expansion_json(r, knot.a(), knot.b(), &xi_s, order_j, nums)).collect();
    if let Some(path) = &out.csv {
        let header = ["N", "oracle_abs", "approx_abs", "residual", "case_tag"];
        let rows = reports.iter().map(|r| {
            vec![
                r.n.to_string(),
                plain(&nums.abs(&r.oracle)),
                plain(&nums.abs(&r.approximant)),
                format!("{:e}", r.residual),
                r.case_tag.as_str().to_string(),
            ]
        });
        emit(Some(path), &csv_text(&header, rows))?;
    }
    if let Some(path) = &out.json {
        emit(Some(path), &json_text(&Value::Array(records.clone())))?;
    }
    if out.csv.is_none() && out.json.is_none() {
        write_stdout(records)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(bound: i64, perturb: f64, path: Option<&PathBuf>, p: &Precision) -> Result<ExitCode, Failure> {
    if bound < 6 {
        return Err(config("invalid_bound", format!("bound {bound} admits no torus knot (smallest ab is 6)")));
    }
    let report = verify(bound, perturb, p)?;
    let passed = report.passed();
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["status"] = json!(if passed { "PASS" } else { "FAIL" });
    emit(path.map(|p| p.as_path()), &json_text(&v))?;
    if path.is_some() {
        println!("{}", v["status"].as_str().unwrap_or_default());
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Grid coordinate i·step from `min`, rounded so that printed values stay short.
fn grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step + 1e-9).floor() as i64;
    (0..=count).map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12).collect()
}

fn cmd_region(knot: TorusKnot, bounds: [f64; 4], step: f64, path: Option<&PathBuf>) -> Result<ExitCode, Failure> {
    let [re_min, re_max, im_min, im_max] = bounds;
    if step <= 0.0 || !step.is_finite() {
        return Err(config("invalid_grid", "step must be positive"));
    }
    if bounds.iter().any(|v| !v.is_finite()) || re_max < re_min || im_max < im_min {
        return Err(config("invalid_grid", "grid bounds must be finite with min <= max"));
    }
    if im_min < 0.0 {
        return Err(config("invalid_grid", "the region plot covers Im xi >= 0"));
    }
    let mut rows = Vec::new();
    for im in grid(im_min, im_max, step) {
        for re in grid(re_min, re_max, step) {
            let class = classify_region(&knot, Complex64::new(re, im));
            rows.push(vec![re.to_string(), im.to_string(), class.as_str().to_string()]);
        }
    }
    emit(path.map(|p| p.as_path()), &csv_text(&["re", "im", "class"], rows))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let p = precision(cli.digits)?;
    let knot = |k: &KnotArgs| TorusKnot::new(k.a, k.b);
    match cli.command {
        Command::Eval { knot: k, n, xi, method, out } => cmd_eval(knot(&k)?, &n.0, xi, method, &out, &p),
        Command::Expand { knot: k, xi, n, order_j, out } => cmd_expand(knot(&k)?, xi, &n.0, order_j, &out, &p),
        Command::Verify { bound, perturb, json } => cmd_verify(bound, perturb, json.as_ref(), &p),
        Command::Region { knot: k, re_min, re_max, im_min, im_max, step, csv } => {
            cmd_region(knot(&k)?, [re_min, re_max, im_min, im_max], step, csv.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return report_failure(config("invalid_arguments", first));
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => report_failure(f),
    }
}
