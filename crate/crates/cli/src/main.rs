//! Command-line front end: rate prediction, sequence evaluation, transform
//! tables, and the verification suite, with CSV/JSON output for scripting.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error.

mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use tauberkit::construction::{
    f_eval, f_eval_fft, transform_eval, FftParams, FftTimeGrid, QuadError,
};
use tauberkit::ratefun::{compose_mk, predicted_rate, right_inverse, RateError, RateFunction};
use tauberkit::verify::{bundle_passes, verify_all, VerifyConfig};

use table::{Cell, Table};

#[derive(Parser)]
#[command(
    name = "tauberkit",
    about = "Decay-rate calculus and extremal-sequence toolkit",
    long_about = "Evaluates composite decay rates and their right-inverses, the extremal \
                  function sequence and its transform, and runs the grid certification suite.\n\
                  The TAUBERKIT_THREADS environment variable caps the worker count."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted decay rate 1/MK^-1(c t) for rates M, K given in the DSL
    Predict {
        /// DSL for M, e.g. "poly:2" or "sum(poly:1,logpow:2)"
        #[arg(long = "M")]
        m_dsl: String,
        /// DSL for K
        #[arg(long = "K")]
        k_dsl: String,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Comma-separated t values
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        /// Range form min:max:count[:log|lin]
        #[arg(long)]
        t_range: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Time-domain values f_m(t) of the extremal sequence
    Eval {
        /// Even sequence parameter m
        #[arg(long)]
        m: u32,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long)]
        t_range: Option<String>,
        /// Absolute quadrature tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// adaptive panels or FFT discretisation
        #[arg(long, value_enum, default_value = "adaptive")]
        method: Method,
        /// FFT window half-width (fft method)
        #[arg(long, default_value_t = 400.0)]
        s_max: f64,
        /// FFT sample count, a power of two (fft method)
        #[arg(long, default_value_t = 16384)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Analytically continued transform values on the strip
    Transform {
        #[arg(long)]
        m: u32,
        /// Real parts of lambda: range min:max:count[:log|lin]
        #[arg(long)]
        re_range: Option<String>,
        /// Fixed imaginary part used with --re-range
        #[arg(long, default_value_t = 0.0)]
        im: f64,
        /// Explicit points "re,im", repeatable
        #[arg(long = "lambda")]
        lambdas: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the certification suite and write the JSON report bundle
    Verify {
        /// JSON config file (VerifyConfig schema; missing fields default)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the m list, e.g. 2,4,6,8
        #[arg(long, value_delimiter = ',')]
        m_list: Vec<u32>,
        #[arg(long)]
        t_count: Option<usize>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Override the witness t list
        #[arg(long, value_delimiter = ',')]
        witness_t: Vec<f64>,
        /// Worker cap (default: TAUBERKIT_THREADS or machine parallelism)
        #[arg(long)]
        threads: Option<usize>,
        /// Bundle path (stdout when omitted)
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Summarise a bundle produced by `verify`
    Report {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Adaptive,
    Fft,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
}

fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        bail!("range must be min:max:count[:log|lin], got '{spec}'");
    }
    let min: f64 = parts[0].parse().context("range min")?;
    let max: f64 = parts[1].parse().context("range max")?;
    let count: usize = parts[2].parse().context("range count")?;
    if count == 0 {
        bail!("range count must be positive");
    }
    let log = match parts.get(3) {
        None | Some(&"lin") => false,
        Some(&"log") => true,
        Some(other) => bail!("unknown spacing '{other}' (use log or lin)"),
    };
    if count == 1 {
        return Ok(vec![min]);
    }
    // the negation rejects NaN too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if log && !(min > 0.0) {
        bail!("log spacing needs min > 0");
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if log {
                (min.ln() + i as f64 * (max.ln() - min.ln()) / n).exp()
            } else {
                min + i as f64 * (max - min) / n
            }
        })
        .collect())
}

fn gather_points(list: &[f64], range: &Option<String>) -> Result<Vec<f64>> {
    let mut points = list.to_vec();
    if let Some(spec) = range {
        points.extend(parse_range(spec)?);
    }
    if points.is_empty() {
        bail!("no evaluation points: pass --t or --t-range");
    }
    Ok(points)
}

fn emit(table: Table, out: &OutputArgs) -> Result<()> {
    let rendered = match out.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &out.output {
        Some(path) => {
            std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(())
}

fn cmd_predict(
    m_dsl: &str,
    k_dsl: &str,
    c: f64,
    ts: Vec<f64>,
    out: &OutputArgs,
) -> Result<ExitCode> {
    let m = RateFunction::parse(m_dsl)?;
    let k = RateFunction::parse(k_dsl)?;
    if !(c > 0.0 && c <= 1.0) {
        bail!("c = {c} must lie in (0, 1]");
    }
    let mk = compose_mk(&m, &k);
    let mut table = Table::new(vec!["t", "mk_at_inverse", "mk_inverse", "rate", "status"]);
    for &t in &ts {
        match predicted_rate(&m, &k, c, t) {
            Ok(rate) => {
                let inv = right_inverse(&mk, c * t).expect("inverse exists when rate does");
                table.push(vec![
                    Cell::Num(t),
                    Cell::Num(mk.eval(inv)),
                    Cell::Num(inv),
                    Cell::Num(rate),
                    Cell::Text("ok".into()),
                ]);
            }
            Err(RateError::DegenerateRate { .. }) => {
                table.push(vec![
                    Cell::Num(t),
                    Cell::Num(f64::NAN),
                    Cell::Num(0.0),
                    Cell::Num(f64::NAN),
                    Cell::Text("degenerate-rate".into()),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(table, out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(
    m: u32,
    ts: Vec<f64>,
    tol: f64,
    method: Method,
    s_max: f64,
    n: usize,
    out: &OutputArgs,
) -> Result<ExitCode> {
    let mut table = Table::new(vec![
        "t",
        "f",
        "abs_error_estimate",
        "truncation_bound",
        "nodes",
        "method",
        "status",
    ]);
    match method {
        Method::Adaptive => {
            for &t in &ts {
                match f_eval(m, t, tol) {
                    Ok(r) => table.push(vec![
                        Cell::Num(t),
                        Cell::Num(r.value.re),
                        Cell::Num(r.abs_error_estimate),
                        Cell::Num(r.truncation_bound),
                        Cell::Int(r.nodes_used),
                        Cell::Text("adaptive-panel".into()),
                        Cell::Text("ok".into()),
                    ]),
                    Err(QuadError::ToleranceNotMet {
                        estimate, nodes, ..
                    }) => table.push(vec![
                        Cell::Num(t),
                        Cell::Num(f64::NAN),
                        Cell::Num(estimate),
                        Cell::Num(f64::NAN),
                        Cell::Int(nodes),
                        Cell::Text("adaptive-panel".into()),
                        Cell::Text("tolerance-not-met".into()),
                    ]),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Method::Fft => {
            let (dt, count) = uniform_grid(&ts)?;
            let results = f_eval_fft(m, &FftTimeGrid { dt, count }, &FftParams { s_max, n })?;
            for (j, r) in results.iter().enumerate() {
                table.push(vec![
                    Cell::Num(j as f64 * dt),
                    Cell::Num(r.value.re),
                    Cell::Num(r.abs_error_estimate),
                    Cell::Num(r.truncation_bound),
                    Cell::Int(r.nodes_used),
                    Cell::Text("fft-grid".into()),
                    Cell::Text("ok".into()),
                ]);
            }
        }
    }
    emit(table, out)?;
    Ok(ExitCode::SUCCESS)
}

/// The FFT path needs a uniform grid starting at 0.
fn uniform_grid(ts: &[f64]) -> Result<(f64, usize)> {
    if ts.len() < 2 {
        bail!("fft method needs a t-range with at least two points");
    }
    let dt = ts[1] - ts[0];
    if ts[0] != 0.0 || dt <= 0.0 {
        bail!("fft method needs a uniform grid starting at t = 0");
    }
    for (i, &t) in ts.iter().enumerate() {
        if (t - i as f64 * dt).abs() > 1e-9 * dt {
            bail!("fft method needs uniform spacing; point {i} breaks it");
        }
    }
    Ok((dt, ts.len()))
}

fn cmd_transform(
    m: u32,
    re_range: Option<String>,
    im: f64,
    lambdas: Vec<String>,
    out: &OutputArgs,
) -> Result<ExitCode> {
    let mut points: Vec<Complex64> = Vec::new();
    if let Some(spec) = re_range {
        for re in parse_range(&spec)? {
            points.push(Complex64::new(re, im));
        }
    }
    for spec in &lambdas {
        let (re, im) = spec
            .split_once(',')
            .ok_or_else(|| anyhow!("--lambda expects re,im"))?;
        points.push(Complex64::new(re.trim().parse()?, im.trim().parse()?));
    }
    if points.is_empty() {
        bail!("no evaluation points: pass --re-range or --lambda");
    }
    let mut table = Table::new(vec![
        "re_lambda",
        "im_lambda",
        "log_mag",
        "phase",
        "re",
        "im",
        "status",
    ]);
    for lam in points {
        match transform_eval(m, lam) {
            Ok(v) => {
                let z = v.to_complex();
                table.push(vec![
                    Cell::Num(lam.re),
                    Cell::Num(lam.im),
                    Cell::Num(v.log_mag()),
                    Cell::Num(v.phase()),
                    Cell::Num(z.re),
                    Cell::Num(z.im),
                    Cell::Text("ok".into()),
                ]);
            }
            Err(e) => table.push(vec![
                Cell::Num(lam.re),
                Cell::Num(lam.im),
                Cell::Num(f64::NAN),
                Cell::Num(f64::NAN),
                Cell::Num(f64::NAN),
                Cell::Num(f64::NAN),
                Cell::Text(format!("error: {e}")),
            ]),
        }
    }
    emit(table, out)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    config: Option<PathBuf>,
    m_list: Vec<u32>,
    t_count: Option<usize>,
    t_max: Option<f64>,
    witness_t: Vec<f64>,
    threads: Option<usize>,
    output: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut cfg: VerifyConfig = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => VerifyConfig::default(),
    };
    if !m_list.is_empty() {
        cfg.m_list = m_list;
    }
    if let Some(v) = t_count {
        cfg.t_count = v;
    }
    if let Some(v) = t_max {
        cfg.t_max = v;
    }
    if !witness_t.is_empty() {
        cfg.witness.t_list = witness_t;
    }
    if threads.is_some() {
        cfg.threads = threads;
    }
    let reports = verify_all(&cfg)?;
    let pass = bundle_passes(&reports);
    let bundle = serde_json::json!({
        "timestamp_unix": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        "pass": pass,
        "config": cfg,
        "reports": reports,
    });
    let rendered = serde_json::to_string_pretty(&bundle)? + "\n";
    match &output {
        Some(path) => std::fs::write(path, rendered)?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_report(bundle: PathBuf, format: ReportFormat) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&bundle)
        .with_context(|| format!("reading {}", bundle.display()))?;
    let parsed: serde_json::Value = serde_json::from_str(&text)?;
    let reports: Vec<tauberkit::VerificationReport> =
        serde_json::from_value(parsed["reports"].clone()).context("bundle has no reports array")?;
    let pass = bundle_passes(&reports);
    match format {
        ReportFormat::Csv => {
            let mut table = Table::new(vec![
                "property_id",
                "pass",
                "expected_failure",
                "extremum",
                "threshold",
            ]);
            for r in &reports {
                table.push(vec![
                    Cell::Text(r.property_id.clone()),
                    Cell::Text(r.pass.to_string()),
                    Cell::Text(r.expected_failure().to_string()),
                    Cell::Num(r.extremum),
                    Cell::Num(r.threshold),
                ]);
            }
            print!("{}", table.to_csv());
        }
        ReportFormat::Text => {
            for r in &reports {
                let status = if r.pass {
                    "PASS"
                } else if r.expected_failure() {
                    "FAIL (expected)"
                } else {
                    "FAIL"
                };
                println!(
                    "{:16} {:16} extremum {:.6e} threshold {:.6e}",
                    r.property_id, status, r.extremum, r.threshold
                );
                for n in &r.notes {
                    println!("    {n}");
                }
            }
            println!("bundle: {}", if pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Predict {
            m_dsl,
            k_dsl,
            c,
            t,
            t_range,
            out,
        } => gather_points(&t, &t_range).and_then(|ts| cmd_predict(&m_dsl, &k_dsl, c, ts, &out)),
        Command::Eval {
            m,
            t,
            t_range,
            tol,
            method,
            s_max,
            n,
            out,
        } => {
            gather_points(&t, &t_range).and_then(|ts| cmd_eval(m, ts, tol, method, s_max, n, &out))
        }
        Command::Transform {
            m,
            re_range,
            im,
            lambdas,
            out,
        } => cmd_transform(m, re_range, im, lambdas, &out),
        Command::Verify {
            config,
            m_list,
            t_count,
            t_max,
            witness_t,
            threads,
            output,
        } => cmd_verify(config, m_list, t_count, t_max, witness_t, threads, output),
        Command::Report { bundle, format } => cmd_report(bundle, format),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
