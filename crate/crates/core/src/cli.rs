//! Command-line front end: argument parsing, report documents and the three
//! output encoders.
//!
//! Every command builds one JSON document. `--format json` prints it with
//! 17 significant digits per float, `--format csv` flattens it to
//! `key,value` rows with dotted paths, and `--format table` prints a
//! human-oriented rendering with shortest round-trip floats.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::analysis::DensityMatrix;
use crate::experiments::{
    bell_decompose_initial, monte_carlo, no_signaling_report, no_signaling_sweep, run_experiment,
    BellTerm, Experiment, ExperimentReport, McSource, MonteCarloReport, NoSignalingReport,
    SweepRow, REMOTE_PAIR,
};
use crate::protocol::{
    compile, interpret, Branch, Metric, MetricValue, Mode, ParseError, ProtocolOutput,
    RuntimeError, StatementKind,
};
use crate::qmath::{frobenius_distance, ComplexMatrix, C64};
use crate::states::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentArg {
    Exp1,
    Exp2,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Exp1 => Experiment::ProductZ,
            ExperimentArg::Exp2 => Experiment::BellOperator,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qswap",
    version,
    about = "Entanglement swapping on two singlet pairs, simulated exactly"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure z on particles 2 and 3 and report the heralded states of 1 and 4
    Exp1 {
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Measure in the Bell basis on particles 2 and 3 and report 1 and 4
    Exp2 {
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Expand the initial state in Bell pairs on (2,3) and (1,4)
    Decompose {
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Compare the averaged state of 1 and 4 before and after measurement
    Nosignal {
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        /// Also average over N random joint bases on 2 and 3
        #[arg(long, value_name = "N")]
        sweep: Option<u64>,
        #[arg(long, value_parser = parse_seed, default_value = "0x5EED")]
        seed: u64,
    },
    /// Run a .qproto script
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RunMode::Exhaustive)]
        mode: RunMode,
        #[arg(long, value_parser = parse_seed, default_value = "0x5EED")]
        seed: u64,
        /// Number of sampled runs (sampled mode only)
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Monte Carlo frequencies of a canned experiment
    Sample {
        #[arg(value_enum)]
        experiment: ExperimentArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_parser = parse_seed, default_value = "0x5EED")]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
}

/// Decimal or `0x`-prefixed hexadecimal seed.
fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: io::Error },
    #[error("{}", join_errors(.0))]
    Syntax(Vec<ParseError>),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Numeric(#[from] crate::Error),
    #[error("cannot write output: {0}")]
    Output(io::Error),
}

fn join_errors(errors: &[ParseError]) -> String {
    errors
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    /// 2 for unusable arguments, 3 for script errors, 4 for everything that
    /// fails after the input was accepted.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Syntax(_) => 3,
            CliError::Runtime(_) | CliError::Numeric(_) | CliError::Output(_) => 4,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, stdout_is_tty: bool) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    let default = if stdout_is_tty {
        OutputFormat::Table
    } else {
        OutputFormat::Json
    };
    match execute(cli.command, default) {
        Ok(text) => match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            Ok(()) => 0,
            // a closed pipe downstream is not our failure
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}", CliError::Output(e));
                4
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a command and returns the full text for stdout.
pub fn execute(command: Command, default: OutputFormat) -> Result<String, CliError> {
    match command {
        Command::Exp1 { format } => Ok(render_experiment(
            Experiment::ProductZ,
            format.unwrap_or(default),
        )),
        Command::Exp2 { format } => Ok(render_experiment(
            Experiment::BellOperator,
            format.unwrap_or(default),
        )),
        Command::Decompose { format } => {
            let terms = bell_decompose_initial();
            Ok(emit(
                format.unwrap_or(default),
                || decomposition_document(&terms),
                || decomposition_table(&terms),
            ))
        }
        Command::Nosignal {
            format,
            sweep,
            seed,
        } => {
            let report = no_signaling_report();
            let sweep = match sweep {
                Some(n) => Some((seed, no_signaling_sweep(n, seed)?)),
                None => None,
            };
            Ok(emit(
                format.unwrap_or(default),
                || no_signaling_document(&report, sweep.as_ref()),
                || no_signaling_table(&report, sweep.as_ref()),
            ))
        }
        Command::Run {
            file,
            mode,
            seed,
            trials,
            format,
        } => {
            let bytes = std::fs::read(&file).map_err(|source| CliError::Input {
                path: file.clone(),
                source,
            })?;
            let text = std::str::from_utf8(&bytes)
                .map_err(|_| CliError::Syntax(vec![crate::protocol::parse_bytes(&bytes).unwrap_err()]))?;
            let program = compile(text).map_err(CliError::Syntax)?;
            let format = format.unwrap_or(default);
            match mode {
                RunMode::Exhaustive => {
                    let out = interpret(&program, Mode::Exhaustive)?;
                    Ok(emit(format, || run_document(&out), || run_table(&out)))
                }
                RunMode::Sampled => {
                    let runs = (0..trials)
                        .map(|trial| {
                            let mut out = interpret(&program, Mode::Sampled { seed, trial })?;
                            Ok((trial, out.branches.pop()))
                        })
                        .collect::<Result<Vec<_>, RuntimeError>>()?;
                    Ok(emit(
                        format,
                        || sampled_document(seed, &runs),
                        || sampled_table(seed, &runs),
                    ))
                }
            }
        }
        Command::Sample {
            experiment,
            trials,
            seed,
            format,
        } => {
            let e: Experiment = experiment.into();
            let report = monte_carlo(McSource::Experiment(e), trials, seed)?;
            Ok(emit(
                format.unwrap_or(default),
                || monte_carlo_document(Some(e.id()), &report),
                || monte_carlo_table(Some(e.id()), &report),
            ))
        }
    }
}

fn emit(format: OutputFormat, doc: impl FnOnce() -> Value, table: impl FnOnce() -> String) -> String {
    match format {
        OutputFormat::Json => to_json(&doc()),
        OutputFormat::Csv => to_csv(&doc()),
        OutputFormat::Table => table(),
    }
}

fn render_experiment(e: Experiment, format: OutputFormat) -> String {
    let report = run_experiment(e);
    emit(
        format,
        || report_document(&report),
        || {
            let title = match e {
                Experiment::ProductZ => "experiment 1: z measurement on particles 2 and 3",
                Experiment::BellOperator => "experiment 2: Bell measurement on particles 2 and 3",
            };
            format!("{title}\n{}", report_table(&report))
        },
    )
}

// ---------------------------------------------------------------------------
// float formatting

/// C `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// below 1e-4 and from 1e17 up.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (16 - exp) as usize, x)).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
fn num(x: f64) -> String {
    // no negative zero in tables
    let x = if x == 0.0 { 0.0 } else { x };
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn complex(c: C64) -> String {
    let sign = if c.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", num(c.re), num(c.im.abs()))
}

// ---------------------------------------------------------------------------
// JSON

struct G17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for G17Formatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_g17(value).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with `%.17g` floats and a trailing newline. Keys keep their
/// insertion order.
pub fn to_json(doc: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter(PrettyFormatter::new()));
    doc.serialize(&mut ser).expect("writing to memory");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

fn c_pair(c: C64) -> Value {
    json!([c.re, c.im])
}

/// Row-major nested array of `[re, im]` pairs.
pub fn matrix_document(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| c_pair(m[(r, c)])).collect()))
            .collect(),
    )
}

fn density_document(d: &DensityMatrix) -> Value {
    json!({ "labels": d.labels(), "matrix": matrix_document(d.matrix()) })
}

pub fn state_document(s: &StateVector) -> Value {
    json!({
        "labels": s.labels(),
        "amplitudes": s.amplitudes().entries().iter().map(|c| c_pair(*c)).collect::<Vec<_>>(),
    })
}

/// Document with top-level keys `experiment`, `rows`, `summary`.
pub fn report_document(r: &ExperimentReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "outcome": row.outcome,
                "probability": row.probability,
                "heralded_state": {
                    "labels": row.heralded_state.labels(),
                    "name": row.heralded_name,
                    "amplitudes": row.heralded_state.amplitudes().entries().iter().map(|c| c_pair(*c)).collect::<Vec<_>>(),
                },
                "schmidt": row.schmidt,
                "entropy_bits": row.entropy_bits,
                "concurrence": row.concurrence,
                "correlators": {
                    "zz": row.correlators.zz,
                    "xx": row.correlators.xx,
                    "yy": row.correlators.yy,
                },
            })
        })
        .collect();
    json!({
        "experiment": r.experiment,
        "rows": rows,
        "summary": {
            "rho14_avg": matrix_document(r.summary.rho_avg.matrix()),
            "frobenius_to_premeasurement": r.summary.frobenius_to_premeasurement,
            "mixed_concurrence": r.summary.mixed_concurrence,
        },
    })
}

pub fn decomposition_document(terms: &[BellTerm]) -> Value {
    json!({
        "inner_pair": [2, 3],
        "remote_pair": [1, 4],
        "terms": terms.iter().map(|t| json!({
            "inner": t.inner.label(),
            "remote": t.remote.label(),
            "coefficient": c_pair(t.coefficient),
        })).collect::<Vec<_>>(),
    })
}

fn distance_to_quarter(d: &DensityMatrix) -> f64 {
    let target = DensityMatrix::maximally_mixed(REMOTE_PAIR.to_vec()).expect("two labels");
    frobenius_distance(d.matrix(), target.matrix()).expect("same shape")
}

pub fn no_signaling_document(r: &NoSignalingReport, sweep: Option<&(u64, Vec<SweepRow>)>) -> Value {
    let mut doc = json!({
        "baseline": matrix_document(r.baseline.matrix()),
        "experiment1": matrix_document(r.experiment1.matrix()),
        "experiment2": matrix_document(r.experiment2.matrix()),
        "distances": {
            "baseline_experiment1": r.distances[0],
            "baseline_experiment2": r.distances[1],
            "experiment1_experiment2": r.distances[2],
        },
        "distance_to_maximally_mixed": {
            "baseline": distance_to_quarter(&r.baseline),
            "experiment1": distance_to_quarter(&r.experiment1),
            "experiment2": distance_to_quarter(&r.experiment2),
        },
        "mixed_concurrence": {
            "baseline": r.mixed_concurrences[0],
            "experiment1": r.mixed_concurrences[1],
            "experiment2": r.mixed_concurrences[2],
        },
    });
    if let Some((seed, rows)) = sweep {
        doc["sweep"] = json!({
            "seed": seed,
            "count": rows.len(),
            "max_distance": rows.iter().map(|r| r.distance).fold(0.0, f64::max),
            "rows": rows.iter().map(|r| json!({"index": r.index, "distance": r.distance})).collect::<Vec<_>>(),
        });
    }
    doc
}

pub fn monte_carlo_document(experiment: Option<u8>, r: &MonteCarloReport) -> Value {
    json!({
        "experiment": experiment,
        "seed": r.seed,
        "trials": r.trials,
        "outcomes": r.outcomes.iter().map(|o| json!({
            "label": o.label,
            "count": o.count,
            "frequency": o.frequency,
            "probability": o.probability,
        })).collect::<Vec<_>>(),
        "max_abs_deviation": r.max_abs_deviation,
        "max_sigma": r.max_sigma,
    })
}

fn metric_text(m: &Metric) -> String {
    let s = StatementKind::Report(m.clone()).to_string();
    s.strip_prefix("report ").unwrap_or(&s).to_owned()
}

fn metric_value_document(v: &MetricValue) -> Value {
    match v {
        MetricValue::Probability(x)
        | MetricValue::Entropy(x)
        | MetricValue::Concurrence(x)
        | MetricValue::Correlator(x) => json!(x),
        MetricValue::Density(d) => density_document(d),
        MetricValue::Schmidt(c) => json!(c),
    }
}

fn branch_document(b: &Branch) -> Value {
    json!({
        "outcome": b.outcome,
        "probability": b.probability,
        "state": state_document(&b.state),
        "metrics": b.metrics.iter().map(|m| json!({
            "report": metric_text(&m.metric),
            "line": m.pos.line,
            "value": metric_value_document(&m.value),
        })).collect::<Vec<_>>(),
    })
}

pub fn run_document(out: &ProtocolOutput) -> Value {
    json!({
        "mode": "exhaustive",
        "branches": out.branches.iter().map(branch_document).collect::<Vec<_>>(),
        "report": out.heralded.as_ref().map(report_document),
    })
}

pub fn sampled_document(seed: u64, runs: &[(u64, Option<Branch>)]) -> Value {
    json!({
        "mode": "sampled",
        "seed": seed,
        "trials": runs.iter().map(|(trial, b)| {
            let mut doc = b.as_ref().map_or_else(|| json!({}), branch_document);
            let mut with_trial = serde_json::Map::new();
            with_trial.insert("trial".into(), json!(trial));
            if let Value::Object(fields) = &mut doc {
                with_trial.append(fields);
            }
            Value::Object(with_trial)
        }).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// CSV

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (None, Some(i)) => i.to_string(),
            _ => format_g17(n.as_f64().expect("finite number")),
        },
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Object(o) if o.is_empty() => "{}".into(),
        _ => unreachable!("containers are walked"),
    }
}

/// Leaf paths of a document in document order: object keys and array indices
/// joined by `.`, leaves rendered as in the CSV output.
pub fn flatten(doc: &Value) -> Vec<(String, String)> {
    fn walk(path: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let child = |k: &str| {
            if path.is_empty() {
                k.to_owned()
            } else {
                format!("{path}.{k}")
            }
        };
        match v {
            Value::Array(a) if !a.is_empty() => {
                for (i, x) in a.iter().enumerate() {
                    walk(&child(&i.to_string()), x, out);
                }
            }
            Value::Object(o) if !o.is_empty() => {
                for (k, x) in o {
                    walk(&child(k), x, out);
                }
            }
            _ => out.push((path.to_owned(), scalar_text(v))),
        }
    }
    let mut out = Vec::new();
    walk("", doc, &mut out);
    out
}

/// Long-format CSV with a `key,value` header.
pub fn to_csv(doc: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("writing to memory");
    for (k, v) in flatten(doc) {
        w.write_record([k, v]).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
}

// ---------------------------------------------------------------------------
// tables

fn table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        s.trim_end().to_owned() + "\n"
    };
    let mut out = line(headers);
    for row in rows {
        out += &line(row);
    }
    out
}

fn headers(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| (*s).to_owned()).collect()
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ")
}

fn matrix_lines(m: &ComplexMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| complex(m[(r, c)])).collect())
        .collect();
    let body = table(&vec![String::new(); m.cols()], &cells);
    // drop the empty header line and indent
    body.lines().skip(1).map(|l| format!("  {l}\n")).collect()
}

fn matrix_inline(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let cells: Vec<String> = (0..m.cols()).map(|c| complex(m[(r, c)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Rows and summary of a heralding report, without a title line.
pub fn report_table(r: &ExperimentReport) -> String {
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            vec![
                row.outcome.clone(),
                num(row.probability),
                row.heralded_name.clone(),
                list(&row.schmidt),
                num(row.entropy_bits),
                num(row.concurrence),
                num(row.correlators.zz),
                num(row.correlators.xx),
                num(row.correlators.yy),
            ]
        })
        .collect();
    let [p, q] = r.remote;
    let mut out = table(
        &headers(&[
            "outcome",
            "probability",
            "heralded",
            "schmidt",
            "entropy_bits",
            "concurrence",
            "zz",
            "xx",
            "yy",
        ]),
        &rows,
    );
    out += &format!("\nrho{p}{q}_avg:\n");
    out += &matrix_lines(r.summary.rho_avg.matrix());
    out += &format!(
        "frobenius_to_premeasurement: {}\nmixed_concurrence: {}\n",
        num(r.summary.frobenius_to_premeasurement),
        num(r.summary.mixed_concurrence)
    );
    out
}

fn decomposition_table(terms: &[BellTerm]) -> String {
    let rows: Vec<Vec<String>> = terms
        .iter()
        .map(|t| {
            vec![
                t.inner.label().to_owned(),
                t.remote.label().to_owned(),
                complex(t.coefficient),
            ]
        })
        .collect();
    format!(
        "initial state in Bell pairs\n{}",
        table(&headers(&["pair 2,3", "pair 1,4", "coefficient"]), &rows)
    )
}

fn no_signaling_table(r: &NoSignalingReport, sweep: Option<&(u64, Vec<SweepRow>)>) -> String {
    let mut out = String::from("reduced state of particles 1 and 4\n");
    for (name, d) in [
        ("baseline", &r.baseline),
        ("experiment1", &r.experiment1),
        ("experiment2", &r.experiment2),
    ] {
        out += &format!("{name}:\n{}", matrix_lines(d.matrix()));
    }
    out += "\n";
    out += &table(
        &headers(&["pair", "frobenius_distance"]),
        &[
            vec!["baseline/experiment1".into(), num(r.distances[0])],
            vec!["baseline/experiment2".into(), num(r.distances[1])],
            vec!["experiment1/experiment2".into(), num(r.distances[2])],
        ],
    );
    out += "\n";
    out += &table(
        &headers(&["state", "mixed_concurrence", "distance_to_maximally_mixed"]),
        &[
            ("baseline", &r.baseline, r.mixed_concurrences[0]),
            ("experiment1", &r.experiment1, r.mixed_concurrences[1]),
            ("experiment2", &r.experiment2, r.mixed_concurrences[2]),
        ]
        .map(|(n, d, c)| vec![n.to_owned(), num(c), num(distance_to_quarter(d))]),
    );
    if let Some((seed, rows)) = sweep {
        let max = rows.iter().map(|r| r.distance).fold(0.0, f64::max);
        out += &format!(
            "\nrandom-basis sweep: {} bases, seed {seed:#x}, max distance {}\n",
            rows.len(),
            num(max)
        );
    }
    out
}

fn monte_carlo_table(experiment: Option<u8>, r: &MonteCarloReport) -> String {
    let rows: Vec<Vec<String>> = r
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.label.clone(),
                o.count.to_string(),
                num(o.frequency),
                num(o.probability),
            ]
        })
        .collect();
    let title = match experiment {
        Some(id) => format!("experiment {id}, "),
        None => String::new(),
    };
    format!(
        "{title}{} trials, seed {:#x}\n{}max_abs_deviation: {}\nmax_sigma: {}\n",
        r.trials,
        r.seed,
        table(&headers(&["outcome", "count", "frequency", "probability"]), &rows),
        num(r.max_abs_deviation),
        num(r.max_sigma)
    )
}

fn metric_cell(v: &MetricValue) -> String {
    match v {
        MetricValue::Probability(x)
        | MetricValue::Entropy(x)
        | MetricValue::Concurrence(x)
        | MetricValue::Correlator(x) => num(*x),
        MetricValue::Density(d) => matrix_inline(d.matrix()),
        MetricValue::Schmidt(c) => list(c),
    }
}

fn branches_table(branches: &[(Option<u64>, &Branch)]) -> String {
    let mut names = Vec::new();
    if branches.iter().any(|(t, _)| t.is_some()) {
        names.push("trial".to_owned());
    }
    names.push("outcome".into());
    names.push("probability".into());
    if let Some((_, b)) = branches.first() {
        names.extend(b.metrics.iter().map(|m| metric_text(&m.metric)));
    }
    let rows: Vec<Vec<String>> = branches
        .iter()
        .map(|(t, b)| {
            let mut row = Vec::new();
            if let Some(t) = t {
                row.push(t.to_string());
            }
            row.push(b.outcome.clone());
            row.push(num(b.probability));
            row.extend(b.metrics.iter().map(|m| metric_cell(&m.value)));
            row
        })
        .collect();
    table(&names, &rows)
}

fn run_table(out: &ProtocolOutput) -> String {
    let mut text = String::new();
    if let Some(r) = &out.heralded {
        text += &report_table(r);
        text += "\n";
    }
    let rows: Vec<(Option<u64>, &Branch)> = out.branches.iter().map(|b| (None, b)).collect();
    text += "branches:\n";
    text += &branches_table(&rows);
    text
}

fn sampled_table(seed: u64, runs: &[(u64, Option<Branch>)]) -> String {
    let rows: Vec<(Option<u64>, &Branch)> = runs
        .iter()
        .filter_map(|(t, b)| b.as_ref().map(|b| (Some(*t), b)))
        .collect();
    format!("sampled runs, seed {seed:#x}\n{}", branches_table(&rows))
}
