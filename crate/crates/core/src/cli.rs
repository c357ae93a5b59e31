//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on any operational failure (bad flags, I/O,
//! parse errors, failing identities, every evaluation point failing), 2 when
//! `--require-converged` is set and an estimate has not converged.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::approximant::{coeffs_closed_form, InversePowerApproximant};
use crate::asymptotics::{convergence_table, estimate_limits, ConvergenceTable};
use crate::corpus::{
    load_coefficient_file, save_coefficient_file, CoefficientFile, CorpusFunction, HypothesisRadius,
};
use crate::error::{Error, Result};
use crate::identities::{run_suite, SuiteRanges, SuiteReport};
use crate::scalar::{Scalar, MIN_FLOAT_PRECISION};
use crate::series::TaylorSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

const HIGHER_COEFFS_NOTE: &str =
    "q_k for k >= 2 depend on the center x0 and are not coefficients of the large-x expansion";

#[derive(Debug, Parser)]
#[command(
    name = "series-asymptote",
    version,
    about = "Large-x asymptotics from Taylor coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convergence table of q0_m, q1_m and limit estimates.
    Estimate(EstimateArgs),
    /// Coefficients of one approximant and its values at given points.
    Approximate(ApproximateArgs),
    /// Exhaustive check of the binomial identities.
    VerifyIdentities(IdentityArgs),
    /// Write a coefficient file for a corpus function.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Corpus selector, e.g. one-over-x, reciprocal-quarter, mobius-2-3-1-2.
    #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
    corpus: Option<String>,
    /// JSON coefficient file.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Expansion center for a corpus function.
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value = "1",
        conflicts_with = "coeffs"
    )]
    x0: String,
    /// Comma-separated parameters for parametric corpus selectors.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "coeffs")]
    params: Option<String>,
}

#[derive(Debug, Args)]
struct NumericArgs {
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Bits of float precision; ignored in exact mode.
    #[arg(long, default_value_t = MIN_FLOAT_PRECISION)]
    precision: usize,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Significant digits for decimal values in CSV output.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    digits: u32,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = 20)]
    m_max: usize,
    /// Convergence tolerance on the last two step sizes.
    #[arg(long, default_value = "1e-12")]
    tol: String,
    /// Exit with status 2 unless both q0 and q1 converged.
    #[arg(long)]
    require_converged: bool,
}

#[derive(Debug, Args)]
struct ApproximateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long)]
    m: usize,
    /// Evaluation points; repeat the flag or separate with commas.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    eval: Vec<String>,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 25)]
    m_max: i64,
    #[arg(long, default_value_t = 25)]
    k_max: i64,
    /// Upper bound for the third parameter (n or a).
    #[arg(long, default_value_t = 25)]
    aux_max: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    #[arg(long = "fn")]
    function: String,
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
    /// Number of coefficients.
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_FAILURE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => cmd_estimate(&a, stdout, stderr),
        Command::Approximate(a) => cmd_approximate(&a, stdout, stderr),
        Command::VerifyIdentities(a) => cmd_verify_identities(&a, stdout, stderr),
        Command::Corpus(a) => cmd_corpus(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

struct Source {
    series: TaylorSeries,
    function: Option<CorpusFunction>,
    /// Exact center requested for a corpus function.
    corpus_center: Option<Scalar>,
    label: String,
    hypothesis: Option<HypothesisRadius>,
}

fn resolve_source(src: &SourceArgs, numeric: &NumericArgs) -> Result<Source> {
    let precision = match numeric.mode {
        Mode::Exact => None,
        Mode::Float if numeric.precision < MIN_FLOAT_PRECISION => {
            return Err(crate::scalar::ScalarError::PrecisionTooLow(numeric.precision).into());
        }
        Mode::Float => Some(numeric.precision),
    };
    let mut source = if let Some(path) = &src.coeffs {
        let file = load_coefficient_file(path, precision.unwrap_or(MIN_FLOAT_PRECISION))?;
        if precision.is_none() && !file.series.is_exact() {
            return Err(Error::Field {
                path: path.clone(),
                field: "exact".into(),
                message: "file holds float coefficients; pass --mode float".into(),
            });
        }
        Source {
            series: file.series,
            function: None,
            corpus_center: None,
            label: format!("file {}", path.display()),
            hypothesis: file.hypothesis_radius,
        }
    } else {
        let name = src
            .corpus
            .as_deref()
            .expect("clap requires --corpus or --coeffs");
        let f = CorpusFunction::from_selector(name, src.params.as_deref())?;
        let x0 = Scalar::parse_exact(&src.x0)?;
        let series = f.taylor_coeffs(&x0, 1)?;
        let x0 = series.center().clone();
        Source {
            label: format!("corpus {name} at x0 = {}", series.center()),
            hypothesis: Some(f.hypothesis_radius(&x0)),
            series,
            function: Some(f),
            corpus_center: Some(x0),
        }
    };
    if let Some(p) = precision {
        source.series = source.series.to_float(p)?;
    }
    Ok(source)
}

impl Source {
    /// Ensures `n` coefficients are available, generating more for corpus
    /// functions.
    fn with_terms(&mut self, n: usize) -> Result<()> {
        if let (Some(f), Some(x0)) = (&self.function, &self.corpus_center) {
            let mut series = f.taylor_coeffs(x0, n)?;
            if let Some(p) = self.series.float_precision() {
                series = series.to_float(p)?;
            }
            self.series = series;
        }
        self.series.prefix(n - 1).map(|_| ())
    }

    fn mode(&self) -> (&'static str, Option<usize>) {
        if self.series.is_exact() {
            ("exact", None)
        } else {
            ("float", self.series.float_precision())
        }
    }
}

struct Renderer {
    format: Format,
    digits: usize,
}

impl Renderer {
    fn new(out: &OutputArgs) -> Self {
        Renderer {
            format: out.format,
            digits: out.digits as usize,
        }
    }

    fn scalar(&self, s: &Scalar) -> String {
        match self.format {
            Format::Csv => s.to_decimal_string(self.digits),
            Format::Json => s.to_plain_string(),
        }
    }

    fn opt(&self, s: Option<&Scalar>) -> Option<String> {
        s.map(|v| self.scalar(v))
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn warn(stderr: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

#[derive(Serialize)]
struct HypothesisJson {
    radius: String,
    satisfied: bool,
}

fn hypothesis_json(h: Option<&HypothesisRadius>) -> Option<HypothesisJson> {
    h.map(|r| HypothesisJson {
        radius: r.to_string(),
        satisfied: r.satisfied(),
    })
}

#[derive(Serialize)]
struct RowJson {
    m: usize,
    q0_m: String,
    q1_m: Option<String>,
    delta0: Option<String>,
    delta1: Option<String>,
}

#[derive(Serialize)]
struct SummaryJson {
    q0: String,
    q1: Option<String>,
    error_indicator_q0: Option<String>,
    error_indicator_q1: Option<String>,
    converged_q0: bool,
    converged_q1: bool,
    m_used: usize,
}

#[derive(Serialize)]
struct EstimateJson {
    source: String,
    mode: &'static str,
    precision: Option<usize>,
    tol: String,
    hypothesis: Option<HypothesisJson>,
    rows: Vec<RowJson>,
    summary: SummaryJson,
    warnings: Vec<String>,
}

fn summarize(table: &ConvergenceTable, tol: &Scalar, r: &Renderer) -> Result<SummaryJson> {
    match estimate_limits(table, tol) {
        Ok(e) => Ok(SummaryJson {
            q0: r.scalar(&e.q0),
            q1: Some(r.scalar(&e.q1)),
            error_indicator_q0: Some(r.scalar(&e.error_indicator_q0)),
            error_indicator_q1: Some(r.scalar(&e.error_indicator_q1)),
            converged_q0: e.converged_q0,
            converged_q1: e.converged_q1,
            m_used: e.m_used,
        }),
        Err(Error::TableTooShort { .. }) => {
            let last = table.last();
            Ok(SummaryJson {
                q0: r.scalar(&last.q0),
                q1: r.opt(last.q1.as_ref()),
                error_indicator_q0: r.opt(last.delta0.as_ref()),
                error_indicator_q1: r.opt(last.delta1.as_ref()),
                converged_q0: false,
                converged_q1: false,
                m_used: last.m,
            })
        }
        Err(e) => Err(e),
    }
}

fn csv_opt(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("")
}

fn cmd_estimate(a: &EstimateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let tol = Scalar::parse_exact(&a.tol)?;
    let mut source = resolve_source(&a.source, &a.numeric)?;
    source.with_terms(a.m_max + 1)?;
    let table = convergence_table(&source.series, a.m_max)?;
    let r = Renderer::new(&a.output);
    let summary = summarize(&table, &tol, &r)?;
    let warnings: Vec<String> = table
        .warning()
        .map(ToString::to_string)
        .into_iter()
        .collect();
    let (mode, precision) = source.mode();
    let rows: Vec<RowJson> = table
        .rows()
        .iter()
        .map(|row| RowJson {
            m: row.m,
            q0_m: r.scalar(&row.q0),
            q1_m: r.opt(row.q1.as_ref()),
            delta0: r.opt(row.delta0.as_ref()),
            delta1: r.opt(row.delta1.as_ref()),
        })
        .collect();
    let converged = summary.converged_q0 && summary.converged_q1;
    let text = match a.output.format {
        Format::Json => {
            let doc = EstimateJson {
                source: source.label.clone(),
                mode,
                precision,
                tol: tol.to_plain_string(),
                hypothesis: hypothesis_json(source.hypothesis.as_ref()),
                rows,
                summary,
                warnings: warnings.clone(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("m,q0_m,q1_m,delta0,delta1\n");
            for row in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    row.m,
                    row.q0_m,
                    csv_opt(&row.q1_m),
                    csv_opt(&row.delta0),
                    csv_opt(&row.delta1)
                );
            }
            let _ = writeln!(s, "# source: {}", source.label);
            match precision {
                Some(p) => {
                    let _ = writeln!(s, "# mode: {mode}, precision {p} bits");
                }
                None => {
                    let _ = writeln!(s, "# mode: {mode}");
                }
            }
            if let Some(h) = &source.hypothesis {
                let _ = writeln!(s, "# hypothesis: radius {h}, satisfied {}", h.satisfied());
            }
            let _ = writeln!(
                s,
                "# summary: q0 = {}, q1 = {}, error_q0 = {}, error_q1 = {}, converged_q0 = {}, converged_q1 = {}, m_used = {}, tol = {}",
                summary.q0,
                csv_opt(&summary.q1),
                csv_opt(&summary.error_indicator_q0),
                csv_opt(&summary.error_indicator_q1),
                summary.converged_q0,
                summary.converged_q1,
                summary.m_used,
                tol.to_decimal_string(r.digits),
            );
            for w in &warnings {
                let _ = writeln!(s, "# warning: {w}");
            }
            s
        }
    };
    emit(a.output.out.as_deref(), &text, stdout)?;
    warn(stderr, &warnings);
    Ok(if a.require_converged && !converged {
        EXIT_NOT_CONVERGED
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct EvalJson {
    x: String,
    value: Option<String>,
    exact_value: Option<String>,
    residual: Option<String>,
    error: Option<String>,
}

#[derive(Serialize)]
struct ApproximateJson {
    source: String,
    mode: &'static str,
    precision: Option<usize>,
    m: usize,
    coefficients: Vec<String>,
    note: &'static str,
    evaluations: Vec<EvalJson>,
    warnings: Vec<String>,
}

fn evaluate_point(
    approx: &InversePowerApproximant,
    f: Option<&CorpusFunction>,
    raw: &str,
    r: &Renderer,
) -> EvalJson {
    let attempt = || -> Result<(Scalar, Option<(Scalar, Scalar)>)> {
        let x = Scalar::parse_exact(raw)?;
        let value = approx.evaluate(&x)?;
        let truth = match f {
            Some(f) => {
                let fx = f.evaluate(&x)?;
                let residual = &fx - &value;
                Some((fx, residual))
            }
            None => None,
        };
        Ok((value, truth))
    };
    match attempt() {
        Ok((value, truth)) => EvalJson {
            x: raw.trim().to_string(),
            value: Some(r.scalar(&value)),
            exact_value: truth.as_ref().map(|(fx, _)| r.scalar(fx)),
            residual: truth.as_ref().map(|(_, res)| r.scalar(res)),
            error: None,
        },
        Err(e) => EvalJson {
            x: raw.trim().to_string(),
            value: None,
            exact_value: None,
            residual: None,
            error: Some(e.to_string()),
        },
    }
}

fn cmd_approximate(
    a: &ApproximateArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let mut source = resolve_source(&a.source, &a.numeric)?;
    source.with_terms(a.m + 1)?;
    let approx = coeffs_closed_form(&source.series, a.m)?;
    let r = Renderer::new(&a.output);
    let evaluations: Vec<EvalJson> = a
        .eval
        .iter()
        .map(|x| evaluate_point(&approx, source.function.as_ref(), x, &r))
        .collect();
    let warnings: Vec<String> = approx
        .warning()
        .map(ToString::to_string)
        .into_iter()
        .collect();
    let (mode, precision) = source.mode();
    let coefficients: Vec<String> = approx.coeffs().iter().map(|q| r.scalar(q)).collect();
    let text = match a.output.format {
        Format::Json => {
            let doc = ApproximateJson {
                source: source.label.clone(),
                mode,
                precision,
                m: a.m,
                coefficients,
                note: HIGHER_COEFFS_NOTE,
                evaluations,
                warnings: warnings.clone(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            s.push('\n');
            (s, doc.evaluations)
        }
        Format::Csv => {
            let mut s = String::from("record,index,value,f,residual,error\n");
            for (k, q) in coefficients.iter().enumerate() {
                let _ = writeln!(s, "coeff,{k},{q},,,");
            }
            for e in &evaluations {
                let _ = writeln!(
                    s,
                    "eval,{},{},{},{},{}",
                    e.x,
                    csv_opt(&e.value),
                    csv_opt(&e.exact_value),
                    csv_opt(&e.residual),
                    e.error.as_deref().map(csv_quote).unwrap_or_default()
                );
            }
            let _ = writeln!(s, "# source: {}", source.label);
            let _ = writeln!(s, "# note: {HIGHER_COEFFS_NOTE}");
            for w in &warnings {
                let _ = writeln!(s, "# warning: {w}");
            }
            (s, evaluations)
        }
    };
    let (text, evaluations) = text;
    emit(a.output.out.as_deref(), &text, stdout)?;
    warn(stderr, &warnings);
    for e in &evaluations {
        if let Some(err) = &e.error {
            let _ = writeln!(stderr, "error: x = {}: {err}", e.x);
        }
    }
    let all_failed = !evaluations.is_empty() && evaluations.iter().all(|e| e.error.is_some());
    Ok(if all_failed { EXIT_FAILURE } else { EXIT_OK })
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn suite_csv(report: &SuiteReport) -> String {
    let mut s = String::from("identity,evaluated,passed,failed,skipped\n");
    for (id, c) in &report.per_identity {
        let _ = writeln!(
            s,
            "{id},{},{},{},{}",
            c.evaluated, c.passed, c.failed, c.skipped
        );
    }
    let _ = writeln!(
        s,
        "# total {}, passed {}, failed {}, skipped {}",
        report.total, report.passed, report.failed, report.skipped
    );
    for f in &report.failures {
        let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            s,
            "# failure: {} {} lhs={} rhs={}",
            f.identity_id,
            params.join(" "),
            f.lhs,
            f.rhs
        );
    }
    s
}

fn cmd_verify_identities(
    a: &IdentityArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let report = run_suite(&SuiteRanges {
        m: 0..=a.m_max,
        k: 0..=a.k_max,
        aux: 0..=a.aux_max,
    });
    let text = match a.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Csv => suite_csv(&report),
    };
    emit(a.out.as_deref(), &text, stdout)?;
    if report.all_passed() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(stderr, "error: {} identity cases failed", report.failed);
        Ok(EXIT_FAILURE)
    }
}

fn cmd_corpus(a: &CorpusArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = CorpusFunction::from_selector(&a.function, a.params.as_deref())?;
    let x0 = Scalar::parse_exact(&a.x0)?;
    let file = CoefficientFile::from_corpus(&f, &x0, a.n)?;
    match &a.out {
        Some(path) => save_coefficient_file(&file, path)?,
        None => emit(None, &file.to_json(), stdout)?,
    }
    Ok(EXIT_OK)
}
