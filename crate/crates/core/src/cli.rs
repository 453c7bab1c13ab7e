//! Command-line front end. Every command writes deterministic text: sorted
//! JSON keys, big integers as decimal strings, reals with ten decimals.

use std::ffi::OsString;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::curves::{check_logderivative, uniformizer_series, CaseId};
use crate::diophantine::{self, Certificate, CertifyParams, Summary};
use crate::eisenstein;
use crate::error::{Error, Result};
use crate::expansion::{sequences, SequenceTable};
use crate::oracle::{evaluate, OracleParams, OracleReport, OracleTarget, DEFAULT_TARGET_BITS};
use crate::qseries::QSeries;
use crate::recurrence::{self, RecurrenceSpec};

/// Environment variable overriding the largest accepted row count.
pub const TERM_CAP_VAR: &str = "PADIC_APERY_TERM_CAP";
pub const DEFAULT_TERM_CAP: usize = 64;
/// Largest q-precision accepted by `series`.
pub const SERIES_PREC_CAP: usize = 512;

#[derive(Debug, Parser)]
#[command(name = "padic-apery", version, about = "Apery-like approximants to p-adic zeta and Catalan values")]
pub struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print q-expansion coefficients of a modular form.
    Series(SeriesArgs),
    /// Print the sequences a_n, b_n and approximants p_n/q_n.
    Sequences(SequencesArgs),
    /// Emit per-row irrationality certificates and a verdict.
    Certify(CertifyArgs),
    /// Compute a reference p-adic value.
    Oracle(OracleArgs),
    /// Verify or fit a P-finite recurrence.
    Recurrence(RecurrenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Estar,
    E,
    Evil,
    Eprime,
    F,
    Fprime,
    Uniformizer,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(long)]
    pub case: String,
    #[arg(short, long, default_value_t = 1)]
    pub k: u32,
}

impl CaseArgs {
    fn case_id(&self) -> Result<CaseId> {
        CaseId::parse(&self.case, self.k)
    }
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub form: Form,
    #[arg(long)]
    pub case: Option<String>,
    #[arg(short, long, default_value_t = 1)]
    pub k: u32,
    #[arg(long)]
    pub weight: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 8)]
    pub prec: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SequencesArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(short = 'n', long = "count", default_value_t = 25)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(short = 'n', long = "count", default_value_t = 25)]
    pub count: usize,
    /// Oracle precision in p-adic digits.
    #[arg(long, default_value_t = DEFAULT_TARGET_BITS)]
    pub bits: i64,
    /// Inclusive row range, written `A..B`.
    #[arg(long, default_value = "3..12", value_parser = parse_window)]
    pub window: RangeInclusive<usize>,
    #[arg(long, default_value_t = diophantine::DEFAULT_THETA_REQUIRED)]
    pub theta_required: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Zeta,
    Catalan,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub target: Target,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(short = 'n', long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = DEFAULT_TARGET_BITS)]
    pub bits: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Action {
    Verify,
    Fit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    pub action: Action,
    #[arg(short = 'n', long = "count", default_value_t = 26)]
    pub count: usize,
    #[arg(long, value_enum)]
    pub sequence: Vec<Which>,
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
}

fn parse_window(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok(a..=b)
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::InsufficientData(_) => 2,
        _ => 1,
    }
}

fn term_cap() -> Result<usize> {
    match std::env::var(TERM_CAP_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::invalid(format!("{TERM_CAP_VAR}='{v}' is not a count"))),
        Err(_) => Ok(DEFAULT_TERM_CAP),
    }
}

fn check_count(count: usize) -> Result<()> {
    let cap = term_cap()?;
    if count > cap {
        return Err(Error::invalid(format!("{count} rows exceeds the cap {cap} (set {TERM_CAP_VAR})")));
    }
    Ok(())
}

/// Parse arguments and run one command without touching the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match &cli.command {
        Command::Series(a) => cmd_series(a),
        Command::Sequences(a) => cmd_sequences(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Recurrence(a) => cmd_recurrence(a),
    };
    match result {
        Ok(text) => match &cli.output {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: cannot write {}: {e}\n", path.display()),
                },
            },
            None => Outcome { code: 0, stdout: text, stderr: String::new() },
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn real(x: f64) -> Box<RawValue> {
    let s = if x.is_finite() { format!("{x:.10}") } else { "null".to_string() };
    RawValue::from_string(s).expect("decimal literal")
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn series_for(a: &SeriesArgs) -> Result<QSeries> {
    let case = a.case.as_deref().map(|c| CaseId::parse(c, a.k)).transpose()?;
    let p = a.p.or(case.map(CaseId::prime));
    let need_p = || p.ok_or_else(|| Error::invalid("--p or --case is required for this form"));
    let weight = |default: Option<u64>| {
        a.weight
            .or(default)
            .ok_or_else(|| Error::invalid("--weight is required for this form"))
    };
    let prec = a.prec;
    match a.form {
        Form::Estar => eisenstein::series_e_star(need_p()?, weight(Some(2))?, prec),
        Form::E => eisenstein::series_e(weight(None)?, prec),
        Form::Evil => eisenstein::series_evil(need_p()?, weight(None)?, prec),
        Form::Eprime => {
            let default = case.and_then(CaseId::k).map(|k| 2 * k as u64);
            eisenstein::series_e_prime(need_p()?, weight(default)?, prec)
        }
        Form::F => eisenstein::series_f(weight(Some(1))?, prec),
        Form::Fprime => Ok(eisenstein::series_f_prime(prec)),
        Form::Uniformizer => {
            let case = case.ok_or_else(|| Error::invalid("--case is required for the uniformizer"))?;
            uniformizer_series(case, prec)
        }
    }
}

pub fn cmd_series(a: &SeriesArgs) -> Result<String> {
    if a.prec == 0 || a.prec > SERIES_PREC_CAP {
        return Err(Error::invalid(format!("--prec must lie in 1..={SERIES_PREC_CAP}")));
    }
    let s = series_for(a)?;
    let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
    Ok(match a.format {
        Format::Json => json_line(&coeffs),
        Format::Csv => {
            let mut out = String::from("n,coefficient\n");
            for (i, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("{i},{c}\n"));
            }
            out
        }
        Format::Plain => format!("{}\n", coeffs.join(", ")),
    })
}

#[derive(Serialize)]
struct SequenceRecord {
    a_den: String,
    a_num: String,
    b: String,
    n: usize,
    p_n: Option<String>,
    q_n: Option<String>,
}

fn sequence_records(t: &SequenceTable) -> Vec<SequenceRecord> {
    t.rows
        .iter()
        .map(|r| SequenceRecord {
            a_den: r.a.denom().to_string(),
            a_num: r.a.numer().to_string(),
            b: r.b.numer().to_string(),
            n: r.n,
            p_n: r.p_n().map(BigInt::to_string),
            q_n: r.q_n().map(BigInt::to_string),
        })
        .collect()
}

pub fn cmd_sequences(a: &SequencesArgs) -> Result<String> {
    check_count(a.count)?;
    let case = a.case.case_id()?;
    let table = sequences(case, a.count)?;
    let records = sequence_records(&table);
    Ok(match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "a_num", "a_den", "b", "p_n", "q_n"])
                .expect("in-memory write");
            for r in &records {
                w.write_record([
                    r.n.to_string().as_str(),
                    &r.a_num,
                    &r.a_den,
                    &r.b,
                    r.p_n.as_deref().unwrap_or(""),
                    r.q_n.as_deref().unwrap_or(""),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
        }
        Format::Json => json_line(&records),
        Format::Plain => {
            let mut out = String::new();
            for r in &table.rows {
                let approx = r.approximant.as_ref().map_or("-".to_string(), |x| x.to_string());
                out.push_str(&format!("{} {} {} {}\n", r.n, r.a, r.b, approx));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct CertificateRecord {
    case: String,
    certified: bool,
    implied_exponent: Box<RawValue>,
    log_max_size: Box<RawValue>,
    n: usize,
    p_n: String,
    q_n: String,
    sign: i32,
    theta_closed: Box<RawValue>,
    valuation_gap: i64,
}

#[derive(Serialize)]
struct SummaryRecord {
    agreement_exponent: i64,
    case: String,
    failed: usize,
    max_theta: Option<Box<RawValue>>,
    passed: usize,
    summary: bool,
    theta_closed: Box<RawValue>,
    theta_required: Box<RawValue>,
    uncertified: usize,
    verdict: String,
}

fn case_label(case: CaseId) -> String {
    match case.k() {
        Some(k) => format!("{}:{k}", case.name()),
        None => case.name().to_string(),
    }
}

fn certificate_record(c: &Certificate, theta: f64) -> CertificateRecord {
    CertificateRecord {
        case: case_label(c.case_id),
        certified: c.status == diophantine::RowStatus::Pass,
        implied_exponent: real(c.implied_exponent),
        log_max_size: real(c.log_max_size),
        n: c.n,
        p_n: c.p_n.to_string(),
        q_n: c.q_n.to_string(),
        sign: c.sign,
        theta_closed: real(theta),
        valuation_gap: c.valuation_gap,
    }
}

fn summary_record(s: &Summary, agreement: i64) -> SummaryRecord {
    SummaryRecord {
        agreement_exponent: agreement,
        case: case_label(s.case_id),
        failed: s.failed,
        max_theta: s.max_theta.map(real),
        passed: s.passed,
        summary: true,
        theta_closed: real(s.theta_closed),
        theta_required: real(s.theta_required),
        uncertified: s.uncertified,
        verdict: s.verdict.to_string(),
    }
}

pub fn cmd_certify(a: &CertifyArgs) -> Result<String> {
    check_count(a.count)?;
    let case = a.case.case_id()?;
    if !a.theta_required.is_finite() || a.theta_required <= 0.0 {
        return Err(Error::invalid("--theta-required must be positive"));
    }
    // canary: the uniformizer must still match its Eisenstein series
    check_logderivative(case, 64)?;
    let params = CertifyParams {
        count: a.count,
        oracle: OracleParams::with_target(a.bits),
        theta_required: a.theta_required,
        window: a.window.clone(),
    };
    let report = diophantine::certify(case, &params)?;
    let mut out = String::new();
    for c in &report.certificates {
        out.push_str(&json_line(&certificate_record(c, report.summary.theta_closed)));
    }
    out.push_str(&json_line(&summary_record(&report.summary, report.eta.agreement_exponent)));
    Ok(out)
}

#[derive(Serialize)]
struct OracleRecord {
    agreement_exponent: i64,
    digits: Vec<(i64, u64)>,
    direct_agreement_exponent: i64,
    p: u64,
    reached_target: bool,
    representative: String,
    target: String,
}

fn oracle_record(r: &OracleReport) -> OracleRecord {
    OracleRecord {
        agreement_exponent: r.value.agreement_exponent,
        digits: r.value.digits(),
        direct_agreement_exponent: r.direct.value.agreement_exponent,
        p: r.value.p,
        reached_target: r.reached_target,
        representative: r.value.representative.to_string(),
        target: match r.target {
            OracleTarget::Zeta { p, n } => format!("zeta_{p}({})", 1 + 2 * n),
            OracleTarget::Catalan => "L_2(2,chi_4)".to_string(),
        },
    }
}

pub fn cmd_oracle(a: &OracleArgs) -> Result<String> {
    let target = match a.target {
        Target::Zeta => OracleTarget::Zeta { p: a.p, n: a.n },
        Target::Catalan => OracleTarget::Catalan,
    };
    let report = evaluate(target, &OracleParams::with_target(a.bits))?.require_target(a.bits)?;
    let rec = oracle_record(&report);
    Ok(match a.format {
        Format::Json => json_line(&rec),
        Format::Csv => {
            let mut out = String::from("exponent,digit\n");
            for (e, d) in &rec.digits {
                out.push_str(&format!("{e},{d}\n"));
            }
            out
        }
        Format::Plain => {
            let exps: Vec<String> = rec.digits.iter().map(|(e, d)| format!("{d}*{}^{e}", rec.p)).collect();
            format!(
                "target {}\nrepresentative {}\nagreement_exponent {}\ndigits {}\n",
                rec.target,
                rec.representative,
                rec.agreement_exponent,
                exps.join(" + ")
            )
        }
    })
}

#[derive(Serialize)]
struct VerifyRecord {
    end: usize,
    recurrence: String,
    sequence: String,
    start: usize,
    violations: Vec<recurrence::Violation>,
}

#[derive(Serialize)]
struct FitRecord {
    degree: usize,
    found: bool,
    order: usize,
    polys: Vec<Vec<String>>,
    recurrence: Option<String>,
    sequence: String,
    terms: usize,
}

fn known_recurrence(case: CaseId) -> Result<RecurrenceSpec> {
    match case {
        CaseId::CatalanP2 => Ok(recurrence::catalan_recurrence()),
        other => Err(Error::invalid(format!("no reference recurrence is known for {other}; use fit"))),
    }
}

pub fn cmd_recurrence(a: &RecurrenceArgs) -> Result<String> {
    check_count(a.count)?;
    let case = a.case.case_id()?;
    let table = sequences(case, a.count)?;
    let which = if a.sequence.is_empty() {
        vec![Which::A, Which::B]
    } else {
        a.sequence.clone()
    };
    let mut out = String::new();
    for w in which {
        let (name, seq) = match w {
            Which::A => ("a", table.a()),
            Which::B => ("b", table.b()),
        };
        match a.action {
            Action::Verify => {
                let spec = known_recurrence(case)?;
                let (start, end) = (2, a.count.saturating_sub(2));
                let violations = recurrence::verify(&spec, &seq, start, end)?;
                out.push_str(&json_line(&VerifyRecord {
                    end,
                    recurrence: spec.to_string(),
                    sequence: name.into(),
                    start,
                    violations,
                }));
            }
            Action::Fit => {
                let found = recurrence::fit(&seq, a.order, a.degree)?;
                out.push_str(&json_line(&FitRecord {
                    degree: a.degree,
                    found: found.is_some(),
                    order: a.order,
                    polys: found.as_ref().map_or(Vec::new(), |s| {
                        s.polys.iter().map(|p| p.iter().map(BigInt::to_string).collect()).collect()
                    }),
                    recurrence: found.as_ref().map(ToString::to_string),
                    sequence: name.into(),
                    terms: seq.len(),
                }));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let mut full = vec!["padic-apery"];
        full.extend_from_slice(args);
        let o = run(full);
        assert_eq!(o.code, 0, "{}", o.stderr);
        o.stdout
    }

    fn code(args: &[&str]) -> Outcome {
        let mut full = vec!["padic-apery"];
        full.extend_from_slice(args);
        run(full)
    }

    #[test]
    fn series_examples() {
        assert_eq!(
            run_ok(&["series", "--case", "zeta-p2", "--form", "estar", "--weight", "2", "--prec", "4"]),
            "1/24, 1, 1, 4\n"
        );
        assert_eq!(run_ok(&["series", "--form", "evil", "--weight", "4", "--p", "2", "--prec", "3"]), "0, 1, 8\n");
        let bad = code(&["series", "--form", "bogus"]);
        assert_eq!(bad.code, 2);
        assert!(bad.stdout.is_empty());
        assert_eq!(code(&["series", "--form", "estar", "--weight", "3", "--p", "2"]).code, 2);
        assert_eq!(code(&["series", "--form", "uniformizer"]).code, 2);
    }

    #[test]
    fn sequences_examples() {
        let csv = run_ok(&["sequences", "--case", "catalan-p2", "-n", "7"]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,a_num,a_den,b,p_n,q_n");
        assert_eq!(lines[7].split(',').nth(3), Some("464368"));
        let z = run_ok(&["sequences", "--case", "zeta-p2", "-k", "1", "-n", "7"]);
        assert_eq!(z.lines().nth(3).unwrap().split(',').nth(3), Some("-552"));
        assert_eq!(run_ok(&["sequences", "--case", "zeta-p2", "-n", "0"]), "n,a_num,a_den,b,p_n,q_n\n");
        assert_eq!(code(&["sequences", "--case", "zeta-p2", "-n", "65"]).code, 2);
        assert_eq!(code(&["sequences", "--case", "zeta-p7", "-n", "3"]).code, 2);
        let json = run_ok(&["sequences", "--case", "zeta-p2", "-n", "2", "--format", "json"]);
        assert!(json.starts_with("[{\"a_den\":\"1\",\"a_num\":\"0\",\"b\":\"1\",\"n\":0,"));
    }

    #[test]
    fn certify_output_is_sorted_and_stable() {
        let args = ["certify", "--case", "catalan-p2", "--window", "3..6"];
        let out = run_ok(&args);
        assert_eq!(out, run_ok(&args));
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 5);
        let row: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
        let keys: Vec<&String> = row.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(lines[3].contains("\"theta_closed\":1.1618804316,"));
        assert!(lines[3].contains("\"p_n\":\"783269\""));
        assert!(lines[4].contains("\"verdict\":\"WITNESS_PASS\""));
        assert!(out.ends_with('\n'));
    }

    #[test]
    fn certify_negative_case_exits_zero() {
        let out = run_ok(&["certify", "--case", "zeta-p2", "-k", "2"]);
        let last = out.lines().last().unwrap();
        assert!(last.contains("\"verdict\":\"WITNESS_FAIL\""));
        assert!(last.contains("\"theta_closed\":0.9081638111"));
        assert_eq!(code(&["certify", "--case", "zeta-p2", "--bits", "41"]).code, 2);
        assert_eq!(code(&["certify", "--case", "zeta-p2", "--window", "9..3"]).code, 2);
    }

    #[test]
    fn oracle_and_recurrence_commands() {
        let out = run_ok(&["oracle", "--target", "catalan", "--bits", "35"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let exps: Vec<i64> = v["digits"].as_array().unwrap()[..10]
            .iter()
            .map(|d| d[0].as_i64().unwrap())
            .collect();
        assert_eq!(exps, vec![-1, 0, 2, 3, 5, 6, 7, 9, 13, 18]);
        let out = run_ok(&["recurrence", "--case", "catalan-p2", "verify"]);
        for line in out.lines() {
            assert!(line.contains("\"violations\":[]"), "{line}");
        }
        let out = run_ok(&["recurrence", "--case", "catalan-p2", "fit", "--sequence", "b"]);
        assert!(out.contains(&recurrence::catalan_recurrence().to_string()));
        assert_eq!(code(&["recurrence", "--case", "zeta-p2", "verify"]).code, 2);
        assert_eq!(code(&["oracle", "--target", "zeta", "--p", "4"]).code, 2);
    }
}
