//! Report model and its JSON, CSV and plain-text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use supercong_core::{CheckReport, Status};

use crate::config::{ConfigEcho, Format};
use crate::error::{CliError, CliResult};

/// Fixed CSV header.
pub const CSV_HEADER: [&str; 10] = [
    "family", "p", "n", "lambda", "modulus", "lhs", "rhs", "status", "asserted", "note",
];

/// One check, with big integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub family: String,
    pub p: Option<u64>,
    pub n: Option<u64>,
    pub lambda: Option<u64>,
    pub modulus: Option<String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub status: String,
    pub asserted: bool,
    pub note: String,
}

impl Row {
    pub fn status(&self) -> Option<Status> {
        Status::parse(&self.status)
    }

    pub fn is_asserted_fail(&self) -> bool {
        self.asserted && self.status() == Some(Status::Fail)
    }
}

impl From<&CheckReport> for Row {
    fn from(r: &CheckReport) -> Self {
        Row {
            family: r.family.clone(),
            p: r.p,
            n: r.n,
            lambda: r.lambda,
            modulus: r.modulus.as_ref().map(|m| m.to_string()),
            lhs: r.lhs.as_ref().map(|v| v.to_string()),
            rhs: r.rhs.as_ref().map(|v| v.to_string()),
            status: r.status.as_str().to_string(),
            asserted: r.asserted,
            note: r.note.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn tally(rows: &[Row]) -> Self {
        let mut s = Summary::default();
        for r in rows {
            match r.status() {
                Some(Status::Pass) => s.pass += 1,
                Some(Status::Fail) => s.fail += 1,
                _ => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub config: ConfigEcho,
    pub checks: Vec<Row>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl RunReport {
    pub fn new(config: ConfigEcho, checks: Vec<Row>) -> Self {
        let summary = Summary::tally(&checks);
        RunReport {
            version: None,
            timestamp: None,
            config,
            checks,
            summary,
            wall_time_ms: None,
        }
    }

    /// Rows that count against the exit code.
    pub fn asserted_failures(&self) -> usize {
        self.checks.iter().filter(|r| r.is_asserted_fail()).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.asserted_failures() == 0 {
            0
        } else {
            1
        }
    }
}

pub fn emit(report: &RunReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => emit_csv(&report.checks),
        Format::Human => Ok(emit_human(report)),
    }
}

pub fn emit_csv(rows: &[Row]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.family.clone(),
            opt(r.p),
            opt(r.n),
            opt(r.lambda),
            r.modulus.clone().unwrap_or_default(),
            r.lhs.clone().unwrap_or_default(),
            r.rhs.clone().unwrap_or_default(),
            r.status.clone(),
            r.asserted.to_string(),
            r.note.clone(),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Pool(format!("flushing CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

fn opt(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn parse_opt_u64(s: &str, line: usize) -> CliResult<Option<u64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| CliError::Config(format!("CSV line {line}: `{s}` is not an integer")))
}

fn opt_string(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

pub fn parse_csv(text: &str) -> CliResult<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CliError::Config(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let status = field(7).to_string();
        if Status::parse(&status).is_none() {
            return Err(CliError::Config(format!("CSV line {line}: bad status `{status}`")));
        }
        let asserted = match field(8) {
            "true" => true,
            "false" => false,
            other => {
                return Err(CliError::Config(format!("CSV line {line}: bad flag `{other}`")))
            }
        };
        rows.push(Row {
            family: field(0).to_string(),
            p: parse_opt_u64(field(1), line)?,
            n: parse_opt_u64(field(2), line)?,
            lambda: parse_opt_u64(field(3), line)?,
            modulus: opt_string(field(4)),
            lhs: opt_string(field(5)),
            rhs: opt_string(field(6)),
            status,
            asserted,
            note: field(9).to_string(),
        });
    }
    Ok(rows)
}

pub fn parse_json(text: &str) -> CliResult<RunReport> {
    Ok(serde_json::from_str(text)?)
}

/// Long values are elided in the text view; JSON and CSV keep them whole.
fn short(v: &str) -> String {
    const MAX: usize = 40;
    if v.len() <= MAX {
        v.to_string()
    } else {
        format!("{}...{} ({} chars)", &v[..16], &v[v.len() - 16..], v.len())
    }
}

pub fn emit_human(report: &RunReport) -> String {
    let mut out = String::new();
    for r in &report.checks {
        let mut params = Vec::new();
        if let Some(p) = r.p {
            params.push(format!("p={p}"));
        }
        if let Some(n) = r.n {
            params.push(format!("n={n}"));
        }
        if let Some(l) = r.lambda {
            params.push(format!("lambda={l}"));
        }
        let _ = write!(out, "{:<7} {:<18} {:<22}", r.status, r.family, params.join(" "));
        if let (Some(l), Some(rh)) = (&r.lhs, &r.rhs) {
            let _ = write!(out, " {} vs {}", short(l), short(rh));
            if let Some(m) = &r.modulus {
                let _ = write!(out, " (mod {m})");
            }
        }
        if !r.note.is_empty() {
            let _ = write!(out, "  [{}]", r.note);
        }
        if !r.asserted {
            out.push_str("  (informational)");
        }
        out.push('\n');
    }
    let s = report.summary;
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} skipped; {} asserted failures",
        report.checks.len(),
        s.pass,
        s.fail,
        s.skipped,
        report.asserted_failures()
    );
    if let Some(ms) = report.wall_time_ms {
        let _ = writeln!(out, "wall time {ms} ms");
    }
    out
}
