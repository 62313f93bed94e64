//! Verification reports and their JSON, CSV and text renderings.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use cherednik_core::dunkl::Status;

/// One named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: Value,
    pub status: Status,
    pub witness: Option<String>,
    pub wall_ms: Option<f64>,
}

/// Everything a command emits.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub p: u32,
    pub n: usize,
    pub c: String,
    pub field: String,
    pub seed: u64,
    pub d_max: Option<u32>,
    pub records: Vec<CheckRecord>,
    pub verdict: Status,
    pub details: serde_json::Map<String, Value>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }
}

/// Collects records, timing each one unless timings are disabled.
pub struct Recorder {
    timing: bool,
    pub records: Vec<CheckRecord>,
    pub details: serde_json::Map<String, Value>,
}

impl Recorder {
    pub fn new(timing: bool) -> Self {
        Self {
            timing,
            records: Vec::new(),
            details: serde_json::Map::new(),
        }
    }

    /// Run `check`, which returns pass/fail and an optional witness.
    pub fn check<F>(&mut self, name: &str, parameters: Value, check: F)
    where
        F: FnOnce() -> (bool, Option<String>),
    {
        let start = Instant::now();
        let (ok, witness) = check();
        let wall_ms = self
            .timing
            .then(|| (start.elapsed().as_secs_f64() * 1e6).round() / 1e3);
        self.records.push(CheckRecord {
            name: name.to_string(),
            parameters,
            status: if ok { Status::Pass } else { Status::Fail },
            witness: if ok { None } else { witness },
            wall_ms,
        });
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable detail"));
    }

    pub fn finish(self, header: Header) -> VerificationReport {
        let verdict = if self.records.iter().all(|r| r.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            command: header.command,
            p: header.p,
            n: header.n,
            c: header.c,
            field: header.field,
            seed: header.seed,
            d_max: header.d_max,
            records: self.records,
            verdict,
            details: self.details,
        }
    }
}

pub struct Header {
    pub command: String,
    pub p: u32,
    pub n: usize,
    pub c: String,
    pub field: String,
    pub seed: u64,
    pub d_max: Option<u32>,
}

pub const RECORD_CSV_HEADER: [&str; 5] = ["name", "parameters", "status", "witness", "wall_ms"];

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

pub fn to_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn to_csv(report: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_CSV_HEADER).expect("in-memory write");
    for r in &report.records {
        w.write_record([
            r.name.clone(),
            r.parameters.to_string(),
            status_str(r.status).to_string(),
            r.witness.clone().unwrap_or_default(),
            r.wall_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn to_text(report: &VerificationReport, extra: &[String]) -> String {
    let mut out = format!(
        "{} p={} n={} c={} field={} seed={}\n",
        report.command, report.p, report.n, report.c, report.field, report.seed
    );
    for line in extra {
        out.push_str(line);
        out.push('\n');
    }
    for r in &report.records {
        out.push_str(&format!("{:<4}  {}", status_str(r.status), r.name));
        if r.parameters.as_object().is_some_and(|o| !o.is_empty()) {
            out.push_str(&format!("  {}", r.parameters));
        }
        if let Some(t) = r.wall_ms {
            out.push_str(&format!("  ({t:.1} ms)"));
        }
        if let Some(w) = &r.witness {
            out.push_str(&format!("\n      witness: {w}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("verdict: {}\n", status_str(report.verdict)));
    out
}
