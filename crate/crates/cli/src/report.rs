//! Run reports: assembly, digests, text rendering and offline verification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use dgw_core::checkers::{verify_generation_certificate, GenerationCertificate, Verdict};

use crate::document::{certificate_document, parse_value, Workspace};
use crate::tasks::{run_task, selected, Detail, RunOptions};

pub const FORMAT: &str = "dgw-report/1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the self-contained certificate document.
pub fn certificate_hash(ws: &Workspace, name: &str, cert: &GenerationCertificate) -> String {
    sha256_hex(canonical(&certificate_document(ws, name, cert)).as_bytes())
}

fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub index: usize,
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub verdict: Verdict,
    pub exit: i32,
    pub detail: Detail,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub undetermined: usize,
    pub errors: usize,
    pub anomalies: usize,
    pub exit: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub task: usize,
    pub role: String,
    pub hash: String,
    pub document: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub document_sha256: String,
    pub options: RunOptions,
    pub tasks: Vec<TaskRecord>,
    pub summary: Summary,
    /// SHA-256 of everything above, serialized compactly.
    pub digest: String,
    pub certificates: Vec<CertificateRecord>,
}

/// Merges exit codes: anomaly, input error, fail, undetermined, pass.
pub fn worst_exit(codes: impl IntoIterator<Item = i32>) -> i32 {
    let rank = |c: i32| match c {
        4 => 4,
        3 => 3,
        1 => 2,
        2 => 1,
        _ => 0,
    };
    codes.into_iter().max_by_key(|c| rank(*c)).unwrap_or(0)
}

fn summarize(tasks: &[TaskRecord]) -> Summary {
    let mut s = Summary::default();
    for t in tasks {
        match t.exit {
            4 => s.anomalies += 1,
            3 => s.errors += 1,
            _ => {}
        }
        match t.verdict {
            Verdict::Pass => s.pass += 1,
            Verdict::Fail { .. } => s.fail += 1,
            Verdict::Undetermined { .. } => s.undetermined += 1,
        }
    }
    s.exit = worst_exit(tasks.iter().map(|t| t.exit));
    s
}

fn digest_of(r: &Report) -> String {
    let body = json!({
        "format": r.format,
        "document_sha256": r.document_sha256,
        "options": r.options,
        "tasks": r.tasks,
        "summary": r.summary,
    });
    sha256_hex(canonical(&body).as_bytes())
}

/// Runs the selected tasks in parallel and assembles the report.
pub fn run(
    ws: &Workspace,
    document_sha256: &str,
    selector: &[String],
    options: &RunOptions,
) -> Report {
    let picked: Vec<(usize, &crate::document::TaskEntry)> = ws
        .tasks
        .iter()
        .enumerate()
        .filter(|(_, t)| selected(t, selector))
        .collect();
    let outcomes: Vec<_> = picked
        .par_iter()
        .map(|(i, t)| (*i, *t, run_task(ws, t, options)))
        .collect();
    let mut tasks = Vec::new();
    let mut certificates = Vec::new();
    for (index, entry, outcome) in outcomes {
        for u in &outcome.certificates {
            let document = certificate_document(ws, &u.name, &u.certificate);
            certificates.push(CertificateRecord {
                task: index,
                role: u.role.to_string(),
                hash: sha256_hex(canonical(&document).as_bytes()),
                document,
            });
        }
        tasks.push(TaskRecord {
            index,
            task: entry.spec.kind().to_string(),
            name: entry.name.clone(),
            exit: outcome.detail.exit_code(),
            verdict: outcome.verdict,
            detail: outcome.detail,
        });
    }
    let summary = summarize(&tasks);
    let mut report = Report {
        format: FORMAT.into(),
        document_sha256: document_sha256.into(),
        options: *options,
        tasks,
        summary,
        digest: String::new(),
        certificates,
    };
    report.digest = digest_of(&report);
    report
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            let label = match &t.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail { .. } => "FAIL",
                Verdict::Undetermined { .. } => "UNDETERMINED",
            };
            let name = t
                .name
                .as_deref()
                .map(|n| format!(" {n}"))
                .unwrap_or_default();
            out.push_str(&format!("[{label}] #{} {}{name}", t.index, t.task));
            match &t.verdict {
                Verdict::Fail { reason, .. } => out.push_str(&format!(": {reason}")),
                Verdict::Undetermined { missing } => out.push_str(&format!(": {missing}")),
                Verdict::Pass => {}
            }
            if let Detail::Transport { report } = &t.detail {
                out.push_str(&format!(" ({:?})", report.conformance));
            }
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} pass, {} fail, {} undetermined, {} errors, {} anomalies; exit {}\n",
            s.pass, s.fail, s.undetermined, s.errors, s.anomalies, s.exit
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("tampered report: {0}")]
    TamperedReport(String),
}

/// The result of checking a report without rerunning its tasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub exit: i32,
    pub notes: Vec<String>,
}

fn tampered(msg: impl Into<String>) -> VerifyError {
    VerifyError::TamperedReport(msg.into())
}

/// Replays one embedded certificate; `Err` carries the reason it does not pass.
fn replay(record: &CertificateRecord) -> Result<(), String> {
    let ws = parse_value(&record.document).map_err(|e| e.to_string())?;
    let (_, entry) = ws
        .certificates
        .first()
        .ok_or("no certificate in the embedded document")?;
    match verify_generation_certificate(&entry.certificate).verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail { reason, .. } => Err(reason),
        Verdict::Undetermined { missing } => Err(missing),
    }
}

/// Checks the digest, the consistency of every recorded verdict and replays
/// every embedded certificate.
pub fn verify_report(text: &str) -> Result<Verification, VerifyError> {
    let report: Report =
        serde_json::from_str(text).map_err(|e| tampered(format!("unreadable: {e}")))?;
    if report.format != FORMAT {
        return Err(tampered(format!("unknown format `{}`", report.format)));
    }
    if digest_of(&report) != report.digest {
        return Err(tampered("digest mismatch"));
    }
    for t in &report.tasks {
        t.detail
            .reverify()
            .map_err(|e| tampered(format!("task #{}: {e}", t.index)))?;
        if t.detail.verdict() != t.verdict || t.detail.exit_code() != t.exit {
            return Err(tampered(format!(
                "task #{}: verdict does not follow from its detail",
                t.index
            )));
        }
    }
    if summarize(&report.tasks) != report.summary {
        return Err(tampered("summary does not match the tasks"));
    }
    let mut exit = report.summary.exit;
    let mut notes = Vec::new();
    let hashes = |i: usize| -> Vec<String> {
        report
            .tasks
            .iter()
            .filter(|t| t.index == i)
            .flat_map(|t| match &t.detail {
                Detail::Check { report } => report.certificate_hashes.clone(),
                Detail::Transport { report } => report
                    .base
                    .certificate_hashes
                    .iter()
                    .chain(&report.extended.certificate_hashes)
                    .cloned()
                    .collect(),
                _ => Vec::new(),
            })
            .collect()
    };
    let replays: Vec<Result<(), String>> = report.certificates.par_iter().map(replay).collect();
    for (c, r) in report.certificates.iter().zip(replays) {
        match r {
            Err(reason) => {
                notes.push(format!(
                    "certificate of task #{} ({}) does not replay: {reason}",
                    c.task, c.role
                ));
                exit = worst_exit([exit, 1]);
            }
            Ok(()) => {
                let hash = sha256_hex(canonical(&c.document).as_bytes());
                if hash != c.hash || !hashes(c.task).contains(&hash) {
                    return Err(tampered(format!(
                        "certificate of task #{} does not match its recorded hash",
                        c.task
                    )));
                }
            }
        }
    }
    Ok(Verification { exit, notes })
}
