use std::fmt::Write;

use serde::Serialize;

use crate::presentation::{EqualityVerdict, VerdictStatus};

pub const REPORT_FORMAT: &str = "qmor-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }

    /// The worse of two statuses: fail over unknown over pass.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Pass,
        }
    }
}

impl From<VerdictStatus> for Status {
    fn from(v: VerdictStatus) -> Self {
        match v {
            VerdictStatus::Equal => Status::Pass,
            VerdictStatus::Distinct => Status::Fail,
            VerdictStatus::Unknown => Status::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictLine {
    pub label: String,
    pub verdict: String,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub index: usize,
    pub line: usize,
    pub statement: String,
    pub status: Status,
    pub steps: u64,
    pub fields: Vec<Field>,
    pub verdicts: Vec<VerdictLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

impl Entry {
    pub fn new(statement: String, status: Status) -> Self {
        Entry { index: 0, line: 0, statement, status, steps: 0, fields: Vec::new(), verdicts: Vec::new(), wall_ms: None }
    }

    pub fn field(&mut self, key: &str, value: impl ToString) {
        self.fields.push(Field { key: key.to_string(), value: value.to_string() });
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|f| f.key == key).map(|f| f.value.as_str())
    }

    pub fn verdict(&mut self, label: impl Into<String>, v: &EqualityVerdict) {
        self.steps += v.steps();
        self.verdicts.push(VerdictLine { label: label.into(), verdict: v.status().to_string(), steps: v.steps() });
    }

    pub fn verdicts<'a>(&mut self, labels: impl IntoIterator<Item = String>, vs: impl IntoIterator<Item = &'a EqualityVerdict>) {
        for (l, v) in labels.into_iter().zip(vs) {
            self.verdict(l, v);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub version: u32,
    pub budget: u64,
    pub seed: u64,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(budget: u64, seed: u64, entries: Vec<Entry>) -> Self {
        let mut summary = Summary::default();
        for e in &entries {
            match e.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Unknown => summary.unknown += 1,
            }
        }
        Report { format: REPORT_FORMAT, version: REPORT_VERSION, budget, seed, entries, summary }
    }

    pub fn status(&self) -> Status {
        self.entries.iter().fold(Status::Pass, |s, e| s.and(e.status))
    }

    /// 0 when everything passes, 1 on any failure, 2 when something is unknown.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
        }
    }

    /// `key: value` blocks, one per entry, separated by blank lines. Verdict
    /// lines read `verdict: <status> <steps> <label>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{REPORT_FORMAT} v{REPORT_VERSION}").unwrap();
        writeln!(s, "budget: {}", self.budget).unwrap();
        writeln!(s, "seed: {}", self.seed).unwrap();
        for e in &self.entries {
            writeln!(s).unwrap();
            writeln!(s, "entry: {}", e.index).unwrap();
            writeln!(s, "line: {}", e.line).unwrap();
            writeln!(s, "statement: {}", e.statement).unwrap();
            writeln!(s, "status: {}", e.status.as_str()).unwrap();
            writeln!(s, "steps: {}", e.steps).unwrap();
            if let Some(ms) = e.wall_ms {
                writeln!(s, "wall_ms: {ms}").unwrap();
            }
            for f in &e.fields {
                for line in f.value.lines() {
                    writeln!(s, "{}: {line}", f.key).unwrap();
                }
            }
            for v in &e.verdicts {
                writeln!(s, "verdict: {} {} {}", v.verdict, v.steps, v.label).unwrap();
            }
        }
        writeln!(s).unwrap();
        writeln!(
            s,
            "summary: pass {} fail {} unknown {}",
            self.summary.pass, self.summary.fail, self.summary.unknown
        )
        .unwrap();
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_and_exit_codes() {
        let mut a = Entry::new("check x".into(), Status::Pass);
        a.field("note", "two\nlines");
        let b = Entry::new("check y".into(), Status::Unknown);
        let r = Report::new(10, 0, vec![a.clone(), b]);
        assert_eq!(r.exit_code(), 2);
        assert!(r.to_text().contains("note: two\nnote: lines\n"));
        let r = Report::new(10, 0, vec![a, Entry::new("z".into(), Status::Fail)]);
        assert_eq!(r.exit_code(), 1);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["entries"][1]["status"], "fail");
        assert_eq!(json["version"], 1);
    }
}
