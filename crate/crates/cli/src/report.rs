use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub summary: String,
    pub values: Value,
}

impl CheckResult {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        summary: impl Into<String>,
        values: Value,
    ) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::from_bool(pass),
            summary: summary.into(),
            values,
        }
    }

    pub fn skipped(name: impl Into<String>, why: &str) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skipped,
            summary: why.into(),
            values: Value::Null,
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", self.status.label(), self.name, self.summary)
    }
}

pub fn artifact_version() -> String {
    format!("{}+{}", env!("CARGO_PKG_VERSION"), env!("W3_GIT_DESCRIBE"))
}

/// Hex SHA-256 over the canonical command inputs.
pub fn config_hash(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub config_hash: String,
    pub version: String,
    /// sorted by name
    pub checks: Vec<CheckResult>,
    /// command output; object keys are merged into the report
    pub result: Option<Value>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(
        command: &str,
        config_hash: String,
        mut checks: Vec<CheckResult>,
        result: Option<Value>,
    ) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        RunReport {
            command: command.into(),
            config_hash,
            version: artifact_version(),
            checks,
            result,
            wall_time_s: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Everything except `wall_time_s` is a function of argv and inputs.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert("config_hash".into(), self.config_hash.clone().into());
        m.insert("version".into(), self.version.clone().into());
        m.insert(
            "status".into(),
            if self.passed() { "pass" } else { "fail" }.into(),
        );
        m.insert(
            "checks".into(),
            serde_json::to_value(&self.checks).expect("plain data"),
        );
        match &self.result {
            Some(Value::Object(o)) => {
                for (k, v) in o {
                    m.entry(k.clone()).or_insert_with(|| v.clone());
                }
            }
            Some(v) => {
                m.insert("result".into(), v.clone());
            }
            None => {}
        }
        m.insert("wall_time_s".into(), self.wall_time_s.into());
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
        }
        let failed = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count();
        let skipped = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Skipped)
            .count();
        let _ = writeln!(
            s,
            "{} {}: {} checks, {} failed, {} skipped, {:.2} s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.command,
            self.checks.len(),
            failed,
            skipped,
            self.wall_time_s
        );
        s
    }
}
