//! Pass/fail records for congruence and identity checks.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        };
        f.write_str(s)
    }
}

/// Outcome of one check. Witnesses hold the first failures in order of discovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub failures: usize,
    pub values: BTreeMap<String, String>,
}

const MAX_WITNESSES: usize = 5;

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: BTreeMap::new(),
            status: Status::Pass,
            witnesses: Vec::new(),
            failures: 0,
            values: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_value(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.status = Status::Fail;
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness.into());
        }
    }

    /// Record a failure unless `ok`.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(witness());
        }
    }

    pub fn skip(mut self, reason: &str) -> Self {
        self.status = Status::Skip;
        self.values.insert("reason".into(), reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Fold another report's failures into this one.
    pub fn absorb(&mut self, other: &Report) {
        if other.status == Status::Fail {
            for w in &other.witnesses {
                self.fail(format!("{}: {w}", other.check));
            }
            if other.witnesses.is_empty() {
                self.fail(other.check.clone());
            }
        }
    }

    /// Ordering key used when several reports are emitted together.
    pub fn sort_key(&self) -> (String, Vec<(String, String)>) {
        (
            self.check.clone(),
            self.params.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.check)?;
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}] {}", params.join(" "), self.status)?;
        if let Some(w) = self.witnesses.first() {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

/// Sort reports deterministically.
pub fn sort_reports(reports: &mut [Report]) {
    reports.sort_by_key(|r| r.sort_key());
}
