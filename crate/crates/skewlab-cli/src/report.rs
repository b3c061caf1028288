//! Run reports: the JSON every command emits on stdout. The human-readable
//! text is derived from the same structure. Everything except `timing_ms`
//! is deterministic for identical inputs.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub verdicts: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<serde_json::Value>,
    pub timing_ms: u64,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs: Vec::new(),
            verdicts: Vec::new(),
            artifact: None,
            timing_ms: 0,
        }
    }

    pub fn record(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.verdicts.push(Check {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    /// 0 iff every verdict passes; "undetermined" only counts as passing
    /// when explicitly allowed.
    pub fn exit_code(&self, allow_undetermined: bool) -> i32 {
        let mut code = 0;
        for v in &self.verdicts {
            match v.status {
                Status::Pass => {}
                Status::Undetermined if allow_undetermined => {}
                Status::Undetermined => code = code.max(1),
                Status::Fail => code = code.max(1),
            }
        }
        code
    }

    pub fn human(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for i in &self.inputs {
            out.push_str(&format!("input {} sha256={}\n", i.path, i.sha256));
        }
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Undetermined => "undetermined",
            };
            out.push_str(&format!("{:<28} {:<12} {}\n", v.name, tag, v.detail));
        }
        out.push_str(&format!("({} ms)\n", self.timing_ms));
        out
    }
}
