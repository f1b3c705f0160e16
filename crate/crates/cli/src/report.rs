use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "multstrat.report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
    /// Replays with `--replay`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict { name: name.to_string(), status: if pass { "PASS" } else { "FAIL" }, detail: detail.into(), witness: None }
    }

    pub fn with_witness(mut self, w: Option<String>) -> Verdict {
        if self.status == "FAIL" {
            self.witness = w;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub parameters: Value,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub budget: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// Wall time, shown in human output only so the JSON stays byte-stable.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    /// Sorted keys, fixed indentation, trailing newline.
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(e) = &self.error {
            out.push_str(&format!("error [{}]: {}\n", e.code, e.message));
        }
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                out.push_str(&format!("{k}: {}\n", render(v)));
            }
        }
        for v in &self.verdicts {
            out.push_str(&format!("{} {}: {}\n", v.status, v.name, v.detail));
            if let Some(w) = &v.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
        }
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed.as_millis()));
        out
    }

    /// 0 when every verdict passes, 1 on any FAIL, 2 on errors.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.verdicts.iter().all(Verdict::passed) {
            0
        } else {
            1
        }
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
