use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    CheckFailed,
    UsageError,
    OracleViolation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed => 1,
            Status::UsageError => 2,
            Status::OracleViolation => 3,
        }
    }
}

/// The JSON document every command emits with `--format json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub status: Status,
    pub elapsed_ms: f64,
    /// Command-specific verdicts and witnesses.
    pub result: Value,
    /// Human-readable lines for `--format text`.
    pub lines: Vec<String>,
}

/// What a command hands back before timing and echo are attached.
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn new(status: Status, result: impl Serialize, lines: Vec<String>) -> Self {
        Outcome {
            status,
            result: serde_json::to_value(result).expect("report values serialize"),
            lines,
        }
    }

    pub fn error(status: Status, message: impl Into<String>) -> Self {
        let message = message.into();
        Outcome {
            status,
            result: serde_json::json!({ "error": message }),
            lines: vec![format!("error: {message}")],
        }
    }
}
