use serde::Serialize;
use serde_json::Value;

use aeq_core::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Infeasible,
    Error,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outcome: Outcome,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, outcome: Outcome, payload: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            outcome,
            payload,
            message: None,
        }
    }

    pub fn error(command: &str, inputs: Value, message: String) -> Self {
        let message = if message.trim().is_empty() {
            "unspecified error".to_string()
        } else {
            message
        };
        Self {
            command: command.to_string(),
            inputs,
            outcome: Outcome::Error,
            payload: Value::Null,
            message: Some(message),
        }
    }

    pub fn print(&self) {
        emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(self).expect("report serializes")
        ));
    }
}

/// Writes to stdout, tolerating a closed pipe (`aeq ... | head`).
pub fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

/// Property failures exit 1; malformed input and bad parameters exit 2.
pub fn classify(e: &Error) -> Outcome {
    match e {
        Error::NotAlmostEquidistant { .. }
        | Error::NotTriangleFree { .. }
        | Error::Precondition(_)
        | Error::SpectrumShape(_)
        | Error::NoConvergence(_) => Outcome::Fail,
        Error::Empty
        | Error::ZeroDimension
        | Error::DimensionMismatch { .. }
        | Error::Ragged { .. }
        | Error::SizeMismatch(_)
        | Error::NotSymmetric { .. }
        | Error::NegativeEntry { .. }
        | Error::OutOfRange(_)
        | Error::Mode(_)
        | Error::Parse { .. } => Outcome::Error,
    }
}
