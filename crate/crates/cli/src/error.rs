use serde_json::{json, Value};

/// A CLI failure with a stable code and, for parse errors, a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError { code: code.into(), message: message.into(), line: None, column: None }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new("E_USAGE", message)
    }

    pub fn parse_at(message: String, line: usize, column: usize) -> Self {
        CliError { code: "E_PARSE".into(), message, line: Some(line), column: Some(column) }
    }

    /// 2 for verification failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.code == "E_VERIFICATION_FAILURE" {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": { "code": self.code, "message": self.message } });
        if let (Some(l), Some(c)) = (self.line, self.column) {
            v["error"]["line"] = json!(l);
            v["error"]["column"] = json!(c);
        }
        v
    }
}

impl From<polyptych::Error> for CliError {
    fn from(e: polyptych::Error) -> Self {
        CliError::new(e.code(), e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        if e.line() == 0 {
            return CliError::new("E_PARSE", msg);
        }
        CliError::parse_at(msg, e.line(), e.column())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::new("E_IO", format!("{e:#}"))
    }
}
