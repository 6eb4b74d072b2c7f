use std::io::{self, Write};

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Fail = 1,
    Input = 2,
    Unknown = 3,
}

#[derive(Debug)]
pub enum Body {
    Json(Value),
    Text(String),
}

#[derive(Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub body: Body,
    pub summary: String,
}

impl Outcome {
    pub fn json(exit: Exit, doc: Value, summary: impl Into<String>) -> Self {
        Self {
            exit,
            body: Body::Json(doc),
            summary: summary.into(),
        }
    }

    pub fn text(exit: Exit, text: String, summary: impl Into<String>) -> Self {
        Self {
            exit,
            body: Body::Text(text),
            summary: summary.into(),
        }
    }

    pub fn input_error(err: anyhow::Error) -> Self {
        let msg = format!("{err:#}");
        Self::json(
            Exit::Input,
            json!({"status": "error", "error": msg}),
            format!("error: {msg}"),
        )
    }

    /// Write errors such as a closed pipe are ignored; the exit code still
    /// reports the outcome.
    pub fn emit(&self) {
        let text = match &self.body {
            Body::Json(v) => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
            Body::Text(t) => t.clone(),
        };
        let mut out = io::stdout().lock();
        let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
        let _ = writeln!(io::stderr(), "{}", self.summary);
    }
}

/// Exit code of a certificate or report status string.
pub fn exit_for(status: &str) -> Exit {
    match status {
        "feasible" | "valid" | "pass" => Exit::Ok,
        "infeasible" | "invalid" | "fail" => Exit::Fail,
        _ => Exit::Unknown,
    }
}
