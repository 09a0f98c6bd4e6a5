use serde_json::{json, Map, Value};
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// The command produced its output (evaluation, construction).
    Ok,
    Pass,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok | Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    pub fn of(passed: bool) -> Status {
        if passed {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub struct Report {
    pub status: Status,
    pub result: Value,
    pub text: String,
}

impl Report {
    pub fn new(status: Status, result: Value, text: impl Into<String>) -> Self {
        Report {
            status,
            result,
            text: text.into(),
        }
    }

    pub fn json(&self, command: &[String], seed: u64, elapsed: Duration) -> String {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("command".into(), json!(command));
        m.insert("status".into(), json!(self.status.name()));
        m.insert("seed".into(), json!(seed));
        m.insert("result".into(), self.result.clone());
        m.insert("wall_time_ms".into(), json!(elapsed.as_millis() as u64));
        serde_json::to_string_pretty(&Value::Object(m)).expect("reports serialize") + "\n"
    }

    pub fn plain(&self) -> String {
        let mut out = self.text.trim_end().to_string();
        out.push_str(&format!("\nstatus: {}\n", self.status.name()));
        out
    }
}
