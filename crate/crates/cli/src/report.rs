use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// How a command finished; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A mismatch, refutation or contradiction was found.
    Refuted,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Refuted => 1,
        }
    }
}

pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub verdicts: Value,
    pub witnesses: Value,
    pub status: Status,
    /// Human-readable lines.
    pub text: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Report {
            command,
            inputs,
            verdicts: Value::Object(Map::new()),
            witnesses: Value::Object(Map::new()),
            status: Status::Success,
            text: Vec::new(),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn to_json(&self, elapsed_ms: f64) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "timings": { "elapsed_ms": elapsed_ms },
        })
    }
}

/// Integers become JSON numbers when they fit in `i64`, decimal strings otherwise.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn ints<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(int).collect())
}
