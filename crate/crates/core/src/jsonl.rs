//! JSON-lines framing shared by every report.
//!
//! A stream is a sequence of independently parseable records, each an object
//! with a `record` field, closed by a `summary` record whose `records` field
//! counts the records before it.

use serde_json::{json, Value};

use crate::error::Error;

pub fn error_record(e: &Error) -> Value {
    json!({
        "record": "error",
        "kind": e.kind(),
        "message": e.to_string(),
    })
}

/// Appends the summary and renders one record per line.
pub fn render(mut records: Vec<Value>, exit_code: i32) -> String {
    let summary = json!({
        "record": "summary",
        "records": records.len(),
        "exit_code": exit_code,
    });
    records.push(summary);
    let mut out = String::new();
    for r in &records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_preceding_records() {
        let text = render(vec![json!({"record": "a"}), json!({"record": "b"})], 0);
        let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2]["records"], 2);
        assert_eq!(render(Vec::new(), 3).lines().count(), 1);
    }
}
