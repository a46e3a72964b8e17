//! Self-describing result records for CLI output.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Schema version stamped on every record.
pub const SCHEMA_VERSION: u32 = 1;

/// One machine-readable run record: the command, its full parameter echo,
/// seeds, a build identifier, the results payload, and the list of
/// asymptotic terms the analytic formulas silently drop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub command: String,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub build: String,
    pub results: Value,
    pub asymptotic_terms_dropped: Vec<String>,
    pub wall_time_ms: u64,
}

impl RunRecord {
    /// Assemble a record; `started` is the instant the command began.
    pub fn new(
        command: &str,
        params: Value,
        seed: Option<u64>,
        results: Value,
        dropped: Vec<String>,
        started: Instant,
    ) -> Self {
        RunRecord {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            params,
            seed,
            build: format!("naesat {}", env!("CARGO_PKG_VERSION")),
            results,
            asymptotic_terms_dropped: dropped,
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// Serialize to pretty JSON (the CLI's default output format).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trips_through_json() {
        let rec = RunRecord::new(
            "thresholds",
            json!({"k": 12}),
            None,
            json!({"r_first_exact": 1418.0}),
            vec!["o_k(1) in the sharp threshold".to_string()],
            Instant::now(),
        );
        let text = rec.to_json();
        let back: RunRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.schema, SCHEMA_VERSION);
        assert_eq!(back.command, "thresholds");
    }

    #[test]
    fn unknown_fields_are_tolerated() {
        let text = r#"{
            "schema": 1, "command": "x", "params": {}, "build": "b",
            "results": {}, "asymptotic_terms_dropped": [],
            "wall_time_ms": 0, "extra_field": true
        }"#;
        let rec: RunRecord = serde_json::from_str(text).unwrap();
        assert_eq!(rec.command, "x");
    }
}
