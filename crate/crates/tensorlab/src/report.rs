//! Uniform run reports: the JSON document every command prints on stdout.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Everything a command run produces. Reruns with the same inputs and seed
/// yield identical reports except for the timing entries; commands whose
/// stdout is pinned byte for byte leave `timings` empty.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub inputs: Value,
    pub certificates: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<TimingEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimingEntry {
    pub stage: String,
    pub millis: u128,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, inputs: Value, certificates: Value) -> RunReport {
        RunReport {
            tool: "tensorlab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            inputs,
            certificates,
            timings: Vec::new(),
        }
    }

    /// Records the time elapsed since `started` under the given stage name.
    pub fn record(&mut self, stage: &str, started: Instant) {
        self.timings.push(TimingEntry {
            stage: stage.into(),
            millis: started.elapsed().as_millis(),
        });
    }

    /// Deterministic pretty JSON (fields in declaration order), newline
    /// terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn timings_are_omitted_when_empty() {
        let r = RunReport::new("table", 0, json!({"max_dim": 5}), json!({}));
        let text = r.to_json();
        assert!(!text.contains("timings"));
        assert!(text.ends_with('\n'));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], "table");
        assert_eq!(v["seed"], 0);
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn recorded_timings_appear() {
        let mut r = RunReport::new("rank", 7, json!({}), json!({}));
        r.record("search", Instant::now());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["timings"][0]["stage"], "search");
    }
}
