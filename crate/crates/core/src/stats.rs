//! Per-run statistics, serialised as JSON by `--stats`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub pattern: String,
    /// `None` means every vertex was a candidate.
    pub subject_candidates: Option<usize>,
    pub object_candidates: Option<usize>,
    pub messages_sent: usize,
    pub end_vertices: usize,
    pub mt_rows: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub iterations: Vec<IterationStats>,
    pub parse_ms: f64,
    pub match_ms: f64,
    pub join_ms: f64,
    pub solutions: usize,
}

impl RunStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("stats serialise")
    }
}

pub(crate) fn millis(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}
