//! Sampling-plan manifests: one JSONL row per planned sample with a fixed
//! field order, so reruns are byte-identical.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use embio_core::sampler::SamplePlan;

use crate::error::FormatError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRow {
    pub label: String,
    pub index: u32,
    pub direction: u32,
    pub lambda: f64,
    pub seed: u64,
    pub decode_multiplicity: u32,
}

/// Flatten plans into manifest rows, keeping plan order and entry order.
pub fn plan_rows(plans: &[SamplePlan]) -> Vec<PlanRow> {
    plans
        .iter()
        .flat_map(|plan| {
            plan.entries.iter().map(|entry| PlanRow {
                label: plan.label.clone(),
                index: entry.index,
                direction: entry.direction,
                lambda: entry.lambda,
                seed: entry.seed,
                decode_multiplicity: plan.decode_multiplicity,
            })
        })
        .collect()
}

pub fn encode_plans(plans: &[SamplePlan]) -> Vec<u8> {
    let mut out = Vec::new();
    for row in plan_rows(plans) {
        serde_json::to_writer(&mut out, &row).expect("in-memory serialization");
        out.push(b'\n');
    }
    out
}

/// Parse a plan manifest back into rows.
pub fn read_plan_rows(path: &Path) -> Result<Vec<PlanRow>, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let row: PlanRow = serde_json::from_str(raw).map_err(|e| FormatError::BadManifest {
            path: path.to_path_buf(),
            line: i + 1,
            what: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}
