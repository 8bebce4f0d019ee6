//! JSON metric reports (fixed key order) and the plot-ready ROC CSV.

use std::collections::BTreeMap;

use serde::Serialize;

use embio_core::evalkit::{FoldAccuracy, GroupStats, OperatingPoint, RocCurve};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub pairs: usize,
    pub folds: usize,
    pub mean_accuracy: f64,
    pub per_fold: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupsSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupsSection {
    pub per_group: BTreeMap<String, f64>,
    pub mean: f64,
    pub std: f64,
}

impl VerifyReport {
    pub fn new(pairs: usize, folds: usize, accuracy: &FoldAccuracy, groups: Option<&GroupStats>) -> Self {
        VerifyReport {
            pairs,
            folds,
            mean_accuracy: accuracy.mean_accuracy,
            per_fold: accuracy.per_fold.clone(),
            groups: groups.map(|stats| GroupsSection {
                per_group: stats.per_group.clone(),
                mean: stats.mean,
                std: stats.std,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TarReport {
    pub far_target: f64,
    pub genuine: usize,
    pub impostors: usize,
    pub tar: f64,
    /// None when no observed threshold satisfied the FAR budget (the
    /// operating point accepts nothing).
    pub threshold: Option<f64>,
    pub achieved_far: f64,
}

impl TarReport {
    pub fn new(far_target: f64, genuine: usize, impostors: usize, op: &OperatingPoint) -> Self {
        TarReport {
            far_target,
            genuine,
            impostors,
            tar: op.tar,
            threshold: op.threshold.is_finite().then_some(op.threshold),
            achieved_far: op.achieved_far,
        }
    }
}

/// Pretty JSON with a trailing newline; field order follows the structs.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("in-memory serialization");
    bytes.push(b'\n');
    bytes
}

/// `threshold,far,tar` CSV of a ROC curve.
pub fn roc_csv_bytes(curve: &RocCurve) -> Vec<u8> {
    let mut out = String::from("threshold,far,tar\n");
    for point in curve.points() {
        out.push_str(&format!("{},{},{}\n", point.threshold, point.far, point.tar));
    }
    out.into_bytes()
}
