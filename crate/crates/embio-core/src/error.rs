//! Error type shared by every module in the crate.
//!
//! Display strings start with a stable PascalCase code so that callers
//! (and the CLI) can emit machine-parsable single-line errors.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// L2 norm at or below the numeric floor; the vector has no direction.
    #[error("ZeroVector: L2 norm {norm:.3e} is at or below the 1e-12 floor")]
    ZeroVector { norm: f64 },

    #[error("DimensionMismatch: expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Antipodal endpoints: the connecting geodesic is not unique.
    #[error("AntipodalPair: angle {angle:.9} rad is within 1e-6 of pi")]
    AntipodalPair { angle: f64 },

    #[error("EmptySet: {what} must not be empty")]
    EmptySet { what: &'static str },

    #[error("InvalidParameter: {what}")]
    InvalidParameter { what: String },

    #[error("NeedTwoIdentities: bank holds {got} identities, scoring needs at least 2")]
    NeedTwoIdentities { got: usize },

    #[error("KTooLarge: k={k} exceeds the {available} available reports")]
    KTooLarge { k: usize, available: usize },

    #[error("IndexOutOfRange: index {index} is outside 0..{count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("EmptyClass: need >=1 genuine and >=1 impostor score (got {genuine} genuine, {impostor} impostor)")]
    EmptyClass { genuine: usize, impostor: usize },

    #[error(
        "InsufficientImpostors: FAR target {far_target:e} needs at least {required} impostor scores, got {got}"
    )]
    InsufficientImpostors {
        far_target: f64,
        required: usize,
        got: usize,
    },

    #[error("EmptyFold: fold {fold} holds no pairs")]
    EmptyFold { fold: usize },

    #[error("FoldCountMismatch: {what}")]
    FoldCountMismatch { what: String },

    #[error("MissingGroup: pair {index} has no group label")]
    MissingGroup { index: usize },

    #[error("PlanMismatch: plan is for identity {plan_label:?} but record is {record_label:?}")]
    PlanMismatch {
        plan_label: String,
        record_label: String,
    },

    /// Context wrapper: an error raised while processing one identity.
    #[error("identity {label:?}: {source}")]
    Identity {
        label: String,
        #[source]
        source: Box<Error>,
    },

    /// Context wrapper: an error raised at one plan entry.
    #[error("entry {index}: {source}")]
    Entry {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Context wrapper: an error raised at one matrix row.
    #[error("row {index}: {source}")]
    Row {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Context wrapper: an error raised while evaluating one group.
    #[error("group {group:?}: {source}")]
    Group {
        group: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn for_identity(self, label: impl Into<String>) -> Error {
        Error::Identity {
            label: label.into(),
            source: Box::new(self),
        }
    }

    pub fn at_entry(self, index: usize) -> Error {
        Error::Entry {
            index,
            source: Box::new(self),
        }
    }

    pub fn at_row(self, index: usize) -> Error {
        Error::Row {
            index,
            source: Box::new(self),
        }
    }

    pub fn for_group(self, group: impl Into<String>) -> Error {
        Error::Group {
            group: group.into(),
            source: Box::new(self),
        }
    }
}
