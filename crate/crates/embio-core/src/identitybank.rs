//! Identity bookkeeping: label -> source embeddings -> prototype, plus
//! inter-identity similarity scoring and near-duplicate filtering.
//!
//! Scoring compares prototypes pairwise and, for each identity, reports how
//! close its most confusable neighbor is. Sorting that list ascending puts
//! the most distinct identities first, so keeping a prefix drops the
//! near-duplicates at the tail.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypersphere::{self, Embedding};

/// One identity: its label, normalized source embeddings, and the
/// renormalized mean prototype.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRecord {
    label: String,
    sources: Vec<Embedding>,
    prototype: Embedding,
}

impl IdentityRecord {
    /// Build a record from raw source vectors; they are normalized and the
    /// prototype is their renormalized mean. Errors carry the label.
    pub fn new(label: impl Into<String>, raw_sources: &[Vec<f64>]) -> Result<Self> {
        let label = label.into();
        let build = || -> Result<(Vec<Embedding>, Embedding)> {
            if raw_sources.is_empty() {
                return Err(Error::EmptySet {
                    what: "identity sources",
                });
            }
            let sources: Vec<Embedding> = raw_sources
                .iter()
                .map(|v| Embedding::normalize(v))
                .collect::<Result<_>>()?;
            let dim = sources[0].dim();
            for s in &sources {
                if s.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: s.dim(),
                    });
                }
            }
            let prototype = hypersphere::prototype(&sources, true)?;
            Ok((sources, prototype))
        };
        match build() {
            Ok((sources, prototype)) => Ok(IdentityRecord {
                label,
                sources,
                prototype,
            }),
            Err(e) => Err(e.for_identity(label)),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sources(&self) -> &[Embedding] {
        &self.sources
    }

    pub fn prototype(&self) -> &Embedding {
        &self.prototype
    }
}

/// How an identity's similarity to the rest of the bank is aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityAggregate {
    /// Cosine to the single most similar other identity (worst confusable
    /// neighbor). The default.
    #[default]
    Max,
    /// Mean cosine over all other identities.
    Mean,
}

/// Per-identity similarity summary against the rest of the bank.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub label: String,
    pub score: f64,
    pub nearest_label: String,
}

/// Group labeled vectors into identity records, one per distinct label in
/// first-appearance order. Sources are normalized and prototypes computed.
pub fn build_bank<I>(manifest: I) -> Result<Vec<IdentityRecord>>
where
    I: IntoIterator<Item = (String, Vec<f64>)>,
{
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<Vec<f64>>> = HashMap::new();
    for (label, vector) in manifest {
        if !groups.contains_key(&label) {
            order.push(label.clone());
        }
        groups.entry(label).or_default().push(vector);
    }
    if order.is_empty() {
        return Err(Error::EmptySet {
            what: "bank manifest",
        });
    }
    let bank: Vec<IdentityRecord> = order
        .iter()
        .map(|label| IdentityRecord::new(label.clone(), &groups[label]))
        .collect::<Result<_>>()?;
    let dim = bank[0].prototype().dim();
    for record in &bank {
        if record.prototype().dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: record.prototype().dim(),
            }
            .for_identity(record.label()));
        }
    }
    Ok(bank)
}

/// Score every identity against the rest of the bank with the default
/// max-cosine aggregate. See [`score_identities_with`].
pub fn score_identities(bank: &[IdentityRecord]) -> Result<Vec<SimilarityReport>> {
    score_identities_with(bank, SimilarityAggregate::Max)
}

/// Score every identity against all others by prototype cosine.
///
/// Reports come back sorted ascending by score (most distinct first), ties
/// broken by label, so the order is fully deterministic and independent of
/// bank order and worker count. `nearest_label` is always the other
/// identity with the highest cosine (ties -> smallest label).
pub fn score_identities_with(
    bank: &[IdentityRecord],
    aggregate: SimilarityAggregate,
) -> Result<Vec<SimilarityReport>> {
    if bank.len() < 2 {
        return Err(Error::NeedTwoIdentities { got: bank.len() });
    }
    let dim = bank[0].prototype().dim();
    for record in bank {
        if record.prototype().dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: record.prototype().dim(),
            }
            .for_identity(record.label()));
        }
    }

    let mut reports: Vec<SimilarityReport> = bank
        .par_iter()
        .enumerate()
        .map(|(i, record)| {
            let mut best = f64::NEG_INFINITY;
            let mut best_label: &str = "";
            let mut sum = 0.0;
            for (j, other) in bank.iter().enumerate() {
                if i == j {
                    continue;
                }
                // Prototypes share a dimension (checked above), so this
                // cannot fail.
                let c = hypersphere::cosine(record.prototype(), other.prototype())
                    .expect("uniform prototype dimensions");
                sum += c;
                if c > best || (c == best && other.label() < best_label) {
                    best = c;
                    best_label = other.label();
                }
            }
            let score = match aggregate {
                SimilarityAggregate::Max => best,
                SimilarityAggregate::Mean => sum / (bank.len() - 1) as f64,
            };
            SimilarityReport {
                label: record.label().to_string(),
                score,
                nearest_label: best_label.to_string(),
            }
        })
        .collect();

    reports.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then_with(|| a.label.cmp(&b.label))
    });
    Ok(reports)
}

/// Keep the first `k` labels of an ascending-score report list.
pub fn filter_top_k(reports: &[SimilarityReport], k: usize) -> Result<Vec<String>> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            what: "filter_top_k k must be >= 1".into(),
        });
    }
    if k > reports.len() {
        return Err(Error::KTooLarge {
            k,
            available: reports.len(),
        });
    }
    Ok(reports[..k].iter().map(|r| r.label.clone()).collect())
}
