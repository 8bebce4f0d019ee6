//! Verification benchmarking from similarity scores: ROC curves, TAR at a
//! fixed FAR operating point, fold-based accuracy with thresholds tuned on
//! held-out folds, and per-group accuracy statistics.
//!
//! The acceptance convention is `score >= threshold` everywhere, and
//! thresholds are taken from the observed scores themselves, so every
//! number here is reproducible by a brute-force threshold scan.

use std::borrow::Cow;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypersphere::{UNIT_NORM_TOLERANCE, ZERO_NORM_FLOOR};
use crate::vecmath;

/// Whether a pair compares samples of the same identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairLabel {
    Genuine,
    Impostor,
}

/// One comparison: two row indices into an embedding matrix, the ground
/// truth, and optional group / fold assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationPair {
    a: usize,
    b: usize,
    label: PairLabel,
    group: Option<String>,
    fold: Option<usize>,
}

impl VerificationPair {
    pub fn new(a: usize, b: usize, label: PairLabel) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidParameter {
                what: format!("verification pair compares row {a} with itself"),
            });
        }
        Ok(VerificationPair {
            a,
            b,
            label,
            group: None,
            fold: None,
        })
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn with_fold(mut self, fold: usize) -> Self {
        self.fold = Some(fold);
        self
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn label(&self) -> PairLabel {
        self.label
    }

    pub fn group(&self) -> Option<&str> {
        self.group.as_deref()
    }

    pub fn fold(&self) -> Option<usize> {
        self.fold
    }
}

/// A scored pair: the cosine similarity plus the metadata carried over
/// from the [`VerificationPair`] it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair {
    pub score: f64,
    pub label: PairLabel,
    pub group: Option<String>,
    pub fold: Option<usize>,
}

/// Similarity scores for a pair list, in input order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreSet {
    pairs: Vec<ScoredPair>,
}

impl ScoreSet {
    pub fn from_scored(pairs: Vec<ScoredPair>) -> Self {
        ScoreSet { pairs }
    }

    /// Convenience constructor from bare genuine/impostor score lists.
    pub fn from_scores(genuine: &[f64], impostor: &[f64]) -> Self {
        let mut pairs = Vec::with_capacity(genuine.len() + impostor.len());
        pairs.extend(genuine.iter().map(|&score| ScoredPair {
            score,
            label: PairLabel::Genuine,
            group: None,
            fold: None,
        }));
        pairs.extend(impostor.iter().map(|&score| ScoredPair {
            score,
            label: PairLabel::Impostor,
            group: None,
            fold: None,
        }));
        ScoreSet { pairs }
    }

    pub fn pairs(&self) -> &[ScoredPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn genuine_scores(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|p| p.label == PairLabel::Genuine)
            .map(|p| p.score)
            .collect()
    }

    pub fn impostor_scores(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|p| p.label == PairLabel::Impostor)
            .map(|p| p.score)
            .collect()
    }
}

/// One ROC operating point under the `score >= threshold` rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub far: f64,
    pub tar: f64,
}

/// ROC points at every distinct observed score, sorted by descending
/// threshold; both rates are non-decreasing along the list.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    points: Vec<RocPoint>,
}

impl RocCurve {
    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }
}

/// The operating point selected by [`tar_at_far`]. An infinite threshold
/// means no observed threshold satisfied the FAR budget (accept nothing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub tar: f64,
    pub threshold: f64,
    pub achieved_far: f64,
}

/// Mean and per-fold verification accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldAccuracy {
    pub mean_accuracy: f64,
    pub per_fold: Vec<f64>,
}

/// Per-group fold accuracies with their mean and population standard
/// deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupStats {
    pub per_group: BTreeMap<String, f64>,
    pub mean: f64,
    pub std: f64,
}

/// Cosine-score a pair list against an embedding matrix. Rows already on
/// the unit sphere are used as-is; others are normalized on the fly.
pub fn score_pairs(embeddings: &[Vec<f64>], pairs: &[VerificationPair]) -> Result<ScoreSet> {
    let count = embeddings.len();
    let dim = embeddings.first().map(|r| r.len()).unwrap_or(0);
    for (i, row) in embeddings.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.len(),
            }
            .at_row(i));
        }
    }

    // Normalize each referenced row once.
    let mut referenced: Vec<usize> = Vec::with_capacity(pairs.len() * 2);
    for pair in pairs {
        for index in [pair.a, pair.b] {
            if index >= count {
                return Err(Error::IndexOutOfRange { index, count });
            }
            referenced.push(index);
        }
    }
    referenced.sort_unstable();
    referenced.dedup();

    let mut prepared: Vec<Option<Cow<'_, [f64]>>> = vec![None; count];
    for &i in &referenced {
        let row = &embeddings[i];
        let norm = vecmath::l2_norm(row);
        if !norm.is_finite() {
            return Err(Error::InvalidParameter {
                what: "embedding row contains non-finite values".into(),
            }
            .at_row(i));
        }
        if norm <= ZERO_NORM_FLOOR {
            return Err(Error::ZeroVector { norm }.at_row(i));
        }
        prepared[i] = Some(if (norm - 1.0).abs() <= UNIT_NORM_TOLERANCE {
            Cow::Borrowed(row.as_slice())
        } else {
            Cow::Owned(row.iter().map(|x| x / norm).collect())
        });
    }

    let scored: Vec<ScoredPair> = pairs
        .par_iter()
        .map(|pair| {
            let a = prepared[pair.a].as_ref().expect("prepared above");
            let b = prepared[pair.b].as_ref().expect("prepared above");
            ScoredPair {
                score: vecmath::dot(a, b).clamp(-1.0, 1.0),
                label: pair.label,
                group: pair.group.clone(),
                fold: pair.fold,
            }
        })
        .collect();
    Ok(ScoreSet { pairs: scored })
}

/// Number of elements in ascending-sorted `sorted` that are `>= t`.
fn count_geq(sorted: &[f64], t: f64) -> usize {
    sorted.len() - sorted.partition_point(|x| *x < t)
}

/// Build the ROC curve: one point per distinct observed score, acceptance
/// rule `score >= threshold`.
pub fn roc(scores: &ScoreSet) -> Result<RocCurve> {
    let mut genuine = scores.genuine_scores();
    let mut impostor = scores.impostor_scores();
    if genuine.is_empty() || impostor.is_empty() {
        return Err(Error::EmptyClass {
            genuine: genuine.len(),
            impostor: impostor.len(),
        });
    }
    genuine.sort_unstable_by(f64::total_cmp);
    impostor.sort_unstable_by(f64::total_cmp);

    let mut thresholds: Vec<f64> = genuine.iter().chain(impostor.iter()).copied().collect();
    thresholds.sort_unstable_by(|a, b| f64::total_cmp(b, a));
    thresholds.dedup();

    let n_gen = genuine.len() as f64;
    let n_imp = impostor.len() as f64;
    let points = thresholds
        .into_iter()
        .map(|threshold| RocPoint {
            threshold,
            far: count_geq(&impostor, threshold) as f64 / n_imp,
            tar: count_geq(&genuine, threshold) as f64 / n_gen,
        })
        .collect();
    Ok(RocCurve { points })
}

/// Largest TAR whose FAR stays at or below `far_target`, reported with the
/// exact threshold and achieved FAR — no interpolation between points.
pub fn tar_at_far(scores: &ScoreSet, far_target: f64) -> Result<OperatingPoint> {
    if !(far_target > 0.0 && far_target < 1.0) {
        return Err(Error::InvalidParameter {
            what: format!("far_target must lie in (0, 1), got {far_target}"),
        });
    }
    let impostors = scores.impostor_scores().len();
    let required = (1.0 / far_target).ceil() as usize;
    if impostors < required {
        return Err(Error::InsufficientImpostors {
            far_target,
            required,
            got: impostors,
        });
    }
    let curve = roc(scores)?;
    let mut best: Option<OperatingPoint> = None;
    for point in curve.points() {
        if point.far <= far_target && best.is_none_or(|b| point.tar > b.tar) {
            best = Some(OperatingPoint {
                tar: point.tar,
                threshold: point.threshold,
                achieved_far: point.far,
            });
        }
    }
    // Every observed threshold may overshoot the budget (duplicated top
    // impostor scores); then the only admissible rule accepts nothing.
    Ok(best.unwrap_or(OperatingPoint {
        tar: 0.0,
        threshold: f64::INFINITY,
        achieved_far: 0.0,
    }))
}

/// Fold ids for every pair: explicit assignments when present, otherwise
/// contiguous equal blocks in input order.
fn fold_assignment(scores: &ScoreSet, folds: usize) -> Result<Vec<usize>> {
    let n = scores.len();
    let explicit = scores.pairs.iter().filter(|p| p.fold.is_some()).count();
    if explicit > 0 && explicit < n {
        return Err(Error::FoldCountMismatch {
            what: format!("{explicit} of {n} pairs carry fold ids; all or none must"),
        });
    }
    if explicit == n {
        let mut assignment = Vec::with_capacity(n);
        for pair in &scores.pairs {
            let fold = pair.fold.expect("checked above");
            if fold >= folds {
                return Err(Error::FoldCountMismatch {
                    what: format!("fold id {fold} is outside 0..{folds}"),
                });
            }
            assignment.push(fold);
        }
        Ok(assignment)
    } else {
        let mut assignment = vec![0usize; n];
        for fold in 0..folds {
            let start = fold * n / folds;
            let end = (fold + 1) * n / folds;
            for slot in &mut assignment[start..end] {
                *slot = fold;
            }
        }
        Ok(assignment)
    }
}

/// Accuracy of the `score >= t` rule over `(score, is_genuine)` pairs.
fn rule_accuracy(pairs: &[(f64, bool)], t: f64) -> f64 {
    let correct = pairs
        .iter()
        .filter(|(score, genuine)| (*score >= t) == *genuine)
        .count();
    correct as f64 / pairs.len() as f64
}

/// Fold-based verification accuracy: for each fold, pick the threshold that
/// maximizes accuracy on the other folds (candidates are the distinct
/// training scores, ties -> smallest threshold) and measure it on the held
/// out fold. Returns the per-fold accuracies and their mean.
pub fn kfold_accuracy(scores: &ScoreSet, folds: usize) -> Result<FoldAccuracy> {
    if folds < 2 {
        return Err(Error::FoldCountMismatch {
            what: format!("need at least 2 folds, got {folds}"),
        });
    }
    if scores.is_empty() {
        return Err(Error::EmptySet {
            what: "score set for kfold accuracy",
        });
    }
    let assignment = fold_assignment(scores, folds)?;
    let labeled: Vec<(f64, bool)> = scores
        .pairs
        .iter()
        .map(|p| (p.score, p.label == PairLabel::Genuine))
        .collect();

    for fold in 0..folds {
        if !assignment.contains(&fold) {
            return Err(Error::EmptyFold { fold });
        }
    }

    let mut per_fold = Vec::with_capacity(folds);
    for fold in 0..folds {
        let mut train = Vec::with_capacity(labeled.len());
        let mut test = Vec::new();
        for (pair, f) in labeled.iter().zip(&assignment) {
            if *f == fold {
                test.push(*pair);
            } else {
                train.push(*pair);
            }
        }

        let mut candidates: Vec<f64> = train.iter().map(|(s, _)| *s).collect();
        candidates.sort_unstable_by(f64::total_cmp);
        candidates.dedup();

        let mut best_t = candidates[0];
        let mut best_acc = rule_accuracy(&train, best_t);
        for &t in &candidates[1..] {
            let acc = rule_accuracy(&train, t);
            if acc > best_acc {
                best_acc = acc;
                best_t = t;
            }
        }
        per_fold.push(rule_accuracy(&test, best_t));
    }
    let mean_accuracy = per_fold.iter().sum::<f64>() / folds as f64;
    Ok(FoldAccuracy {
        mean_accuracy,
        per_fold,
    })
}

/// Fold accuracy per demographic group plus the mean and population
/// standard deviation across groups. Every pair must carry a group.
pub fn group_accuracy(scores: &ScoreSet, folds: usize) -> Result<GroupStats> {
    let mut grouped: BTreeMap<String, Vec<ScoredPair>> = BTreeMap::new();
    for (index, pair) in scores.pairs.iter().enumerate() {
        let group = pair.group.clone().ok_or(Error::MissingGroup { index })?;
        grouped.entry(group).or_default().push(pair.clone());
    }
    if grouped.is_empty() {
        return Err(Error::EmptySet {
            what: "score set for group accuracy",
        });
    }

    let mut per_group = BTreeMap::new();
    for (group, pairs) in grouped {
        let subset = ScoreSet { pairs };
        let acc = kfold_accuracy(&subset, folds).map_err(|e| e.for_group(group.clone()))?;
        per_group.insert(group, acc.mean_accuracy);
    }
    let g = per_group.len() as f64;
    let mean = per_group.values().sum::<f64>() / g;
    let variance = per_group.values().map(|a| (a - mean).powi(2)).sum::<f64>() / g;
    Ok(GroupStats {
        per_group,
        mean,
        std: variance.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: usize, b: usize, label: PairLabel) -> VerificationPair {
        VerificationPair::new(a, b, label).unwrap()
    }

    #[test]
    fn identical_rows_score_one() {
        let embs = vec![vec![0.6, 0.8], vec![0.6, 0.8]];
        let set = score_pairs(&embs, &[pair(0, 1, PairLabel::Genuine)]).unwrap();
        assert_eq!(set.pairs()[0].score, 1.0);
    }

    #[test]
    fn orthogonal_rows_score_zero() {
        let embs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let set = score_pairs(&embs, &[pair(0, 1, PairLabel::Impostor)]).unwrap();
        assert_eq!(set.pairs()[0].score, 0.0);
    }

    #[test]
    fn scores_match_direct_dot_products() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let embs: Vec<Vec<f64>> = (0..8)
            .map(|_| {
                let v: Vec<f64> = (0..16)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect();
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter().map(|x| x / n).collect()
            })
            .collect();
        let pairs: Vec<VerificationPair> = (0..10)
            .map(|i| pair(i % 8, (i + 3) % 8, PairLabel::Genuine))
            .collect();
        let set = score_pairs(&embs, &pairs).unwrap();
        for (p, s) in pairs.iter().zip(set.pairs()) {
            let direct: f64 = embs[p.a()]
                .iter()
                .zip(&embs[p.b()])
                .map(|(x, y)| x * y)
                .sum();
            assert_eq!(s.score, direct.clamp(-1.0, 1.0));
        }
    }

    #[test]
    fn unnormalized_rows_are_normalized_on_the_fly() {
        let embs = vec![vec![2.0, 0.0], vec![0.0, 5.0], vec![3.0, 0.0]];
        let set = score_pairs(
            &embs,
            &[
                pair(0, 1, PairLabel::Impostor),
                pair(0, 2, PairLabel::Genuine),
            ],
        )
        .unwrap();
        assert_eq!(set.pairs()[0].score, 0.0);
        assert!((set.pairs()[1].score - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn out_of_range_and_zero_rows_error() {
        let embs = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(
            score_pairs(&embs, &[pair(0, 2, PairLabel::Genuine)]),
            Err(Error::IndexOutOfRange { index: 2, count: 2 })
        ));
        let err = score_pairs(&embs, &[pair(0, 1, PairLabel::Genuine)]).unwrap_err();
        assert!(matches!(err, Error::Row { index: 1, .. }));
    }

    #[test]
    fn pair_with_equal_indices_is_rejected() {
        assert!(VerificationPair::new(4, 4, PairLabel::Genuine).is_err());
    }

    #[test]
    fn roc_separable_hits_perfect_corner() {
        let set = ScoreSet::from_scores(&[1.0], &[0.0]);
        let curve = roc(&set).unwrap();
        assert!(curve
            .points()
            .iter()
            .any(|p| p.far == 0.0 && p.tar == 1.0));
    }

    #[test]
    fn roc_identical_distributions_sit_on_diagonal() {
        let scores = [0.1, 0.4, 0.4, 0.9];
        let set = ScoreSet::from_scores(&scores, &scores);
        let curve = roc(&set).unwrap();
        for p in curve.points() {
            assert_eq!(p.tar, p.far);
        }
    }

    #[test]
    fn roc_needs_both_classes() {
        let set = ScoreSet::from_scores(&[0.5], &[]);
        assert!(matches!(roc(&set), Err(Error::EmptyClass { .. })));
    }

    #[test]
    fn roc_rates_are_monotone() {
        let set = ScoreSet::from_scores(&[0.9, 0.7, 0.8, 0.2], &[0.1, 0.4, 0.75, 0.3]);
        let curve = roc(&set).unwrap();
        for w in curve.points().windows(2) {
            assert!(w[0].threshold > w[1].threshold);
            assert!(w[0].far <= w[1].far);
            assert!(w[0].tar <= w[1].tar);
        }
        let last = curve.points().last().unwrap();
        assert_eq!(last.far, 1.0);
        assert_eq!(last.tar, 1.0);
    }

    #[test]
    fn tar_at_far_worked_example() {
        let set = ScoreSet::from_scores(&[0.95, 0.8, 0.6], &[0.9, 0.5, 0.4, 0.1]);
        let op = tar_at_far(&set, 0.25).unwrap();
        assert_eq!(op.tar, 1.0);
        assert_eq!(op.threshold, 0.6);
        assert_eq!(op.achieved_far, 0.25);
    }

    #[test]
    fn tar_at_far_separable_is_one() {
        let set = ScoreSet::from_scores(&[0.9, 0.8], &[0.1, 0.2, 0.3, 0.05]);
        let op = tar_at_far(&set, 0.25).unwrap();
        assert_eq!(op.tar, 1.0);
    }

    #[test]
    fn tar_at_far_requires_enough_impostors() {
        let impostors: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        let set = ScoreSet::from_scores(&[0.5], &impostors);
        match tar_at_far(&set, 1e-4) {
            Err(Error::InsufficientImpostors { required, got, .. }) => {
                assert_eq!(required, 10_000);
                assert_eq!(got, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tar_at_far_with_no_admissible_point_accepts_nothing() {
        // Four impostors tied at the global max: every observed threshold
        // has far >= 1.0 > 0.5? No: far at top = 1.0; need far <= 0.3.
        let set = ScoreSet::from_scores(&[0.1, 0.2], &[0.9, 0.9, 0.9, 0.9]);
        let op = tar_at_far(&set, 0.3).unwrap();
        assert_eq!(op.tar, 0.0);
        assert!(op.threshold.is_infinite());
        assert_eq!(op.achieved_far, 0.0);
    }

    #[test]
    fn kfold_separable_scores_are_perfect() {
        // Interleave so every fold holds both classes, and repeat a small
        // score alphabet so each fold's training set sees the boundary.
        let mut pairs = Vec::new();
        for i in 0..40 {
            let genuine = i % 2 == 0;
            pairs.push(ScoredPair {
                score: if genuine {
                    0.8 + 0.1 * ((i / 2) % 2) as f64
                } else {
                    0.1 + 0.1 * ((i / 2) % 2) as f64
                },
                label: if genuine {
                    PairLabel::Genuine
                } else {
                    PairLabel::Impostor
                },
                group: None,
                fold: None,
            });
        }
        let set = ScoreSet::from_scored(pairs);
        let acc = kfold_accuracy(&set, 10).unwrap();
        assert_eq!(acc.mean_accuracy, 1.0);
        assert_eq!(acc.per_fold.len(), 10);
    }

    #[test]
    fn kfold_degenerate_identical_scores_accept_all() {
        let set = ScoreSet::from_scores(&[0.5; 10], &[0.5; 10]);
        let acc = kfold_accuracy(&set, 2).unwrap();
        assert_eq!(acc.mean_accuracy, 0.5);
    }

    #[test]
    fn kfold_validates_folds() {
        let set = ScoreSet::from_scores(&[0.9], &[0.1]);
        assert!(matches!(
            kfold_accuracy(&set, 1),
            Err(Error::FoldCountMismatch { .. })
        ));
        // 2 pairs into 3 folds leaves one empty
        assert!(matches!(
            kfold_accuracy(&set, 3),
            Err(Error::EmptyFold { .. })
        ));
    }

    #[test]
    fn explicit_folds_are_respected() {
        let mut pairs = Vec::new();
        for i in 0..6 {
            pairs.push(ScoredPair {
                score: if i % 2 == 0 { 0.9 } else { 0.1 },
                label: if i % 2 == 0 {
                    PairLabel::Genuine
                } else {
                    PairLabel::Impostor
                },
                group: None,
                fold: Some(i % 2),
            });
        }
        let set = ScoreSet::from_scored(pairs);
        let acc = kfold_accuracy(&set, 2).unwrap();
        assert_eq!(acc.per_fold.len(), 2);
        assert_eq!(acc.mean_accuracy, 1.0);

        let mut partial = set.pairs().to_vec();
        partial[0].fold = None;
        assert!(matches!(
            kfold_accuracy(&ScoreSet::from_scored(partial), 2),
            Err(Error::FoldCountMismatch { .. })
        ));
    }

    #[test]
    fn group_stats_identical_groups_have_zero_std() {
        let mut pairs = Vec::new();
        for group in ["x", "y"] {
            for i in 0..20 {
                pairs.push(ScoredPair {
                    score: if i % 2 == 0 { 0.9 } else { 0.1 },
                    label: if i % 2 == 0 {
                        PairLabel::Genuine
                    } else {
                        PairLabel::Impostor
                    },
                    group: Some(group.to_string()),
                    fold: None,
                });
            }
        }
        let stats = group_accuracy(&ScoreSet::from_scored(pairs), 2).unwrap();
        assert_eq!(stats.per_group.len(), 2);
        assert_eq!(stats.std, 0.0);
        assert_eq!(stats.mean, 1.0);
    }

    #[test]
    fn group_stats_two_point_statistics() {
        // Group "clean" separates perfectly; group "mixed" has identical
        // score distributions -> accuracy 0.5.
        let mut pairs = Vec::new();
        for i in 0..20 {
            pairs.push(ScoredPair {
                score: if i % 2 == 0 { 0.9 } else { 0.1 },
                label: if i % 2 == 0 {
                    PairLabel::Genuine
                } else {
                    PairLabel::Impostor
                },
                group: Some("clean".to_string()),
                fold: None,
            });
        }
        for i in 0..20 {
            pairs.push(ScoredPair {
                score: 0.5,
                label: if i % 2 == 0 {
                    PairLabel::Genuine
                } else {
                    PairLabel::Impostor
                },
                group: Some("mixed".to_string()),
                fold: None,
            });
        }
        let stats = group_accuracy(&ScoreSet::from_scored(pairs), 2).unwrap();
        assert_eq!(stats.per_group["clean"], 1.0);
        assert_eq!(stats.per_group["mixed"], 0.5);
        assert_eq!(stats.mean, 0.75);
        assert_eq!(stats.std, 0.25);
    }

    #[test]
    fn group_errors_carry_the_group_name() {
        let pairs = vec![ScoredPair {
            score: 0.5,
            label: PairLabel::Genuine,
            group: Some("solo".to_string()),
            fold: None,
        }];
        let err = group_accuracy(&ScoreSet::from_scored(pairs), 2).unwrap_err();
        assert!(matches!(err, Error::Group { ref group, .. } if group == "solo"));
    }

    #[test]
    fn missing_group_is_reported_by_index() {
        let pairs = vec![
            ScoredPair {
                score: 0.5,
                label: PairLabel::Genuine,
                group: Some("a".to_string()),
                fold: None,
            },
            ScoredPair {
                score: 0.5,
                label: PairLabel::Impostor,
                group: None,
                fold: None,
            },
        ];
        assert!(matches!(
            group_accuracy(&ScoreSet::from_scored(pairs), 2),
            Err(Error::MissingGroup { index: 1 })
        ));
    }
}
