//! Mean-offset correction between two embedding populations.
//!
//! The shift is the difference of population means, estimated from a
//! target (reference) set and a source set, and added to source-domain
//! vectors to move their distribution onto the target's. Corrected vectors
//! are deliberately NOT renormalized: the correction lives in an
//! unconstrained latent space.

use crate::error::{Error, Result};
use crate::vecmath;

/// A mean-difference correction vector with estimation provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftVector {
    delta: Vec<f64>,
    source_count: usize,
    target_count: usize,
}

impl ShiftVector {
    /// Wrap an externally stored shift (e.g. loaded from disk).
    pub fn new(delta: Vec<f64>, source_count: usize, target_count: usize) -> Result<Self> {
        if delta.is_empty() {
            return Err(Error::EmptySet { what: "shift delta" });
        }
        if source_count == 0 || target_count == 0 {
            return Err(Error::InvalidParameter {
                what: format!(
                    "shift population counts must be >= 1, got source={source_count} target={target_count}"
                ),
            });
        }
        Ok(ShiftVector {
            delta,
            source_count,
            target_count,
        })
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.delta.len()
    }

    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn target_count(&self) -> usize {
        self.target_count
    }
}

/// Estimate the shift as mean(target) - mean(source), componentwise.
/// Each population is averaged over its own size; the two sets may differ
/// in length but must share one dimension.
pub fn estimate_shift(target: &[Vec<f64>], source: &[Vec<f64>]) -> Result<ShiftVector> {
    let target_refs: Vec<&[f64]> = target.iter().map(|v| v.as_slice()).collect();
    let source_refs: Vec<&[f64]> = source.iter().map(|v| v.as_slice()).collect();
    let target_mean = vecmath::mean_rows(&target_refs, "shift target population")?;
    let source_mean = vecmath::mean_rows(&source_refs, "shift source population")?;
    vecmath::check_dims(target_mean.len(), source_mean.len())?;
    let delta: Vec<f64> = target_mean
        .iter()
        .zip(&source_mean)
        .map(|(t, s)| t - s)
        .collect();
    Ok(ShiftVector {
        delta,
        source_count: source.len(),
        target_count: target.len(),
    })
}

/// Apply the shift at full strength: `v + delta`. No renormalization.
pub fn apply_shift(v: &[f64], shift: &ShiftVector) -> Result<Vec<f64>> {
    apply_shift_scaled(v, shift, 1.0)
}

/// Apply the shift scaled by `strength`: `v + strength * delta`.
/// `strength = 1.0` is the plain correction.
pub fn apply_shift_scaled(v: &[f64], shift: &ShiftVector, strength: f64) -> Result<Vec<f64>> {
    vecmath::check_dims(shift.dim(), v.len())?;
    if !strength.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("shift strength must be finite, got {strength}"),
        });
    }
    Ok(v.iter()
        .zip(&shift.delta)
        .map(|(x, d)| x + strength * d)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_means() {
        let shift = estimate_shift(&[vec![1.0, 0.0]], &[vec![0.0, 1.0]]).unwrap();
        assert_eq!(shift.delta(), &[1.0, -1.0]);
        assert_eq!(shift.source_count(), 1);
        assert_eq!(shift.target_count(), 1);
    }

    #[test]
    fn identical_populations_give_zero_delta() {
        let pop = vec![vec![0.3, -0.7, 2.0], vec![1.5, 0.25, -4.0]];
        let shift = estimate_shift(&pop, &pop).unwrap();
        for d in shift.delta() {
            assert!(d.abs() < 1e-9);
        }
    }

    #[test]
    fn hand_computed_means() {
        // target mean (2, 0); source mean (0, 3)
        let target = vec![vec![1.0, 0.0], vec![3.0, 0.0]];
        let source = vec![vec![0.0, 2.0], vec![0.0, 4.0]];
        let shift = estimate_shift(&target, &source).unwrap();
        assert_eq!(shift.delta(), &[2.0, -3.0]);
    }

    #[test]
    fn apply_is_vector_addition() {
        let shift = ShiftVector::new(vec![1.0, -1.0], 1, 1).unwrap();
        assert_eq!(apply_shift(&[0.0, 1.0], &shift).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn zero_delta_is_identity() {
        let shift = ShiftVector::new(vec![0.0, 0.0], 3, 4).unwrap();
        let v = vec![0.25, -9.5];
        assert_eq!(apply_shift(&v, &shift).unwrap(), v);
    }

    #[test]
    fn strength_scales_the_correction() {
        let shift = ShiftVector::new(vec![2.0, -4.0], 1, 1).unwrap();
        assert_eq!(
            apply_shift_scaled(&[0.0, 0.0], &shift, 0.5).unwrap(),
            vec![1.0, -2.0]
        );
    }

    #[test]
    fn empty_population_errors() {
        assert!(matches!(
            estimate_shift(&[], &[vec![1.0]]),
            Err(Error::EmptySet { .. })
        ));
        assert!(matches!(
            estimate_shift(&[vec![1.0]], &[]),
            Err(Error::EmptySet { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_across_populations() {
        assert!(matches!(
            estimate_shift(&[vec![1.0, 2.0]], &[vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_dimension_mismatch() {
        let shift = ShiftVector::new(vec![1.0, 2.0], 1, 1).unwrap();
        assert!(matches!(
            apply_shift(&[1.0], &shift),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
