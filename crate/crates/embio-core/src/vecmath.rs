//! Small f64 vector helpers shared across modules.
//!
//! Sums over many rows use a fixed pairwise (tree) order: better rounding
//! than a running sum, and the order never depends on thread count.

use crate::error::{Error, Result};

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn add_assign(acc: &mut [f64], v: &[f64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x;
    }
}

/// Componentwise sum of `rows` in pairwise order. `rows` must be nonempty
/// and of uniform length (checked by callers).
pub(crate) fn pairwise_row_sum(rows: &[&[f64]]) -> Vec<f64> {
    debug_assert!(!rows.is_empty());
    if rows.len() <= 8 {
        let mut acc = rows[0].to_vec();
        for row in &rows[1..] {
            add_assign(&mut acc, row);
        }
        return acc;
    }
    let mid = rows.len() / 2;
    let mut left = pairwise_row_sum(&rows[..mid]);
    let right = pairwise_row_sum(&rows[mid..]);
    add_assign(&mut left, &right);
    left
}

/// Componentwise mean of `rows`; `what` names the set in error messages.
pub(crate) fn mean_rows(rows: &[&[f64]], what: &'static str) -> Result<Vec<f64>> {
    let first = rows.first().ok_or(Error::EmptySet { what })?;
    let dim = first.len();
    for row in rows {
        check_dims(dim, row.len())?;
    }
    let n = rows.len() as f64;
    let mut sum = pairwise_row_sum(rows);
    for x in &mut sum {
        *x /= n;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_sequential() {
        let rows: Vec<Vec<f64>> = (0..37).map(|i| vec![i as f64, -2.0 * i as f64]).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let sum = pairwise_row_sum(&refs);
        let expect0: f64 = (0..37).map(|i| i as f64).sum();
        assert!((sum[0] - expect0).abs() < 1e-12);
        assert!((sum[1] + 2.0 * expect0).abs() < 1e-12);
    }

    #[test]
    fn mean_rejects_ragged_rows() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![3.0]];
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        assert!(matches!(
            mean_rows(&refs, "rows"),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }
}
