use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sample quantiles by linear interpolation between order statistics
/// (Hyndman-Fan type 7): `h = (n - 1) p`, `q = x[floor h] + frac(h) * gap`.
pub fn empirical_quantiles<T: Real>(values: &[T], probs: &[T]) -> Result<Vec<T>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("quantiles of an empty sample"));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= T::zero() && **p <= T::one())) {
        return Err(Error::Probability(format!("quantile probability {p}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(probs.iter().map(|&p| quantile_sorted(&sorted, p)).collect())
}

/// Type-7 quantile of an already sorted, non-empty slice.
pub fn quantile_sorted<T: Real>(sorted: &[T], p: T) -> T {
    let n = sorted.len();
    let h = T::of_usize(n - 1) * p;
    let lo = h.floor().to_usize().unwrap_or(0).min(n - 1);
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - T::of_usize(lo)) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_and_extremes() {
        let q = empirical_quantiles(&[4.0, 1.0, 3.0, 2.0], &[0.5, 0.0, 1.0]).unwrap();
        assert_eq!(q, vec![2.5, 1.0, 4.0]);
    }

    #[test]
    fn errors() {
        assert!(empirical_quantiles::<f64>(&[], &[0.5]).is_err());
        assert!(empirical_quantiles(&[1.0], &[1.5]).is_err());
    }
}
