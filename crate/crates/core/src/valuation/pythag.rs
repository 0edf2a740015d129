use crate::error::{Error, Result};
use crate::scalar::Real;

/// Runs equivalent to one win over a 162-game season: `2r / (81p)`.
pub fn runs_per_win<T: Real>(p: T, r: T) -> Result<T> {
    if !(p > T::zero()) {
        return Err(Error::NonPositive("pythagorean exponent"));
    }
    if !(r > T::zero()) {
        return Err(Error::NonPositive("runs per season"));
    }
    Ok((r + r) / (T::of(81.0) * p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PythagWpct<T> {
    pub wpct: T,
    /// Partial derivatives with respect to runs scored and runs allowed.
    pub gradient: [T; 2],
}

/// Expected winning percentage `1 / (1 + (RA/RS)^p)` and its gradient.
pub fn pythag_wpct<T: Real>(rs: T, ra: T, p: T) -> Result<PythagWpct<T>> {
    if !(rs > T::zero()) || !(ra > T::zero()) {
        return Err(Error::NonPositive("runs scored and allowed"));
    }
    if !(p > T::zero()) {
        return Err(Error::NonPositive("pythagorean exponent"));
    }
    let ratio = (ra / rs).powf(p);
    let denom = T::one() + ratio;
    let common = p * ratio / (denom * denom);
    Ok(PythagWpct {
        wpct: T::one() / denom,
        gradient: [common / rs, -common / ra],
    })
}
