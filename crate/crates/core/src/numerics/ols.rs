//! Least squares through Householder QR with rank detection.
//!
//! Columns are processed left to right. A column whose component orthogonal
//! to the already accepted columns falls below `RANK_TOL` times the largest
//! pivot seen so far (or its own norm, for the first columns) is declared
//! collinear: it is dropped and its coefficient pinned at zero. Later-indexed
//! columns therefore give way to earlier ones.

use super::DesignMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const RANK_TOL: f64 = 1e-10;

/// Ordinary least squares estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit<T> {
    pub names: Vec<String>,
    /// One entry per design column; dropped columns hold zero.
    pub coefficients: Vec<T>,
    /// Names of columns removed as collinear.
    pub dropped: Vec<String>,
    pub fitted: Vec<T>,
    /// `y - X b`, recomputed from the original design.
    pub residuals: Vec<T>,
}

impl<T: Real> LinearFit<T> {
    pub fn coefficient(&self, name: &str) -> Option<T> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|j| self.coefficients[j])
    }

    pub fn rank(&self) -> usize {
        self.names.len() - self.dropped.len()
    }
}

pub fn ols_fit<T: Real>(x: &DesignMatrix<T>, y: &[T]) -> Result<LinearFit<T>> {
    let n = x.rows();
    let p = x.cols();
    if n == 0 || p == 0 {
        return Err(Error::EmptyInput("least squares needs at least one row and column"));
    }
    if y.len() != n {
        return Err(Error::Design(format!("{n} design rows but {} responses", y.len())));
    }
    let tol = T::of(RANK_TOL);

    // column-major working copy
    let mut a: Vec<Vec<T>> = (0..p).map(|j| x.column(j)).collect();
    let mut qty = y.to_vec();
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped = Vec::new();
    let mut max_pivot = T::zero();

    for j in 0..p {
        let k = kept.len();
        let original = norm(&x.column(j));
        let tail = if k < n { norm(&a[j][k..]) } else { T::zero() };
        if tail <= tol * max_pivot.max(original) || k >= n {
            dropped.push(j);
            continue;
        }
        // Householder reflector zeroing a[j][k+1..]
        let x0 = a[j][k];
        let alpha = if x0 >= T::zero() { -tail } else { tail };
        let mut v: Vec<T> = a[j][k..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm2: T = v.iter().map(|&t| t * t).sum();
        if vnorm2 > T::zero() {
            let reflect = |col: &mut [T]| {
                let s: T = v.iter().zip(col.iter()).map(|(&a, &b)| a * b).sum();
                let f = (s + s) / vnorm2;
                for (c, &vi) in col.iter_mut().zip(&v) {
                    *c = *c - f * vi;
                }
            };
            for col in a.iter_mut().skip(j + 1) {
                reflect(&mut col[k..]);
            }
            reflect(&mut qty[k..]);
        }
        a[j][k] = alpha;
        for t in a[j][k + 1..].iter_mut() {
            *t = T::zero();
        }
        max_pivot = max_pivot.max(alpha.abs());
        kept.push(j);
    }

    if kept.is_empty() {
        return Err(Error::AllColumnsDropped);
    }

    // back substitution on the kept columns: R b = Q'y
    let r = kept.len();
    let mut b_kept = vec![T::zero(); r];
    for row in (0..r).rev() {
        let mut s = qty[row];
        for col in row + 1..r {
            s = s - a[kept[col]][row] * b_kept[col];
        }
        b_kept[row] = s / a[kept[row]][row];
    }
    let mut coefficients = vec![T::zero(); p];
    for (slot, &j) in kept.iter().enumerate() {
        coefficients[j] = b_kept[slot];
    }
    let fitted = x.mul_vec(&coefficients);
    let residuals = y.iter().zip(&fitted).map(|(&yi, &fi)| yi - fi).collect();
    Ok(LinearFit {
        names: x.names().to_vec(),
        coefficients,
        dropped: dropped.iter().map(|&j| x.names()[j].clone()).collect(),
        fitted,
        residuals,
    })
}

fn norm<T: Real>(v: &[T]) -> T {
    // scaled to avoid overflow on large entries
    let scale = v.iter().fold(T::zero(), |m, &t| m.max(t.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    scale * v.iter().map(|&t| (t / scale) * (t / scale)).sum::<T>().sqrt()
}
