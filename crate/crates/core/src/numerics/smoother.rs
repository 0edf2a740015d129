//! Nadaraya-Watson estimate of a binary response over the plane.
//!
//! The estimate at `(x, y)` is the kernel-weighted mean of the training
//! indicators under a product Gaussian kernel. Kernel normalizing constants
//! cancel, so weights are the bare `exp(-d^2 / 2)` terms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this total kernel weight the estimate falls back to the overall
/// rate.
pub const MIN_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bandwidth<T> {
    pub x: T,
    pub y: T,
}

#[derive(Debug, Clone)]
pub struct SmoothedSurface<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    outs: Vec<T>,
    bandwidth: Bandwidth<T>,
    global_rate: T,
    lo: T,
    hi: T,
}

/// Scott's rule per axis for two dimensions: `sd * n^(-1/6)`.
pub fn scott_bandwidth<T: Real>(points: &[(T, T)]) -> Option<Bandwidth<T>> {
    if points.len() < 2 {
        return None;
    }
    let n = T::of_usize(points.len());
    let sd = |vals: Vec<T>| {
        let mean = vals.iter().copied().sum::<T>() / n;
        (vals.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / (n - T::one())).sqrt()
    };
    let factor = n.powf(T::of(-1.0 / 6.0));
    let bx = sd(points.iter().map(|p| p.0).collect()) * factor;
    let by = sd(points.iter().map(|p| p.1).collect()) * factor;
    (bx > T::zero() && by > T::zero()).then_some(Bandwidth { x: bx, y: by })
}

pub fn smooth_out_probability<T: Real>(
    points: &[((T, T), bool)],
    bandwidth: Bandwidth<T>,
) -> Result<SmoothedSurface<T>> {
    if !(bandwidth.x > T::zero() && bandwidth.y > T::zero()) {
        return Err(Error::Bandwidth(
            bandwidth.x.to_f64().unwrap_or(f64::NAN),
            bandwidth.y.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput("smoother needs at least one point"));
    }
    let outs: Vec<T> = points
        .iter()
        .map(|p| if p.1 { T::one() } else { T::zero() })
        .collect();
    let global_rate = outs.iter().copied().sum::<T>() / T::of_usize(outs.len());
    let lo = outs.iter().copied().fold(T::one(), T::min);
    let hi = outs.iter().copied().fold(T::zero(), T::max);
    Ok(SmoothedSurface {
        xs: points.iter().map(|p| p.0 .0).collect(),
        ys: points.iter().map(|p| p.0 .1).collect(),
        outs,
        bandwidth,
        global_rate,
        lo,
        hi,
    })
}

impl<T: Real> SmoothedSurface<T> {
    pub fn bandwidth(&self) -> Bandwidth<T> {
        self.bandwidth
    }

    pub fn global_rate(&self) -> T {
        self.global_rate
    }

    pub fn len(&self) -> usize {
        self.outs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outs.is_empty()
    }

    fn finish(&self, num: T, den: T) -> T {
        if den < T::of(MIN_WEIGHT) {
            self.global_rate
        } else {
            (num / den).max(self.lo).min(self.hi)
        }
    }

    pub fn evaluate(&self, x: T, y: T) -> T {
        let half = T::of(0.5);
        let (mut num, mut den) = (T::zero(), T::zero());
        for i in 0..self.outs.len() {
            let dx = (x - self.xs[i]) / self.bandwidth.x;
            let dy = (y - self.ys[i]) / self.bandwidth.y;
            let w = (-half * (dx * dx + dy * dy)).exp();
            num = num + w * self.outs[i];
            den = den + w;
        }
        self.finish(num, den)
    }

    /// Estimates on the grid `gx x gy`, row-major in `gy` (index
    /// `iy * gx.len() + ix`). Uses the kernel's separability: each axis
    /// factor is computed once per (grid line, point).
    pub fn evaluate_grid(&self, gx: &[T], gy: &[T]) -> Vec<T> {
        let half = T::of(0.5);
        let axis = |grid: &[T], coords: &[T], h: T| -> Vec<Vec<T>> {
            grid.iter()
                .map(|&g| {
                    coords
                        .iter()
                        .map(|&c| {
                            let d = (g - c) / h;
                            (-half * d * d).exp()
                        })
                        .collect()
                })
                .collect()
        };
        let kx = axis(gx, &self.xs, self.bandwidth.x);
        let ky = axis(gy, &self.ys, self.bandwidth.y);
        let mut out = Vec::with_capacity(gx.len() * gy.len());
        for row in &ky {
            let weighted: Vec<T> = row.iter().zip(&self.outs).map(|(&k, &o)| k * o).collect();
            for col in &kx {
                let den = col.iter().zip(row).map(|(&a, &b)| a * b).sum();
                let num = col.iter().zip(&weighted).map(|(&a, &b)| a * b).sum();
                out.push(self.finish(num, den));
            }
        }
        out
    }
}
