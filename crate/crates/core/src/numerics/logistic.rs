//! Logistic regression by iteratively reweighted least squares.
//!
//! Each Newton step is solved as a weighted least squares problem through
//! [`ols_fit`], so collinear columns are handled the same way as in the
//! linear models. Non-constant columns are standardized internally; the
//! separation guard applies to the coefficient norm on that scale.

use super::{ols_fit, DesignMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct LogisticOptions<T> {
    pub max_iter: usize,
    pub tol: T,
    /// Standardized coefficient norm beyond which the data are treated as
    /// separated.
    pub separation_norm: T,
}

impl<T: Real> Default for LogisticOptions<T> {
    fn default() -> Self {
        Self {
            max_iter: 50,
            tol: T::of(1e-9),
            separation_norm: T::of(30.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit<T> {
    pub names: Vec<String>,
    /// Coefficients on the caller's (unstandardized) design.
    pub coefficients: Vec<T>,
    pub converged: bool,
    /// Iteration stopped because the coefficients diverged; they are capped
    /// at the separation norm.
    pub separated: bool,
    pub iterations: usize,
    /// Max-norm of the mean score on the standardized design.
    pub score_norm: T,
    pub log_likelihood: T,
}

impl<T: Real> LogisticFit<T> {
    pub fn linear_predictor(&self, row: &[T]) -> T {
        row.iter().zip(&self.coefficients).map(|(&x, &b)| x * b).sum()
    }

    pub fn predict(&self, row: &[T]) -> T {
        sigmoid(self.linear_predictor(row))
    }
}

pub fn sigmoid<T: Real>(eta: T) -> T {
    if eta >= T::zero() {
        T::one() / (T::one() + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (T::one() + e)
    }
}

/// `log(1 + exp(eta))` without overflow.
fn softplus<T: Real>(eta: T) -> T {
    eta.max(T::zero()) + (-eta.abs()).exp().ln_1p()
}

/// Bernoulli log-likelihood of `y` at linear predictors `eta`.
pub fn bernoulli_log_likelihood<T: Real>(eta: &[T], y: &[bool]) -> T {
    eta.iter()
        .zip(y)
        .map(|(&e, &yi)| if yi { e - softplus(e) } else { -softplus(e) })
        .sum()
}

struct Standardization<T> {
    center: Vec<T>,
    scale: Vec<T>,
    constant: Vec<bool>,
}

impl<T: Real> Standardization<T> {
    fn of(x: &DesignMatrix<T>) -> Self {
        let n = T::of_usize(x.rows());
        let cols: Vec<Vec<T>> = (0..x.cols()).map(|j| x.column(j)).collect();
        let constant: Vec<bool> = cols.iter().map(|c| c.iter().all(|&v| v == c[0])).collect();
        let centered = constant.iter().any(|&c| c);
        let mut center = Vec::new();
        let mut scale = Vec::new();
        for (c, &is_const) in cols.iter().zip(&constant) {
            if is_const {
                center.push(T::zero());
                scale.push(T::one());
                continue;
            }
            let mean = c.iter().copied().sum::<T>() / n;
            let var = c.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
            center.push(if centered { mean } else { T::zero() });
            scale.push(var.sqrt());
        }
        Self {
            center,
            scale,
            constant,
        }
    }

    fn apply(&self, x: &DesignMatrix<T>) -> Vec<T> {
        let p = x.cols();
        let mut z = Vec::with_capacity(x.rows() * p);
        for i in 0..x.rows() {
            for (j, &v) in x.row(i).iter().enumerate() {
                z.push((v - self.center[j]) / self.scale[j]);
            }
        }
        z
    }

    fn to_original(&self, theta: &[T], x: &DesignMatrix<T>) -> Vec<T> {
        let mut beta: Vec<T> = theta.iter().zip(&self.scale).map(|(&t, &s)| t / s).collect();
        let shift: T = beta.iter().zip(&self.center).map(|(&b, &c)| b * c).sum();
        if let Some(c) = self.constant.iter().position(|&k| k) {
            let level = x.get(0, c);
            beta[c] = beta[c] - shift / level;
        }
        beta
    }
}

pub fn logistic_fit<T: Real>(
    x: &DesignMatrix<T>,
    y: &[bool],
    opts: LogisticOptions<T>,
) -> Result<LogisticFit<T>> {
    let n = x.rows();
    let p = x.cols();
    if n == 0 || p == 0 {
        return Err(Error::EmptyInput("logistic regression needs data"));
    }
    if y.len() != n {
        return Err(Error::Design(format!("{n} design rows but {} responses", y.len())));
    }
    if y.iter().all(|&v| v) || y.iter().all(|&v| !v) {
        return Err(Error::SingleClass);
    }

    let std = Standardization::of(x);
    let z = std.apply(x);
    let zrow = |i: usize| &z[i * p..(i + 1) * p];
    let eta_of = |theta: &[T]| -> Vec<T> {
        (0..n)
            .map(|i| zrow(i).iter().zip(theta).map(|(&a, &b)| a * b).sum())
            .collect()
    };
    let nf = T::of_usize(n);
    let score_of = |eta: &[T]| -> T {
        let mut s = vec![T::zero(); p];
        for i in 0..n {
            let r = (if y[i] { T::one() } else { T::zero() }) - sigmoid(eta[i]);
            for (sj, &zij) in s.iter_mut().zip(zrow(i)) {
                *sj = *sj + zij * r;
            }
        }
        s.into_iter().fold(T::zero(), |m, v| m.max((v / nf).abs()))
    };

    let w_floor = T::of(1e-12);
    let mut theta = vec![T::zero(); p];
    let mut eta = vec![T::zero(); n];
    let mut ll = bernoulli_log_likelihood(&eta, y);
    let mut converged = false;
    let mut separated = false;
    let mut iterations = 0;

    for it in 1..=opts.max_iter {
        iterations = it;
        let mut wz = Vec::with_capacity(n * p);
        let mut wr = Vec::with_capacity(n);
        for i in 0..n {
            let pi = sigmoid(eta[i]);
            let w = (pi * (T::one() - pi)).max(w_floor);
            let yi = if y[i] { T::one() } else { T::zero() };
            let sw = w.sqrt();
            wr.push(sw * (eta[i] + (yi - pi) / w));
            wz.extend(zrow(i).iter().map(|&v| v * sw));
        }
        let weighted = DesignMatrix::unchecked(x.names().to_vec(), n, wz, x.has_intercept());
        let mut next = ols_fit(&weighted, &wr)?.coefficients;

        let mut next_eta = eta_of(&next);
        let mut next_ll = bernoulli_log_likelihood(&next_eta, y);
        let slack = T::of(1e-12) * (T::one() + ll.abs());
        let mut halvings = 0;
        while next_ll < ll - slack && halvings < 30 {
            for (nx, &t) in next.iter_mut().zip(&theta) {
                *nx = (*nx + t) / (T::one() + T::one());
            }
            next_eta = eta_of(&next);
            next_ll = bernoulli_log_likelihood(&next_eta, y);
            halvings += 1;
        }

        let step = next
            .iter()
            .zip(&theta)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        theta = next;
        eta = next_eta;
        ll = next_ll;

        let norm = theta.iter().map(|&t| t * t).sum::<T>().sqrt();
        if norm > opts.separation_norm {
            let shrink = opts.separation_norm / norm;
            theta.iter_mut().for_each(|t| *t = *t * shrink);
            eta = eta_of(&theta);
            ll = bernoulli_log_likelihood(&eta, y);
            separated = true;
            break;
        }
        if step < opts.tol && score_of(&eta) < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(LogisticFit {
        names: x.names().to_vec(),
        coefficients: std.to_original(&theta, x),
        converged,
        separated,
        iterations,
        score_norm: score_of(&eta),
        log_likelihood: ll,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(names: &[&str], rows: usize, values: Vec<f64>) -> DesignMatrix<f64> {
        DesignMatrix::new(names.iter().map(|s| s.to_string()).collect(), rows, values, true).unwrap()
    }

    #[test]
    fn symmetric_data_gives_null_model() {
        let x = design(&["c", "x"], 4, vec![1.0, -1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0]);
        let fit = logistic_fit(&x, &[false, true, true, false], Default::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.coefficients.iter().all(|c| c.abs() < 1e-12), "{:?}", fit.coefficients);
    }

    #[test]
    fn intercept_only_recovers_logit() {
        let x = design(&["c"], 10, vec![1.0; 10]);
        let y: Vec<bool> = (0..10).map(|i| i < 3).collect();
        let fit = logistic_fit(&x, &y, Default::default()).unwrap();
        let expected = (0.3f64 / 0.7).ln();
        assert!((fit.coefficients[0] - expected).abs() < 1e-6);
        assert!(fit.converged && fit.score_norm < 1e-9);
    }

    #[test]
    fn single_class_is_rejected() {
        let x = design(&["c"], 3, vec![1.0; 3]);
        assert!(matches!(
            logistic_fit(&x, &[true, true, true], Default::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn complete_separation_is_flagged() {
        let xs = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
        let values: Vec<f64> = xs.iter().flat_map(|&v| [1.0, v]).collect();
        let x = design(&["c", "x"], 6, values);
        let y: Vec<bool> = xs.iter().map(|&v| v > 0.0).collect();
        let fit = logistic_fit(&x, &y, Default::default()).unwrap();
        assert!(fit.separated && !fit.converged);
        assert!(fit.coefficients.iter().all(|c| c.is_finite()));
        let p: Vec<f64> = (0..6).map(|i| fit.predict(x.row(i))).collect();
        assert!(p.windows(2).all(|w| w[0] <= w[1]));
        assert!(p[2] < 0.5 && p[3] > 0.5);
    }

    #[test]
    fn uncentered_design_without_intercept() {
        let xs = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
        let y = [false, true, false, false, true, true, false, true];
        let x = DesignMatrix::new(vec!["x".into()], 8, xs.to_vec(), false).unwrap();
        let fit = logistic_fit(&x, &y, Default::default()).unwrap();
        assert!(fit.converged);
        // first-order condition on the original scale
        let score: f64 = xs
            .iter()
            .zip(&y)
            .map(|(&xi, &yi)| xi * (f64::from(u8::from(yi)) - sigmoid(fit.coefficients[0] * xi)))
            .sum();
        assert!(score.abs() < 1e-8);
    }
}
