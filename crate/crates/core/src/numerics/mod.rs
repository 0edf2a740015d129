//! Estimation primitives shared by the run-value models.

mod design;
mod logistic;
mod ols;
mod quantile;
mod rng;
mod smoother;

pub use design::{DesignBuilder, DesignMatrix};
pub use logistic::{bernoulli_log_likelihood, logistic_fit, sigmoid, LogisticFit, LogisticOptions};
pub use ols::{ols_fit, LinearFit, RANK_TOL};
pub use quantile::{empirical_quantiles, quantile_sorted};
pub use rng::SeededRng;
pub use smoother::{scott_bandwidth, smooth_out_probability, Bandwidth, SmoothedSurface, MIN_WEIGHT};
