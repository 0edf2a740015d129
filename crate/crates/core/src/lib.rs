//! Conservation-of-runs player valuation for baseball play-by-play data.
//!
//! Every plate appearance is worth a run value `delta` (change in expected
//! runs plus runs scored). The offense splits `delta` between the hitter and
//! the baserunners, the defense splits `-delta` between the pitcher and the
//! nine fielders, and per-player sums are compared to a replacement-level
//! shadow to give wins above replacement.
//!
//! The estimation kernels in [`numerics`] and the run expectancy matrix are
//! generic over the scalar type; the aliases below fix the concrete types the
//! valuation pipeline runs on.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covariates;
pub mod defense;
pub mod error;
pub mod numerics;
pub mod offense;
pub mod pbp;
pub mod pipeline;
pub mod run_expectancy;
pub mod scalar;
pub mod uncertainty;
pub mod valuation;

pub use error::{Error, Result};
pub use scalar::Real;

/// Scalar the valuation pipeline runs on.
pub type Scalar = f64;
/// Exact scalar for hand-checked run expectancy fixtures.
pub type Exact = num_rational::Ratio<i64>;

pub type Design = numerics::DesignMatrix<Scalar>;
pub type OlsFit = numerics::LinearFit<Scalar>;
pub type LogitFit = numerics::LogisticFit<Scalar>;
pub type OutSurface = numerics::SmoothedSurface<Scalar>;
pub type ReMatrix = run_expectancy::RunExpectancyMatrix<Scalar>;
pub type ExactReMatrix = run_expectancy::RunExpectancyMatrix<Exact>;
