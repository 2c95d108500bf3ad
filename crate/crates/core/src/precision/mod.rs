//! Arbitrary-precision reals and truncated Taylor-series algebra.

mod real;
mod series;

pub use real::{BigReal, Precision};
pub use series::{SeriesOp, TaylorSeries};
