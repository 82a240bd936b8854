//! Interpolation and extension conditions for finite datasets of function
//! records `(x, f, g)` and operator records `(x, t)`.
//!
//! The crate decides whether a dataset satisfies the classical pairwise
//! conditions of a function or operator class, and their one-point
//! strengthenings. It also certifies the sum-of-squares reformulations with
//! a small PSD feasibility solver, computes extensions numerically as an
//! independent oracle, and classifies two-dimensional parameter regions.

pub mod certify;
pub mod conditions;
pub mod dataset;
pub mod dispatch;
pub mod engine;
pub mod extend;
pub mod error;
pub mod optim;
pub mod oracle;
pub mod region;
pub mod strengthened;

pub use dataset::*;
pub use error::{Error, Result};
