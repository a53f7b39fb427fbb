//! Nonlinear autoregressive (NAR) polynomial system identification with
//! rigorous interval uncertainty propagation.
//!
//! The crate fits NAR polynomial models to sampled signals and carries
//! bounded measurement uncertainty through the whole estimation chain:
//!
//! - [`interval`] — self-contained interval arithmetic with outward
//!   rounding, plus a verified enclosure solver for interval linear
//!   systems;
//! - [`signal`] — signal ingestion, autocovariance analysis, decimation
//!   and identification/validation splitting;
//! - [`terms`] — candidate monomial terms and regressor matrices (point
//!   and interval valued);
//! - [`estimation`] — error-reduction-ratio term ranking by forward
//!   orthogonal least squares, Akaike-criterion structure selection, and
//!   point/interval parameter estimation;
//! - [`validation`] — k-step-ahead and free-run prediction, normalized
//!   RMSE (point and interval) and residual whiteness diagnostics;
//! - [`neural`] — a small NAR multilayer perceptron trained with
//!   Levenberg–Marquardt, for comparison against the polynomial model;
//! - [`pipeline`] — the end-to-end identification pipeline behind the
//!   `narid` binary, plus a synthetic data generator.
//!
//! Interval outputs (parameters, predictions, RMSE) are guaranteed to
//! enclose their point counterparts computed from midpoint data; the
//! `acceptance` integration test suite exercises those guarantees.
//!
//! See the `examples/` directory for one runnable example per major
//! capability; `examples/full_pipeline.rs` strings them all together.

pub mod error;
pub mod estimation;
pub mod interval;
pub mod neural;
pub mod pipeline;
pub mod signal;
pub mod terms;
pub mod validation;

pub use error::{Error, Result};
pub use interval::Interval;
