//! Threshold-based freshness metrics for status-update queues.
//!
//! Three metrics are computed for the M/G/1/1, M/G/1/2* and M/M/1 queues:
//! the overage probability (fraction of time the age of information exceeds
//! a threshold `H`), the average overage (time average of `max(age - H, 0)`)
//! and the stale update probability (fraction of generated updates that are
//! dropped or arrive older than `H`).
//!
//! Each metric can be obtained three independent ways:
//! - [`analytic`]: closed forms for exponential service,
//! - [`quadrature`]: numerical integration for any [`ServiceDistribution`],
//! - [`sim`]: event-driven simulation with batch-means confidence intervals.

pub mod analytic;
pub mod distribution;
pub mod error;
pub mod metrics;
pub mod quadrature;
pub mod rng;
pub mod scenario;
pub mod sim;
pub mod special;

pub use distribution::{Evaluate, Law, ServiceDistribution, ServiceSampler};
pub use error::{Error, Result};
pub use metrics::{Fallback, Method, Metric, MetricSet};
pub use quadrature::QuadratureSpec;
pub use rng::RandomSource;
pub use scenario::{QueueModel, Scenario};
