//! Benchmark fixtures shared by the criterion benches.

use overage::{QueueModel, Scenario, ServiceDistribution};

/// The reference point lambda = 1, E[S] = 1/2, H = 1.
pub fn reference(model: QueueModel, gamma_shape: Option<f64>) -> Scenario {
    let service = match gamma_shape {
        Some(alpha) => ServiceDistribution::gamma_with_mean(alpha, 0.5),
        None => ServiceDistribution::exponential(2.0),
    }
    .expect("valid service");
    Scenario::new(model, 1.0, service, 1.0).expect("valid scenario")
}
