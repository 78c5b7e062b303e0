use super::kernels::interval;
use super::{integrate, Estimate, QuadratureSpec};
use crate::analytic::stationary_mm1;
use crate::error::Result;
use crate::metrics::{Method, MetricSet};

/// Joint density of the previous system time `T_{i-1}` and the next
/// inter-departure time `Y_i` in the stationary FCFS M/M/1 queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDensityTY {
    pub lambda: f64,
    pub mu: f64,
}

impl JointDensityTY {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        stationary_mm1(lambda, mu)?;
        Ok(Self { lambda, mu })
    }

    /// `f_{T,Y}(y, t)`.
    pub fn density(&self, y: f64, t: f64) -> f64 {
        if y < 0.0 || t < 0.0 {
            return 0.0;
        }
        let (l, m) = (self.lambda, self.mu);
        (m * m - l * m) * (l * t - m * y - m * t).exp() - m * m * (-m * y - m * t).exp()
            + l * m * (-l * y - m * t).exp()
    }

    /// Marginal density of the system time, exponential with rate `mu - lambda`.
    pub fn system_time_density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let r = self.mu - self.lambda;
        r * (-r * t).exp()
    }

    /// Truncation points `(t_max, y_max)` leaving at most `tail` mass beyond
    /// each axis (with margin for the polynomial weights).
    pub fn truncation(&self, tail: f64) -> (f64, f64) {
        let decades = -tail.ln() + 12.0;
        (decades / (self.mu - self.lambda), decades / self.lambda.min(self.mu))
    }
}

/// M/M/1 metrics by two-dimensional quadrature over `f_{T,Y}`.
///
/// Average overage is `lambda E[Q]` and overage probability `lambda E[eps]`,
/// both integrating the per-interval overage over `{t < H, y > H - t}` and
/// `{t >= H}`. The stale probability is `exp(-(mu - lambda) H)`.
pub fn mm1_metrics(lambda: f64, mu: f64, h: f64, spec: &QuadratureSpec) -> Result<MetricSet> {
    spec.validate()?;
    let joint = JointDensityTY::new(lambda, mu)?;
    let (t_max, y_max) = joint.truncation(spec.tail_quantile);
    let inner = spec.inner();

    // channels: [eps(H), area(H), area(0)]
    let per_packet: Estimate<3> = integrate(
        |t| {
            // y below H - t contributes nothing at threshold H but does at 0
            integrate(
                |y| {
                    let f = joint.density(y, t);
                    let [e, q] = interval(t, y, h);
                    let [_, q0] = interval(t, y, 0.0);
                    Ok([e * f, q * f, q0 * f].into())
                },
                0.0,
                y_max,
                &[h - t],
                &inner,
            )
        },
        0.0,
        t_max,
        &[h],
        spec,
    )?;

    let [eps, area, area0] = per_packet.value;
    Ok(MetricSet {
        overage_probability: lambda * eps,
        average_overage: lambda * area,
        stale_update_probability: (-(mu - lambda) * h).exp(),
        average_aoi: lambda * area0,
        delivery_probability: 1.0,
        method: Method::Quadrature,
        fallback: None,
    })
}
