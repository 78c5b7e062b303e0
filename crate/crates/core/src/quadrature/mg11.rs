use super::kernels::interval_after_idle;
use super::{expect_service, Estimate, QuadratureSpec, Truncated};
use crate::analytic::stationary_mg11;
use crate::error::{Error, Result};
use crate::metrics::{Method, MetricSet};
use crate::scenario::{QueueModel, Scenario};

/// M/G/1/1 metrics by quadrature.
///
/// Each delivered packet `i-1` was an idle arrival, so `T_{i-1} = S_{i-1}` and
/// the next inter-departure time is `X + S_i` with `X ~ Exp(lambda)`. The
/// `X` axis is integrated in closed form; `S_{i-1}` and `S_i` numerically.
pub fn mg11_metrics(scenario: &Scenario, spec: &QuadratureSpec) -> Result<MetricSet> {
    if scenario.model() != QueueModel::Mg11 {
        return Err(Error::Incompatible {
            model: "mg11 quadrature",
            service: scenario.model().as_str(),
        });
    }
    spec.validate()?;
    let lambda = scenario.arrival_rate();
    let h = scenario.threshold();
    let dist = scenario.service();
    let st = stationary_mg11(lambda, dist)?;
    let inner = spec.inner();
    let law = Truncated::new(dist, spec);

    // channels: [eps(H), area(H), eps(0), area(0)]
    let per_interval: Estimate<4> = expect_service(&law, 0.0, f64::INFINITY, &[h], spec, |prev| {
        let kink = h - prev;
        expect_service(&law, 0.0, f64::INFINITY, &[kink], &inner, |s| {
            let [e, q] = interval_after_idle(prev, s, h, lambda);
            let [e0, q0] = interval_after_idle(prev, s, 0.0, lambda);
            Ok([e, q, e0, q0].into())
        })
    })?;

    let [eps, area, _eps0, area0] = per_interval.value;
    let rate = lambda * st.p_idle;
    Ok(MetricSet {
        overage_probability: rate * eps,
        average_overage: rate * area,
        stale_update_probability: 1.0 - st.p_idle * dist.cdf(h),
        average_aoi: rate * area0,
        delivery_probability: st.delivery_probability,
        method: Method::Quadrature,
        fallback: None,
    })
}
