use super::kernels::{interval, interval_after_idle};
use super::{expect_equilibrium, expect_service, Estimate, QuadratureSpec, Truncated};
use crate::analytic::stationary_mg12star;
use crate::error::{Error, Result};
use crate::metrics::{Method, MetricSet};
use crate::scenario::{QueueModel, Scenario};

/// Expected `[eps, area]` of the interval that follows a departure with
/// system time `t`, for the two ways the next packet can be obtained:
/// `[buffered eps, buffered area, after-idle eps, after-idle area]`.
///
/// Buffered: a packet was waiting, so `Y = S`. After idle: the buffer was
/// empty, so `Y = X + S` with `X ~ Exp(lambda)`.
fn next_interval(law: &Truncated, lambda: f64, t: f64, h: f64, spec: &QuadratureSpec) -> Result<Estimate<4>> {
    let dist = &law.dist;
    if t >= h {
        // polynomial in S: exact through the first two moments
        let (m1, m2) = (dist.mean(), dist.second_moment());
        let inv = 1.0 / lambda;
        let ey = m1 + inv;
        let ey2 = m2 + 2.0 * m1 * inv + 2.0 * inv * inv;
        return Ok(Estimate::exact([
            m1,
            0.5 * m2 + m1 * (t - h),
            ey,
            0.5 * ey2 + ey * (t - h),
        ]));
    }
    expect_service(law, 0.0, f64::INFINITY, &[h - t], spec, |s| {
        let [e, q] = interval(t, s, h);
        let [ei, qi] = interval_after_idle(t, s, h, lambda);
        Ok([e, q, ei, qi].into())
    })
}

/// Mixes the two continuations: the next arrival comes during the service
/// of length `service` with probability `1 - e^{-lambda service}`.
fn mix(next: Estimate<4>, lambda: f64, service: f64) -> Estimate<2> {
    let idle = (-lambda * service).exp();
    let [eb, qb, ei, qi] = next.value;
    Estimate {
        value: [(1.0 - idle) * eb + idle * ei, (1.0 - idle) * qb + idle * qi],
        error: next.error,
    }
}

fn join(a: Estimate<2>, b: Estimate<2>) -> [f64; 4] {
    [a.value[0], a.value[1], b.value[0], b.value[1]]
}

/// M/G/1/2* metrics by quadrature.
///
/// Idle arrivals start service at once (`T = S`). Busy arrivals wait the
/// residual service `W` (equilibrium law) and are delivered only if no
/// further arrival replaces them first (probability `e^{-lambda W}`), in
/// which case `T = W + S`.
pub fn mg12star_metrics(scenario: &Scenario, spec: &QuadratureSpec) -> Result<MetricSet> {
    if scenario.model() != QueueModel::Mg12Star {
        return Err(Error::Incompatible {
            model: "mg12star quadrature",
            service: scenario.model().as_str(),
        });
    }
    spec.validate()?;
    let lambda = scenario.arrival_rate();
    let h = scenario.threshold();
    let dist = scenario.service();
    let st = stationary_mg12star(lambda, dist)?;
    let inner = spec.inner();
    let law = Truncated::new(dist, spec);
    let innermost = inner.inner();

    // channels: [eps(H), area(H), eps(0), area(0)]
    let idle: Estimate<4> = expect_service(&law, 0.0, f64::INFINITY, &[h], spec, |s_prev| {
        let at_h = mix(next_interval(&law, lambda, s_prev, h, &inner)?, lambda, s_prev);
        let at_0 = mix(next_interval(&law, lambda, s_prev, 0.0, &inner)?, lambda, s_prev);
        Ok(Estimate {
            value: join(at_h, at_0),
            error: at_h.error + at_0.error,
        })
    })?;

    // channels: [eps(H), area(H), eps(0), area(0), delivered with T > H]
    let busy: Estimate<5> = expect_service(&law, 0.0, f64::INFINITY, &[h], spec, |s_prev| {
        expect_equilibrium(&law, 0.0, f64::INFINITY, &[h - s_prev], &inner, |w| {
            let kept = (-lambda * w).exp();
            let t = w + s_prev;
            let at_h = mix(next_interval(&law, lambda, t, h, &innermost)?, lambda, s_prev);
            let at_0 = mix(next_interval(&law, lambda, t, 0.0, &innermost)?, lambda, s_prev);
            let [a, b, c, d] = join(at_h, at_0);
            let stale = if t > h { 1.0 } else { 0.0 };
            Ok(Estimate {
                value: [a, b, c, d, stale].map(|v| v * kept),
                error: (at_h.error + at_0.error) * kept,
            })
        })
    })?;

    let [ei, qi, _, qi0] = idle.value;
    let [eb, qb, _, qb0, stale_busy] = busy.value;
    let stale_delivered = st.p_idle * dist.survival(h) + st.p_busy * stale_busy;
    Ok(MetricSet {
        overage_probability: lambda * (ei * st.p_idle + eb * st.p_busy),
        average_overage: lambda * (qi * st.p_idle + qb * st.p_busy),
        stale_update_probability: 1.0 - st.delivery_probability + stale_delivered,
        average_aoi: lambda * (qi0 * st.p_idle + qb0 * st.p_busy),
        delivery_probability: st.delivery_probability,
        method: Method::Quadrature,
        fallback: None,
    })
}

/// Probability mass of the case regions used by the M/G/1/2* integrals.
///
/// Order within each array: `[T < H & next packet buffered, T < H & next
/// after idle, T >= H & next buffered, T >= H & next after idle]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseMasses {
    pub idle: [f64; 4],
    pub busy: [f64; 4],
    /// Busy arrivals replaced in the buffer before service.
    pub busy_dropped: f64,
}

fn split(t: f64, h: f64, service: f64, lambda: f64) -> [f64; 4] {
    let idle = (-lambda * service).exp();
    if t < h {
        [1.0 - idle, idle, 0.0, 0.0]
    } else {
        [0.0, 0.0, 1.0 - idle, idle]
    }
}

pub fn mg12star_case_masses(scenario: &Scenario, spec: &QuadratureSpec) -> Result<CaseMasses> {
    spec.validate()?;
    let lambda = scenario.arrival_rate();
    let h = scenario.threshold();
    let dist = scenario.service();
    let inner = spec.inner();
    let law = Truncated::new(dist, spec);
    let idle: Estimate<4> = expect_service(&law, 0.0, f64::INFINITY, &[h], spec, |s| {
        Ok(split(s, h, s, lambda).into())
    })?;
    let busy: Estimate<5> = expect_service(&law, 0.0, f64::INFINITY, &[h], spec, |s| {
        expect_equilibrium(&law, 0.0, f64::INFINITY, &[h - s], &inner, |w| {
            let kept = (-lambda * w).exp();
            let [a, b, c, d] = split(w + s, h, s, lambda).map(|v| v * kept);
            Ok([a, b, c, d, 1.0 - kept].into())
        })
    })?;
    let [a, b, c, d, dropped] = busy.value;
    Ok(CaseMasses {
        idle: idle.value,
        busy: [a, b, c, d],
        busy_dropped: dropped,
    })
}
