//! Stationary server-state probabilities and closed-form metrics for
//! exponential service.

use crate::distribution::ServiceDistribution;
use crate::error::{Error, Result};
use crate::metrics::{Fallback, Method, MetricSet};
use crate::quadrature::{self, QuadratureSpec};
use crate::scenario::{QueueModel, Scenario};

/// Relative gap `|lambda - mu| / mu` below which the closed forms are
/// replaced by quadrature. The M/M/1/1 average-overage expression divides by
/// `(lambda - mu)^4`, so cancellation error grows like `eps / gap^4`.
pub const SINGULAR_GAP: f64 = 1e-2;

/// Time-average server state probabilities over one renewal cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryProbabilities {
    pub p_idle: f64,
    pub p_busy: f64,
    /// Busy with an empty buffer (`B1`).
    pub p_busy_empty: f64,
    /// Busy with a waiting packet (`B2`); zero without a buffer.
    pub p_busy_full: f64,
    pub cycle_length: f64,
    /// Fraction of generated packets that reach the receiver.
    pub delivery_probability: f64,
}

fn check_rate(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(name, v, "a finite value > 0"))
    }
}

pub fn stationary_mg11(lambda: f64, dist: &ServiceDistribution) -> Result<StationaryProbabilities> {
    let lambda = check_rate("lambda", lambda)?;
    let mean = dist.mean();
    let cycle = 1.0 / lambda + mean;
    let p_idle = 1.0 / (lambda * cycle);
    let p_busy = mean / cycle;
    Ok(StationaryProbabilities {
        p_idle,
        p_busy,
        p_busy_empty: p_busy,
        p_busy_full: 0.0,
        cycle_length: cycle,
        delivery_probability: p_idle,
    })
}

pub fn stationary_mg12star(lambda: f64, dist: &ServiceDistribution) -> Result<StationaryProbabilities> {
    let lambda = check_rate("lambda", lambda)?;
    let mean = dist.mean();
    let mgf = dist.mgf_at_minus(lambda);
    let cycle = 1.0 / lambda + mean / mgf;
    let p_idle = 1.0 / (lambda * cycle);
    let p_busy = mean / (cycle * mgf);
    // 1 + (mgf - 1)/(lambda E[S]) loses digits for small lambda E[S]; the
    // busy-full share is then tiny anyway.
    let p_busy_full = (p_busy * (1.0 + (mgf - 1.0) / (lambda * mean))).max(0.0);
    let p_busy_empty = p_busy - p_busy_full;
    Ok(StationaryProbabilities {
        p_idle,
        p_busy,
        p_busy_empty,
        p_busy_full,
        cycle_length: cycle,
        delivery_probability: p_idle + p_busy_empty,
    })
}

/// M/M/1: the server is never idle-dropping; every packet is delivered.
pub fn stationary_mm1(lambda: f64, mu: f64) -> Result<StationaryProbabilities> {
    let lambda = check_rate("lambda", lambda)?;
    let mu = check_rate("mu", mu)?;
    let rho = lambda / mu;
    if rho >= 1.0 {
        return Err(Error::Unstable { rho });
    }
    Ok(StationaryProbabilities {
        p_idle: 1.0 - rho,
        p_busy: rho,
        p_busy_empty: rho,
        p_busy_full: 0.0,
        cycle_length: f64::INFINITY,
        delivery_probability: 1.0,
    })
}

pub fn stationary(scenario: &Scenario) -> Result<StationaryProbabilities> {
    match scenario.model() {
        QueueModel::Mg11 => stationary_mg11(scenario.arrival_rate(), scenario.service()),
        QueueModel::Mg12Star => stationary_mg12star(scenario.arrival_rate(), scenario.service()),
        QueueModel::Mm1 => stationary_mm1(
            scenario.arrival_rate(),
            scenario.exponential_rate().expect("validated mm1 scenario"),
        ),
    }
}

fn near_singular(lambda: f64, mu: f64) -> bool {
    (lambda - mu).abs() / mu < SINGULAR_GAP
}

fn quadrature_fallback(model: QueueModel, lambda: f64, mu: f64, h: f64) -> Result<MetricSet> {
    let scenario = Scenario::new(model, lambda, ServiceDistribution::exponential(mu)?, h)?;
    let mut m = quadrature::metrics(&scenario, &QuadratureSpec::default())?;
    m.method = Method::Analytic;
    m.fallback = Some(Fallback::SingularRates);
    Ok(m)
}

fn check_threshold(h: f64) -> Result<f64> {
    if h.is_finite() && h >= 0.0 {
        Ok(h)
    } else {
        Err(Error::domain("H", h, "a finite value >= 0"))
    }
}

/// M/M/1/1 expected overage time per delivered interval, given an idle arrival.
fn mm11_eps_idle(l: f64, m: f64, h: f64) -> f64 {
    let em = (-m * h).exp();
    let el = (-l * h).exp();
    let d = l - m;
    (1.0 / l + 1.0 / m) * em + l * h * em / d + m * m * (el - em) / (l * d * d)
}

/// M/M/1/1 expected overage area per delivered interval, given an idle arrival.
fn mm11_area_idle(l: f64, m: f64, h: f64) -> f64 {
    let em = (-m * h).exp();
    let el = (-l * h).exp();
    let d = l - m;
    em * (1.0 / (l * l) - h * (1.0 / l + 1.0 / m) + 1.0 / (m * m) + 1.0 / (l * m))
        + (h * em + em / m) * (1.0 / l + 1.0 / m)
        + m * m / (d * d.powi(3))
            * ((el + em) * (l * l - 2.0 * l * m + m * m) * h * h + (el - em) * (2.0 * l - 2.0 * m) * h)
        - m * m * h * h * (el - em) / (d * d)
        + m * m * (el - em) / (l * l * d * d)
        - 2.0 * m * m * h * (el - em * (m * h - l * h + 1.0)) / d.powi(3)
        + l * h * em / (m * d)
}

pub fn closed_mm11(lambda: f64, mu: f64, h: f64) -> Result<MetricSet> {
    let (l, m) = (check_rate("lambda", lambda)?, check_rate("mu", mu)?);
    let h = check_threshold(h)?;
    if near_singular(l, m) {
        return quadrature_fallback(QueueModel::Mg11, l, m, h);
    }
    let p_idle = m / (l + m);
    let rate = l * p_idle;
    Ok(MetricSet {
        overage_probability: rate * mm11_eps_idle(l, m, h),
        average_overage: rate * mm11_area_idle(l, m, h),
        stale_update_probability: 1.0 - p_idle + p_idle * (-m * h).exp(),
        average_aoi: rate * mm11_area_idle(l, m, 0.0),
        delivery_probability: p_idle,
        method: Method::Analytic,
        fallback: None,
    })
}

/// The M/M/1/2* conditional expectations, each per arriving packet of the
/// given kind (idle or busy arrival).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mm12StarTerms {
    pub eps_idle: f64,
    pub eps_busy: f64,
    pub area_idle: f64,
    pub area_busy: f64,
    /// Probability a busy arrival is delivered with system time above `H`.
    pub stale_delivered_busy: f64,
}

pub fn mm12star_terms(l: f64, m: f64, h: f64) -> Mm12StarTerms {
    let em = (-h * m).exp();
    let el = (-h * l).exp();
    let elm = (-h * (l + m)).exp();
    let d = l - m;
    let s = l + m;

    let eps_idle = h * em + em / m + (el - em) / l - em * (el - 1.0) / d
        + m * elm / (l * l + m * l)
        + el * (1.0 - em) / m
        + l * el * (em - 1.0) / (m * d);

    let eps_busy = em * (1.0 - el) / l + elm / s - el * (em - 1.0) / l - el * (em - 1.0) / m - h * elm
        + h * m * em / l
        + m * m * elm / (l * s * s)
        + 2.0 * m * em * (el - 1.0) / (l * l)
        + h * elm
        + h * m * m * elm / (l * l + m * l)
        + l * el * (em - 1.0) / (m * d)
        - m * em * (el - 1.0) / (l * d);

    let area_idle = elm * m / (l * s * s) + em * (h * l * m * d + 2.0 * l * l - 2.0 * l * m + m * m) / (l * m * m * d)
        - el * m / (l * l * d);

    // The last term carries e^{H l} and e^{H m} inside; multiplied out so it
    // cannot overflow for large thresholds.
    let last = (elm * (l - m + h * l * l - h * m * m) - l * em + m * el) / (l * l * d);
    let area_busy = 2.0 * elm / (m * s) - (2.0 * elm - 2.0 * em) / (l * m) - elm / (s * s)
        + elm * (h * s + 1.0) / (s * s)
        - 2.0 * h * elm / s
        - m * elm / s.powi(3)
        - m * elm * (h * s + 1.0) / s.powi(3)
        + elm
            * (h * l.powi(3) + 3.0 * h * l * l * m + l * l + 3.0 * h * l * m * m + 3.0 * l * m + h * m.powi(3) + m * m)
            / (l * l * s * s)
        + 2.0 * em * (el - 1.0) / (l * l)
        + h * em / l
        + h * elm / l
        - last;

    let stale_delivered_busy = m * elm / s - m * em * (el - 1.0) / l;

    Mm12StarTerms {
        eps_idle,
        eps_busy,
        area_idle,
        area_busy,
        stale_delivered_busy,
    }
}

pub fn closed_mm12star(lambda: f64, mu: f64, h: f64) -> Result<MetricSet> {
    let (l, m) = (check_rate("lambda", lambda)?, check_rate("mu", mu)?);
    let h = check_threshold(h)?;
    if near_singular(l, m) {
        return quadrature_fallback(QueueModel::Mg12Star, l, m, h);
    }
    let denom = l * l + l * m + m * m;
    let p_idle = m * m / denom;
    let p_busy = (l * l + l * m) / denom;
    let p_busy_empty = l * m / denom;
    let at_h = mm12star_terms(l, m, h);
    let at_zero = mm12star_terms(l, m, 0.0);
    let stale_delivered = (-m * h).exp() * p_idle + at_h.stale_delivered_busy * p_busy;
    Ok(MetricSet {
        overage_probability: l * (at_h.eps_idle * p_idle + at_h.eps_busy * p_busy),
        average_overage: l * (at_h.area_idle * p_idle + at_h.area_busy * p_busy),
        stale_update_probability: 1.0 - (p_idle + p_busy_empty) + stale_delivered,
        average_aoi: l * (at_zero.area_idle * p_idle + at_zero.area_busy * p_busy),
        delivery_probability: p_idle + p_busy_empty,
        method: Method::Analytic,
        fallback: None,
    })
}

/// M/M/1 expected overage area per packet.
fn mm1_area(l: f64, m: f64, h: f64) -> f64 {
    let em = (-m * h).exp();
    let x = ((l - m) * h).exp();
    let el = (-l * h).exp();
    let d = l - m;
    // e^{-mH}(e^{lH} - 1) written as x - em
    let grow = x - em;
    em / (l * l) - em / (m * m) - x / (m * d) - em * (m * h + 1.0) / (m * m) - grow / (m * m) + h * x / d
        - x * (h * d - 1.0) / (d * d)
        - h * em / l
        - m * (el - em) / (l * l * d)
        + grow / (l * m)
        + l * x / (m * m * d)
        + em * (m * h + 1.0) / (l * m)
        + l * x * (h * d - 1.0) / (m * d * d)
        - l * h * x / (m * d)
}

/// M/M/1 metrics: average overage and stale probability in closed form; the
/// overage probability comes from quadrature (flagged in `fallback`).
pub fn closed_mm1(lambda: f64, mu: f64, h: f64) -> Result<MetricSet> {
    let (l, m) = (check_rate("lambda", lambda)?, check_rate("mu", mu)?);
    let h = check_threshold(h)?;
    stationary_mm1(l, m)?;
    if near_singular(l, m) {
        return quadrature_fallback(QueueModel::Mm1, l, m, h);
    }
    let overage_probability = quadrature::mm1_metrics(l, m, h, &QuadratureSpec::default())?.overage_probability;
    Ok(MetricSet {
        overage_probability,
        average_overage: l * mm1_area(l, m, h),
        stale_update_probability: (-(m - l) * h).exp(),
        average_aoi: l * mm1_area(l, m, 0.0),
        delivery_probability: 1.0,
        method: Method::Analytic,
        fallback: Some(Fallback::OverageProbabilityByQuadrature),
    })
}

/// Closed-form metrics for a scenario with exponential service.
pub fn metrics(scenario: &Scenario) -> Result<MetricSet> {
    let mu = scenario.exponential_rate().ok_or(Error::Incompatible {
        model: "analytic",
        service: scenario.service().kind_name(),
    })?;
    let (l, h) = (scenario.arrival_rate(), scenario.threshold());
    match scenario.model() {
        QueueModel::Mg11 => closed_mm11(l, mu, h),
        QueueModel::Mg12Star => closed_mm12star(l, mu, h),
        QueueModel::Mm1 => closed_mm1(l, mu, h),
    }
}

/// Stale update probability for general service where it needs no integral
/// (M/G/1/1: `1 - p_I F_S(H)`).
pub fn stale_probability_mg11(lambda: f64, dist: &ServiceDistribution, h: f64) -> Result<f64> {
    let st = stationary_mg11(lambda, dist)?;
    Ok(1.0 - st.p_idle * dist.cdf(h))
}
