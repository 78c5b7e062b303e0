//! Numerical evaluation of the threshold metrics for general service laws.
//!
//! Every integral against the exponential interarrival density is done in
//! closed form (see `kernels`), so the remaining numerical dimension is at
//! most three (M/G/1/2*, busy-arrival branch).

mod integrate;
mod kernels;
mod mg11;
mod mg12star;
mod mm1;

pub use integrate::{integrate, nested_quadrature, AxisFn, AxisRange, Estimate, QuadratureSpec};
pub use mg11::mg11_metrics;
pub use mg12star::{mg12star_case_masses, mg12star_metrics, CaseMasses};
pub use mm1::{mm1_metrics, JointDensityTY};

use crate::distribution::{Law, ServiceDistribution};
use crate::error::Result;
use crate::metrics::MetricSet;
use crate::scenario::{QueueModel, Scenario};
use crate::special::ln_gamma;

/// Dispatches to the evaluator for the scenario's queue model.
pub fn metrics(scenario: &Scenario, spec: &QuadratureSpec) -> Result<MetricSet> {
    match scenario.model() {
        QueueModel::Mg11 => mg11_metrics(scenario, spec),
        QueueModel::Mg12Star => mg12star_metrics(scenario, spec),
        QueueModel::Mm1 => mm1_metrics(
            scenario.arrival_rate(),
            scenario.exponential_rate().expect("validated mm1 scenario"),
            scenario.threshold(),
            spec,
        ),
    }
}

/// A service law with its truncation points, computed once per evaluation
/// since inverting the gamma tail is costly.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Truncated {
    pub dist: ServiceDistribution,
    service_top: f64,
    // The equilibrium tail is heavier than the service tail by at most a
    // polynomial factor, so truncate three decades further out.
    equilibrium_top: f64,
    // Gamma laws are integrated in u with s = u^power; see `substitution_power`.
    power: i32,
    log_norm: f64,
}

impl Truncated {
    pub fn new(dist: &ServiceDistribution, spec: &QuadratureSpec) -> Self {
        let (power, log_norm) = match dist.law() {
            Law::Gamma { shape, rate } => (substitution_power(shape), shape * rate.ln() - ln_gamma(shape)),
            _ => (1, 0.0),
        };
        Self {
            dist: *dist,
            service_top: dist.tail_point(spec.tail_quantile),
            equilibrium_top: dist.tail_point(spec.tail_quantile * 1e-3),
            power,
            log_norm,
        }
    }
}

/// Power `m` of the map `s = u^m` for a gamma law of the given shape.
///
/// Near the origin the density goes like `s^(shape-1)` and the equilibrium
/// density like `1 - c s^shape`, which in `u` become `u^(m shape - 1)` and
/// `u^(m shape)`. Adaptive rules converge slowly on non-integer powers, and
/// nesting multiplies the cost, so pick the smallest `m` making `m shape` an
/// integer, else one large enough that the leftover power is at least four.
pub(crate) fn substitution_power(shape: f64) -> i32 {
    for m in 1..=8 {
        let p = m as f64 * shape;
        if p >= 1.0 - 1e-12 && (p - p.round()).abs() < 1e-9 {
            return m;
        }
    }
    ((4.0 / shape).ceil() as i32).clamp(1, 16)
}

/// `E[g(S) ; lo <= S < hi]` for the service law.
///
/// Continuous laws are integrated against their density up to the
/// `1 - tail_quantile` quantile; gamma laws are mapped through `s = u^m`
/// to smooth their behaviour at the origin.
/// The deterministic law collapses to a single evaluation at its atom.
pub(crate) fn expect_service<const N: usize, F>(
    law: &Truncated,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
    mut g: F,
) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> Result<Estimate<N>>,
{
    let dist = &law.dist;
    let lo = lo.max(0.0);
    match dist.law() {
        Law::Deterministic { value } => {
            if lo <= value && value < hi {
                g(value)
            } else {
                Ok(Estimate::ZERO)
            }
        }
        Law::Gamma { shape, rate } if law.power > 1 => {
            let top = hi.min(law.service_top);
            let m = law.power as f64;
            let map = |s: f64| s.powf(1.0 / m);
            let bps: Vec<f64> = breakpoints.iter().map(|&b| map(b.max(0.0))).collect();
            let est = integrate(
                |u: f64| {
                    if u <= 0.0 {
                        return Ok(Estimate::ZERO);
                    }
                    let s = u.powi(law.power);
                    // f(s) ds with ds = m u^(m-1) du, in logs to stay finite
                    let ln_w = law.log_norm + (m * shape - 1.0) * u.ln() + m.ln() - rate * s;
                    Ok(g(s)?.scale(ln_w.exp()))
                },
                map(lo),
                map(top),
                &bps,
                spec,
            )?;
            Ok(with_tail(est, spec))
        }
        _ => {
            let top = hi.min(law.service_top);
            let est = integrate(|s| Ok(g(s)?.scale(dist.density(s))), lo, top, breakpoints, spec)?;
            Ok(with_tail(est, spec))
        }
    }
}

/// `E[g(W) ; lo <= W < hi]` for the equilibrium law `Pr{S > w} / E[S]`.
pub(crate) fn expect_equilibrium<const N: usize, F>(
    law: &Truncated,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
    mut g: F,
) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> Result<Estimate<N>>,
{
    let dist = &law.dist;
    let lo = lo.max(0.0);
    let top = law.equilibrium_top;
    let est = match dist.law() {
        Law::Gamma { .. } if law.power > 1 => {
            let m = law.power as f64;
            let map = |w: f64| w.powf(1.0 / m);
            let bps: Vec<f64> = breakpoints.iter().map(|&b| map(b.max(0.0))).collect();
            integrate(
                |v: f64| {
                    if v <= 0.0 {
                        return Ok(Estimate::ZERO);
                    }
                    let w = v.powi(law.power);
                    Ok(g(w)?.scale(dist.equilibrium_density(w) * m * v.powi(law.power - 1)))
                },
                map(lo),
                map(hi.min(top)),
                &bps,
                spec,
            )?
        }
        _ => integrate(
            |w| Ok(g(w)?.scale(dist.equilibrium_density(w))),
            lo,
            hi.min(top),
            breakpoints,
            spec,
        )?,
    };
    Ok(if dist.is_deterministic() {
        est
    } else {
        with_tail(est, spec)
    })
}

// Truncated mass times a generous bound on the integrand scale.
fn with_tail<const N: usize>(mut est: Estimate<N>, spec: &QuadratureSpec) -> Estimate<N> {
    let scale = est.value.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    est.error += spec.tail_quantile * 10.0 * scale;
    est
}
