use super::{IntervalContribution, PacketRecord, MIN_BATCHES};
use crate::error::{Error, Result};
use crate::metrics::{Method, Metric, MetricSet};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PacketCounts {
    pub generated: u64,
    pub delivered: u64,
    pub dropped: u64,
    /// Delivered with system time above `H`.
    pub stale_delivered: u64,
}

impl PacketCounts {
    pub fn tally(packets: &[PacketRecord], h: f64) -> Self {
        let mut c = PacketCounts::default();
        for p in packets {
            c.generated += 1;
            match p.system_time() {
                Some(t) => {
                    c.delivered += 1;
                    if t > h {
                        c.stale_delivered += 1;
                    }
                }
                None => c.dropped += 1,
            }
        }
        c
    }

    pub fn stale(&self) -> u64 {
        self.dropped + self.stale_delivered
    }
}

/// Time averages over the contributions and the stale fraction of the counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimates {
    pub overage_probability: f64,
    pub average_overage: f64,
    pub stale_update_probability: f64,
    pub average_aoi: f64,
    pub mean_peak_age: f64,
    pub max_peak_age: f64,
    /// Total length of the contributing intervals.
    pub horizon: f64,
}

pub fn aggregate_metrics(contributions: &[IntervalContribution], counts: &PacketCounts) -> Result<PointEstimates> {
    let mut horizon = 0.0;
    let (mut eps, mut area, mut age) = (0.0, 0.0, 0.0);
    let (mut peak_sum, mut peak_max) = (0.0, 0.0_f64);
    for c in contributions {
        horizon += c.inter_departure;
        eps += c.overage_time;
        area += c.overage_area;
        age += c.age_area();
        peak_sum += c.peak_age;
        peak_max = peak_max.max(c.peak_age);
    }
    if horizon <= 0.0 {
        return Err(Error::UndefinedEstimate("observation horizon is zero"));
    }
    if counts.generated == 0 {
        return Err(Error::UndefinedEstimate("no packets generated"));
    }
    Ok(PointEstimates {
        overage_probability: eps / horizon,
        average_overage: area / horizon,
        stale_update_probability: counts.stale() as f64 / counts.generated as f64,
        average_aoi: age / horizon,
        mean_peak_age: peak_sum / contributions.len() as f64,
        max_peak_age: peak_max,
        horizon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchInterval {
    pub mean: f64,
    pub standard_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Mean, standard error and 99% normal interval of batch means.
pub fn batch_confidence(batch_values: &[f64]) -> Result<BatchInterval> {
    let n = batch_values.len();
    if n < MIN_BATCHES {
        return Err(Error::InsufficientBatches {
            required: MIN_BATCHES,
            got: n,
        });
    }
    let mean = batch_values.iter().sum::<f64>() / n as f64;
    let ss: f64 = batch_values.iter().map(|v| (v - mean).powi(2)).sum();
    let standard_error = (ss / (n - 1) as f64 / n as f64).sqrt();
    Ok(BatchInterval {
        mean,
        standard_error,
        ci_low: mean - Z_99 * standard_error,
        ci_high: mean + Z_99 * standard_error,
    })
}

/// Point estimate with a batch-means interval clipped to the metric's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub point: f64,
    pub standard_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl MetricEstimate {
    fn new(point: f64, standard_error: f64, probability: bool) -> Self {
        let upper = if probability { 1.0 } else { f64::INFINITY };
        Self {
            point,
            standard_error,
            ci_low: (point - Z_99 * standard_error).clamp(0.0, upper),
            ci_high: (point + Z_99 * standard_error).clamp(0.0, upper),
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.ci_low..=self.ci_high).contains(&value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub overage_probability: MetricEstimate,
    pub average_overage: MetricEstimate,
    pub stale_update_probability: MetricEstimate,
    pub average_aoi: MetricEstimate,
    /// Mean and maximum of the peak ages in the window.
    pub mean_peak_age: f64,
    pub max_peak_age: f64,
    /// Counts over post-warmup packets.
    pub counts: PacketCounts,
    pub warmup_packets: u64,
    /// Length of the estimation window.
    pub horizon: f64,
    pub batch_count: usize,
}

impl SimEstimate {
    pub fn get(&self, metric: Metric) -> &MetricEstimate {
        match metric {
            Metric::OverageProbability => &self.overage_probability,
            Metric::AverageOverage => &self.average_overage,
            Metric::StaleUpdateProbability => &self.stale_update_probability,
            Metric::AverageAoi => &self.average_aoi,
        }
    }

    pub fn delivery_fraction(&self) -> f64 {
        self.counts.delivered as f64 / self.counts.generated as f64
    }

    pub fn to_metric_set(&self) -> MetricSet {
        MetricSet {
            overage_probability: self.overage_probability.point,
            average_overage: self.average_overage.point,
            stale_update_probability: self.stale_update_probability.point,
            average_aoi: self.average_aoi.point,
            delivery_probability: self.delivery_fraction(),
            method: Method::Simulation,
            fallback: None,
        }
    }
}

/// Point estimates over the window plus batch means over equal-length
/// time batches. Packets are assigned to batches by generation time.
pub(super) fn estimate(
    packets: &[PacketRecord],
    window: &[IntervalContribution],
    h: f64,
    batches: usize,
    warmup_packets: u64,
) -> Result<SimEstimate> {
    let counts = PacketCounts::tally(packets, h);
    let point = aggregate_metrics(window, &counts)?;
    let t0 = window[0].start;
    let t1 = t0 + point.horizon;
    let width = point.horizon / batches as f64;
    let slot = |t: f64| (((t - t0) / width).floor().max(0.0) as usize).min(batches - 1);
    let edge = |b: usize| if b == batches { t1 } else { t0 + b as f64 * width };

    let mut time = vec![[0.0; 3]; batches];
    for c in window {
        let (first, last) = (slot(c.start), slot(c.start + c.inter_departure));
        for (acc, b) in time[first..=last].iter_mut().zip(first..) {
            let part = c.clipped(edge(b), edge(b + 1), h);
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        }
    }
    let mut generated = vec![0u64; batches];
    let mut stale = vec![0u64; batches];
    for p in packets {
        let b = slot(p.generation_time);
        generated[b] += 1;
        stale[b] += p.is_stale(h) as u64;
    }
    if generated.contains(&0) {
        return Err(Error::UndefinedEstimate("a batch contains no generated packets"));
    }

    let series = |k: usize| -> Vec<f64> { time.iter().map(|v| v[k] / width).collect() };
    let stale_series: Vec<f64> = stale
        .iter()
        .zip(&generated)
        .map(|(&s, &g)| s as f64 / g as f64)
        .collect();
    let se = |values: &[f64]| batch_confidence(values).map(|b| b.standard_error);

    Ok(SimEstimate {
        overage_probability: MetricEstimate::new(point.overage_probability, se(&series(0))?, true),
        average_overage: MetricEstimate::new(point.average_overage, se(&series(1))?, false),
        stale_update_probability: MetricEstimate::new(point.stale_update_probability, se(&stale_series)?, true),
        average_aoi: MetricEstimate::new(point.average_aoi, se(&series(2))?, false),
        mean_peak_age: point.mean_peak_age,
        max_peak_age: point.max_peak_age,
        counts,
        warmup_packets,
        horizon: point.horizon,
        batch_count: batches,
    })
}
