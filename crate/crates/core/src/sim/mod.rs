//! Event-driven simulation of the three queues.
//!
//! The age process starts at `Delta(0) = 0`, modelled as a virtual delivery at
//! time zero with zero system time. Every generated packet is recorded in a
//! [`PacketRecord`] ledger; consecutive deliveries yield
//! [`IntervalContribution`]s whose sums give the time-average metrics.

mod engine;
mod estimate;
mod intervals;
mod ledger_io;
mod path;

pub use engine::{simulate_ledger, RandomWorkload, TraceWorkload, Workload};
pub use estimate::{
    aggregate_metrics, batch_confidence, BatchInterval, MetricEstimate, PacketCounts, PointEstimates, SimEstimate, Z_99,
};
pub use intervals::{interval_contributions, interval_contributions_from, Delivery, IntervalContribution};
pub use ledger_io::{read_ledger_csv, write_ledger_csv, LEDGER_HEADER};
pub use path::{path_consistency_check, PathCheck};

use crate::analytic::stationary_mm1;
use crate::distribution::ServiceSampler;
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::scenario::{QueueModel, Scenario};

pub const DEFAULT_SEED: u64 = 20_190_701;
pub const DEFAULT_PACKETS: u64 = 1_000_000;
pub const MIN_BATCHES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Delivered,
    DroppedBlocked,
    DroppedReplaced,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Delivered => "delivered",
            Outcome::DroppedBlocked => "dropped_blocked",
            Outcome::DroppedReplaced => "dropped_replaced",
        }
    }

    pub fn is_dropped(self) -> bool {
        self != Outcome::Delivered
    }
}

/// One generated packet. `service_start` and `departure_time` are absent
/// for dropped packets (a replaced packet never started service).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketRecord {
    pub generation_time: f64,
    pub service_start: Option<f64>,
    pub departure_time: Option<f64>,
    pub outcome: Outcome,
}

impl PacketRecord {
    pub(crate) fn generated(at: f64) -> Self {
        Self {
            generation_time: at,
            service_start: None,
            departure_time: None,
            // overwritten at departure or on drop
            outcome: Outcome::Delivered,
        }
    }

    /// `departure - generation` for delivered packets.
    pub fn system_time(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Delivered => self.departure_time.map(|d| d - self.generation_time),
            _ => None,
        }
    }

    /// Dropped, or delivered with system time above `h`.
    pub fn is_stale(&self, h: f64) -> bool {
        self.system_time().is_none_or(|t| t > h)
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub total_generated_packets: u64,
    /// Fraction of the first packets excluded from the estimates.
    pub warmup_fraction: f64,
    pub batch_count: usize,
    pub source: RandomSource,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            total_generated_packets: DEFAULT_PACKETS,
            warmup_fraction: 0.05,
            batch_count: 20,
            source: RandomSource::new(DEFAULT_SEED, 0),
        }
    }
}

impl SimConfig {
    pub fn with_packets(mut self, packets: u64) -> Self {
        self.total_generated_packets = packets;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.source = RandomSource::new(seed, self.source.stream_id());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.warmup_fraction) {
            return Err(Error::domain(
                "warmup_fraction",
                self.warmup_fraction,
                "0 <= warmup_fraction < 0.5",
            ));
        }
        if self.batch_count < MIN_BATCHES {
            return Err(Error::InsufficientBatches {
                required: MIN_BATCHES,
                got: self.batch_count,
            });
        }
        let kept = self.total_generated_packets - self.warmup_packets();
        if kept < 2 * self.batch_count as u64 {
            return Err(Error::domain(
                "packets",
                self.total_generated_packets as f64,
                "at least two post-warmup packets per batch",
            ));
        }
        Ok(())
    }

    pub fn warmup_packets(&self) -> u64 {
        (self.warmup_fraction * self.total_generated_packets as f64).floor() as u64
    }
}

/// Full output of one run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub ledger: Vec<PacketRecord>,
    /// Contributions from the virtual origin onwards (not only the window).
    pub contributions: Vec<IntervalContribution>,
    /// Number of leading contributions that precede the estimation window.
    pub window_offset: usize,
    pub estimate: SimEstimate,
}

/// Simulates `scenario` and keeps the ledger and contributions.
pub fn simulate(scenario: &Scenario, config: &SimConfig) -> Result<Simulation> {
    config.validate()?;
    if let (QueueModel::Mm1, Some(mu)) = (scenario.model(), scenario.exponential_rate()) {
        stationary_mm1(scenario.arrival_rate(), mu)?;
    }
    let mut workload = RandomWorkload::new(
        config.total_generated_packets,
        ServiceSampler::interarrival(scenario.arrival_rate())?,
        scenario.service().sampler(),
        config.source.seed(),
        config.source.stream_id(),
    );
    let ledger = simulate_ledger(scenario.model(), &mut workload);
    let h = scenario.threshold();
    let contributions = interval_contributions_from(Delivery::ORIGIN, &ledger, h);

    let warmup = config.warmup_packets() as usize;
    // the window opens at the first delivery at or after the first kept arrival
    let window_offset = if warmup == 0 {
        0
    } else {
        let opens = ledger[warmup].generation_time;
        contributions.partition_point(|c| c.start < opens)
    };
    let estimate = estimate::estimate(
        &ledger[warmup..],
        &contributions[window_offset..],
        h,
        config.batch_count,
        warmup as u64,
    )?;
    Ok(Simulation {
        ledger,
        contributions,
        window_offset,
        estimate,
    })
}

/// Simulates `scenario` and returns only the estimates.
pub fn run_simulation(scenario: &Scenario, config: &SimConfig) -> Result<SimEstimate> {
    simulate(scenario, config).map(|s| s.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stale_classification() {
        let mut p = PacketRecord::generated(1.0);
        p.service_start = Some(1.0);
        p.departure_time = Some(2.0);
        assert!(!p.is_stale(1.0));
        assert!(p.is_stale(0.5));
        p.outcome = Outcome::DroppedBlocked;
        assert!(p.is_stale(10.0));
    }

    #[test]
    fn config_checks() {
        assert!(SimConfig::default().validate().is_ok());
        let few = SimConfig {
            batch_count: 5,
            ..SimConfig::default()
        };
        assert!(matches!(few.validate(), Err(crate::Error::InsufficientBatches { .. })));
        let warm = SimConfig {
            warmup_fraction: 0.7,
            ..SimConfig::default()
        };
        assert!(warm.validate().is_err());
        assert!(SimConfig::default().with_packets(30).validate().is_err());
    }

    #[test]
    fn hand_trace_mg11() {
        let mut w = TraceWorkload::new(vec![0.0, 0.5, 3.0], vec![0.6, 0.4]);
        let ledger = simulate_ledger(QueueModel::Mg11, &mut w);
        let contributions = interval_contributions_from(Delivery::ORIGIN, &ledger, 1.0);
        let counts = PacketCounts::tally(&ledger, 1.0);
        let m = aggregate_metrics(&contributions, &counts).unwrap();
        assert!((m.horizon - 3.4).abs() < 1e-12);
        assert!((m.overage_probability - 2.4 / 3.4).abs() < 1e-12);
        assert!((m.average_overage - 2.88 / 3.4).abs() < 1e-12);
        assert!((m.stale_update_probability - 1.0 / 3.0).abs() < 1e-12);
        assert!(path_consistency_check(&ledger, &contributions, 1.0).holds(1e-12));
    }

    #[test]
    fn runs_are_reproducible() {
        let s = Scenario::new(
            QueueModel::Mg12Star,
            1.0,
            crate::ServiceDistribution::gamma(2.0, 4.0).unwrap(),
            1.0,
        )
        .unwrap();
        let cfg = SimConfig::default().with_packets(20_000);
        assert_eq!(run_simulation(&s, &cfg).unwrap(), run_simulation(&s, &cfg).unwrap());
        let other = run_simulation(&s, &cfg.clone().with_seed(7)).unwrap();
        assert_ne!(other, run_simulation(&s, &cfg).unwrap());
    }
}
