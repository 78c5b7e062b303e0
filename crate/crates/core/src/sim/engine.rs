use std::collections::VecDeque;

use crate::distribution::ServiceSampler;
use crate::rng::RandomSource;
use crate::scenario::QueueModel;

use super::{Outcome, PacketRecord};

/// Source of interarrival and service times for the event loop.
pub trait Workload {
    /// Time from the previous arrival (or from time zero) to the next one;
    /// `None` once the arrival process is exhausted.
    fn next_interarrival(&mut self) -> Option<f64>;
    /// Service time of the packet entering service now.
    fn next_service(&mut self) -> f64;
}

/// Poisson arrivals and i.i.d. service draws on two independent streams.
pub struct RandomWorkload {
    remaining: u64,
    arrivals: ServiceSampler,
    service: ServiceSampler,
    arrival_rng: RandomSource,
    service_rng: RandomSource,
}

impl RandomWorkload {
    pub fn new(packets: u64, arrivals: ServiceSampler, service: ServiceSampler, seed: u64, stream_id: u64) -> Self {
        Self {
            remaining: packets,
            arrivals,
            service,
            arrival_rng: RandomSource::new(seed, stream_id.wrapping_mul(2)),
            service_rng: RandomSource::new(seed, stream_id.wrapping_mul(2).wrapping_add(1)),
        }
    }
}

impl Workload for RandomWorkload {
    fn next_interarrival(&mut self) -> Option<f64> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.arrivals.sample(&mut self.arrival_rng))
    }

    fn next_service(&mut self) -> f64 {
        self.service.sample(&mut self.service_rng)
    }
}

/// Replays fixed arrival instants and service times (consumed in the order
/// packets enter service). Used for hand-checked traces.
pub struct TraceWorkload {
    arrivals: std::vec::IntoIter<f64>,
    services: std::vec::IntoIter<f64>,
    last: f64,
}

impl TraceWorkload {
    pub fn new(arrival_times: Vec<f64>, service_times: Vec<f64>) -> Self {
        Self {
            arrivals: arrival_times.into_iter(),
            services: service_times.into_iter(),
            last: 0.0,
        }
    }
}

impl Workload for TraceWorkload {
    fn next_interarrival(&mut self) -> Option<f64> {
        let t = self.arrivals.next()?;
        let gap = t - self.last;
        self.last = t;
        Some(gap)
    }

    fn next_service(&mut self) -> f64 {
        self.services
            .next()
            .expect("trace has a service time for every packet that enters service")
    }
}

/// Runs the queue until the arrival process is exhausted and the system has
/// drained. Returns one record per generated packet, in generation order.
///
/// Ties between an arrival and a departure are resolved departure first.
pub fn simulate_ledger<W: Workload>(model: QueueModel, workload: &mut W) -> Vec<PacketRecord> {
    let mut ledger: Vec<PacketRecord> = Vec::new();
    let mut in_service: Option<(usize, f64)> = None; // (packet, departure time)
    let mut waiting: VecDeque<usize> = VecDeque::new();
    let mut next_arrival = workload.next_interarrival();

    loop {
        let arrival_at = next_arrival.map(|gap| clock_of_arrival(&ledger, gap));
        let departure_at = in_service.map(|(_, d)| d);
        match (arrival_at, departure_at) {
            (None, None) => break,
            (Some(a), Some(d)) if d <= a => depart(&mut ledger, &mut in_service, &mut waiting, workload),
            (None, Some(_)) => depart(&mut ledger, &mut in_service, &mut waiting, workload),
            (Some(a), _) => {
                let idx = ledger.len();
                ledger.push(PacketRecord::generated(a));
                if in_service.is_none() {
                    start_service(&mut ledger, &mut in_service, idx, a, workload);
                } else {
                    match model {
                        QueueModel::Mg11 => ledger[idx].outcome = Outcome::DroppedBlocked,
                        QueueModel::Mg12Star => {
                            if let Some(old) = waiting.pop_front() {
                                ledger[old].outcome = Outcome::DroppedReplaced;
                            }
                            waiting.push_back(idx);
                        }
                        QueueModel::Mm1 => waiting.push_back(idx),
                    }
                }
                next_arrival = workload.next_interarrival();
            }
        }
    }
    ledger
}

fn clock_of_arrival(ledger: &[PacketRecord], gap: f64) -> f64 {
    ledger.last().map_or(0.0, |p| p.generation_time) + gap
}

fn start_service<W: Workload>(
    ledger: &mut [PacketRecord],
    in_service: &mut Option<(usize, f64)>,
    idx: usize,
    now: f64,
    workload: &mut W,
) {
    let s = workload.next_service();
    ledger[idx].service_start = Some(now);
    *in_service = Some((idx, now + s));
}

fn depart<W: Workload>(
    ledger: &mut [PacketRecord],
    in_service: &mut Option<(usize, f64)>,
    waiting: &mut VecDeque<usize>,
    workload: &mut W,
) {
    let (idx, at) = in_service.take().expect("departure requires a packet in service");
    ledger[idx].departure_time = Some(at);
    ledger[idx].outcome = Outcome::Delivered;
    if let Some(next) = waiting.pop_front() {
        start_service(ledger, in_service, next, at, workload);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mg11_trace_drops_busy_arrival() {
        let mut w = TraceWorkload::new(vec![0.0, 0.5, 3.0], vec![0.6, 0.4]);
        let ledger = simulate_ledger(QueueModel::Mg11, &mut w);
        assert_eq!(ledger.len(), 3);
        assert_eq!(ledger[0].departure_time, Some(0.6));
        assert_eq!(ledger[1].outcome, Outcome::DroppedBlocked);
        assert!((ledger[2].departure_time.unwrap() - 3.4).abs() < 1e-15);
    }

    #[test]
    fn mg12star_replaces_waiting_packet() {
        // packet 1 and 2 arrive during packet 0's service; 2 replaces 1
        let mut w = TraceWorkload::new(vec![0.0, 0.2, 0.4], vec![1.0, 1.0]);
        let ledger = simulate_ledger(QueueModel::Mg12Star, &mut w);
        assert_eq!(ledger[1].outcome, Outcome::DroppedReplaced);
        assert_eq!(ledger[2].service_start, Some(1.0));
        assert_eq!(ledger[2].departure_time, Some(2.0));
    }

    #[test]
    fn mm1_is_fifo() {
        let mut w = TraceWorkload::new(vec![0.0, 0.1, 0.2], vec![1.0, 1.0, 1.0]);
        let ledger = simulate_ledger(QueueModel::Mm1, &mut w);
        let deps: Vec<f64> = ledger.iter().map(|p| p.departure_time.unwrap()).collect();
        assert_eq!(deps, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn tie_serves_departure_first() {
        // arrival at exactly the departure instant finds the server idle
        let mut w = TraceWorkload::new(vec![0.0, 1.0], vec![1.0, 0.5]);
        let ledger = simulate_ledger(QueueModel::Mg11, &mut w);
        assert_eq!(ledger[1].outcome, Outcome::Delivered);
        assert_eq!(ledger[1].service_start, Some(1.0));
    }
}
