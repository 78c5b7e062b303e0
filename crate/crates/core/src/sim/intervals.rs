use super::{Outcome, PacketRecord};

/// A delivery instant and the system time of the delivered packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delivery {
    pub departure: f64,
    pub system_time: f64,
}

impl Delivery {
    /// Virtual delivery at time zero, giving `Delta(0) = 0`.
    pub const ORIGIN: Delivery = Delivery {
        departure: 0.0,
        system_time: 0.0,
    };
}

/// Overage accounting for the inter-departure interval ending at delivery `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalContribution {
    pub index: usize,
    /// Departure time of delivery `i - 1`, where the interval starts.
    pub start: f64,
    /// `Y_i`.
    pub inter_departure: f64,
    /// `T_{i-1}`.
    pub previous_system_time: f64,
    /// `T_{i-1} + Y_i`, the age just before delivery `i`.
    pub peak_age: f64,
    /// Time within the interval with age above `H`.
    pub overage_time: f64,
    /// Area of `max(age - H, 0)` over the interval.
    pub overage_area: f64,
}

impl IntervalContribution {
    pub fn new(index: usize, start: f64, y: f64, t_prev: f64, h: f64) -> Self {
        let (eps, q) = if t_prev >= h {
            (y, 0.5 * y * y + y * (t_prev - h))
        } else {
            let e = (t_prev + y - h).max(0.0);
            (e, 0.5 * e * e)
        };
        Self {
            index,
            start,
            inter_departure: y,
            previous_system_time: t_prev,
            peak_age: t_prev + y,
            overage_time: eps,
            overage_area: q,
        }
    }

    /// Area under the age itself (threshold zero).
    pub fn age_area(&self) -> f64 {
        self.inter_departure * (self.previous_system_time + 0.5 * self.inter_departure)
    }

    /// `[time above h, area above h, area under age]` restricted to `[a, b]`.
    pub fn clipped(&self, a: f64, b: f64, h: f64) -> [f64; 3] {
        let end = self.start + self.inter_departure;
        let lo = a.max(self.start);
        let hi = b.min(end);
        if hi <= lo {
            return [0.0; 3];
        }
        let age = |tau: f64| self.previous_system_time + (tau - self.start);
        let above = |tau: f64| (age(tau) - h).max(0.0);
        let crossing = self.start + h - self.previous_system_time;
        [
            (hi - lo.max(crossing)).max(0.0),
            0.5 * (above(hi).powi(2) - above(lo).powi(2)),
            0.5 * (age(hi).powi(2) - age(lo).powi(2)),
        ]
    }
}

fn deliveries(ledger: &[PacketRecord]) -> impl Iterator<Item = Delivery> + '_ {
    ledger
        .iter()
        .filter(|p| p.outcome == Outcome::Delivered)
        .filter_map(|p| {
            Some(Delivery {
                departure: p.departure_time?,
                system_time: p.system_time()?,
            })
        })
}

fn contributions(mut list: impl Iterator<Item = Delivery>, h: f64) -> Vec<IntervalContribution> {
    let Some(mut prev) = list.next() else {
        return Vec::new();
    };
    list.enumerate()
        .map(|(k, d)| {
            let c = IntervalContribution::new(k + 1, prev.departure, d.departure - prev.departure, prev.system_time, h);
            prev = d;
            c
        })
        .collect()
}

/// Contributions between consecutive deliveries in `ledger`; empty if there
/// are fewer than two deliveries.
pub fn interval_contributions(ledger: &[PacketRecord], h: f64) -> Vec<IntervalContribution> {
    contributions(deliveries(ledger), h)
}

/// Like [`interval_contributions`] with `origin` prepended as delivery 0.
pub fn interval_contributions_from(origin: Delivery, ledger: &[PacketRecord], h: f64) -> Vec<IntervalContribution> {
    contributions(std::iter::once(origin).chain(deliveries(ledger)), h)
}
