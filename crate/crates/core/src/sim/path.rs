use super::{IntervalContribution, PacketRecord};

/// Direct integration of the age sawtooth against the summed contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCheck {
    pub path_overage_time: f64,
    pub summed_overage_time: f64,
    pub path_overage_area: f64,
    pub summed_overage_area: f64,
    pub horizon: f64,
    /// Largest relative discrepancy of the two comparisons.
    pub relative_discrepancy: f64,
}

impl PathCheck {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.relative_discrepancy <= tolerance
    }
}

/// Rebuilds `Delta(t) = t - u(t)` from the generation times of delivered
/// packets (with the origin `u = 0` at `t = 0`) and integrates the time
/// above `h` and the area above `h` up to the last delivery. The
/// contributions must start at the origin, as produced by
/// [`super::interval_contributions_from`] with [`super::Delivery::ORIGIN`].
pub fn path_consistency_check(ledger: &[PacketRecord], contributions: &[IntervalContribution], h: f64) -> PathCheck {
    let (mut since, mut stamp) = (0.0_f64, 0.0_f64);
    let (mut time, mut area) = (0.0, 0.0);
    for p in ledger {
        let Some(d) = p.departure_time.filter(|_| p.system_time().is_some()) else {
            continue;
        };
        // on [since, d] the age is tau - stamp
        let exceeds_from = since.max(stamp + h);
        time += (d - exceeds_from).max(0.0);
        let over = |tau: f64| (tau - stamp - h).max(0.0);
        area += 0.5 * (over(d).powi(2) - over(since).powi(2));
        since = d;
        stamp = p.generation_time;
    }
    let summed_time: f64 = contributions.iter().map(|c| c.overage_time).sum();
    let summed_area: f64 = contributions.iter().map(|c| c.overage_area).sum();
    let floor = since * 1e-12;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(floor).max(f64::MIN_POSITIVE);
    PathCheck {
        path_overage_time: time,
        summed_overage_time: summed_time,
        path_overage_area: area,
        summed_overage_area: summed_area,
        horizon: since,
        relative_discrepancy: rel(time, summed_time).max(rel(area, summed_area)),
    }
}
