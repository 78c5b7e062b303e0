use std::fmt;

/// How a metric set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Analytic,
    Quadrature,
    Simulation,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Analytic, Method::Quadrature, Method::Simulation];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quadrature => "quadrature",
            Method::Simulation => "simulation",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parts of an analytic result that were computed numerically instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// `lambda` and `mu` are (nearly) equal; the closed forms have removable
    /// singularities there, so every metric came from quadrature.
    SingularRates,
    /// M/M/1 overage probability has no closed form here; it came from
    /// quadrature over the joint density of `(T_{i-1}, Y_i)`.
    OverageProbabilityByQuadrature,
}

/// The threshold metrics for one scenario point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSet {
    /// Long-run fraction of time the age exceeds the threshold.
    pub overage_probability: f64,
    /// Time average of `max(age - H, 0)`.
    pub average_overage: f64,
    /// Fraction of generated packets that are dropped or delivered with
    /// system time above the threshold.
    pub stale_update_probability: f64,
    /// Time-average age, the average overage at `H = 0`.
    pub average_aoi: f64,
    pub delivery_probability: f64,
    pub method: Method,
    pub fallback: Option<Fallback>,
}

impl MetricSet {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::OverageProbability => self.overage_probability,
            Metric::AverageOverage => self.average_overage,
            Metric::StaleUpdateProbability => self.stale_update_probability,
            Metric::AverageAoi => self.average_aoi,
        }
    }
}

/// Names of the reported metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    OverageProbability,
    AverageOverage,
    StaleUpdateProbability,
    AverageAoi,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::OverageProbability,
        Metric::AverageOverage,
        Metric::StaleUpdateProbability,
        Metric::AverageAoi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::OverageProbability => "P_o",
            Metric::AverageOverage => "avg_overage",
            Metric::StaleUpdateProbability => "P_s",
            Metric::AverageAoi => "avg_aoi",
        }
    }

    pub fn is_probability(&self) -> bool {
        matches!(self, Metric::OverageProbability | Metric::StaleUpdateProbability)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
