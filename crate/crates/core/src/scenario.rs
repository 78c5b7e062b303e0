use std::fmt;
use std::str::FromStr;

use crate::distribution::ServiceDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QueueModel {
    /// No buffer; arrivals during service are discarded.
    Mg11,
    /// One buffer slot; a new arrival replaces the waiting packet.
    Mg12Star,
    /// Exponential service, infinite FIFO buffer.
    Mm1,
}

impl QueueModel {
    pub const ALL: [QueueModel; 3] = [QueueModel::Mg11, QueueModel::Mg12Star, QueueModel::Mm1];

    pub fn as_str(&self) -> &'static str {
        match self {
            QueueModel::Mg11 => "mg11",
            QueueModel::Mg12Star => "mg12star",
            QueueModel::Mm1 => "mm1",
        }
    }
}

impl fmt::Display for QueueModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QueueModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mg11" => Ok(QueueModel::Mg11),
            "mg12star" => Ok(QueueModel::Mg12Star),
            "mm1" => Ok(QueueModel::Mm1),
            other => Err(format!("unknown model `{other}` (expected mg11, mg12star or mm1)")),
        }
    }
}

/// A fully specified experiment point: queue discipline, Poisson arrival
/// rate, service law and age threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    model: QueueModel,
    arrival_rate: f64,
    service: ServiceDistribution,
    threshold: f64,
}

impl Scenario {
    pub fn new(model: QueueModel, arrival_rate: f64, service: ServiceDistribution, threshold: f64) -> Result<Self> {
        if !(arrival_rate.is_finite() && arrival_rate > 0.0) {
            return Err(Error::domain("lambda", arrival_rate, "a finite value > 0"));
        }
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::domain("H", threshold, "a finite value >= 0"));
        }
        if model == QueueModel::Mm1 {
            if !service.is_exponential() {
                return Err(Error::Incompatible {
                    model: "mm1",
                    service: service.kind_name(),
                });
            }
            let rho = arrival_rate * service.mean();
            if rho >= 1.0 {
                return Err(Error::Unstable { rho });
            }
        }
        Ok(Self {
            model,
            arrival_rate,
            service,
            threshold,
        })
    }

    pub fn model(&self) -> QueueModel {
        self.model
    }

    pub fn arrival_rate(&self) -> f64 {
        self.arrival_rate
    }

    pub fn service(&self) -> &ServiceDistribution {
        &self.service
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Utilization `lambda E[S]`.
    pub fn utilization(&self) -> f64 {
        self.arrival_rate * self.service.mean()
    }

    pub fn with_threshold(&self, threshold: f64) -> Result<Self> {
        Self::new(self.model, self.arrival_rate, self.service, threshold)
    }

    /// Exponential service rate, if the law is exponential.
    pub fn exponential_rate(&self) -> Option<f64> {
        match self.service.law() {
            crate::distribution::Law::Exponential { rate } => Some(rate),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(mu: f64) -> ServiceDistribution {
        ServiceDistribution::exponential(mu).unwrap()
    }

    #[test]
    fn mm1_needs_stability() {
        let err = Scenario::new(QueueModel::Mm1, 3.0, exp(2.0), 1.0).unwrap_err();
        assert_eq!(err, Error::Unstable { rho: 1.5 });
        assert!(Scenario::new(QueueModel::Mm1, 2.0, exp(2.0), 1.0).is_err());
        assert!(Scenario::new(QueueModel::Mg11, 3.0, exp(2.0), 1.0).is_ok());
    }

    #[test]
    fn mm1_needs_exponential() {
        let g = ServiceDistribution::gamma(2.0, 4.0).unwrap();
        assert!(matches!(
            Scenario::new(QueueModel::Mm1, 1.0, g, 1.0),
            Err(Error::Incompatible { .. })
        ));
    }

    #[test]
    fn threshold_domain() {
        assert!(Scenario::new(QueueModel::Mg11, 1.0, exp(2.0), 0.0).is_ok());
        assert!(Scenario::new(QueueModel::Mg11, 1.0, exp(2.0), -0.1).is_err());
        assert!(Scenario::new(QueueModel::Mg11, 0.0, exp(2.0), 1.0).is_err());
    }

    #[test]
    fn model_names_round_trip() {
        for m in QueueModel::ALL {
            assert_eq!(m.as_str().parse::<QueueModel>().unwrap(), m);
        }
        assert!("mm2".parse::<QueueModel>().is_err());
    }
}
