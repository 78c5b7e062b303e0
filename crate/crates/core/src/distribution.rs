//! Service-time laws.

use std::fmt;

use rand_distr::{Distribution, Exp, Gamma};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::special::{gamma_p, gamma_q, gamma_q_inverse, ln_gamma};

/// Parameters of a service-time law. Obtain a validated value through the
/// constructors on [`ServiceDistribution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    Exponential {
        rate: f64,
    },
    /// Shape/rate parameterization, mean `shape / rate`.
    Gamma {
        shape: f64,
        rate: f64,
    },
    Deterministic {
        value: f64,
    },
}

/// Which function of the law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluate {
    Density,
    Cdf,
    Survival,
}

/// A validated service-time distribution `S` with `E[S] > 0` and finite
/// second moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceDistribution(Law);

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(name, value, "a finite value > 0"))
    }
}

impl ServiceDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self(Law::Exponential {
            rate: positive("mu", rate)?,
        }))
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Ok(Self(Law::Gamma {
            shape: positive("alpha", shape)?,
            rate: positive("beta", rate)?,
        }))
    }

    /// Gamma law with the given shape, rescaled so that `E[S] = mean`.
    pub fn gamma_with_mean(shape: f64, mean: f64) -> Result<Self> {
        let shape = positive("alpha", shape)?;
        let mean = positive("mean_service", mean)?;
        Self::gamma(shape, shape / mean)
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        Ok(Self(Law::Deterministic {
            value: positive("d", value)?,
        }))
    }

    pub fn from_law(law: Law) -> Result<Self> {
        match law {
            Law::Exponential { rate } => Self::exponential(rate),
            Law::Gamma { shape, rate } => Self::gamma(shape, rate),
            Law::Deterministic { value } => Self::deterministic(value),
        }
    }

    pub fn law(&self) -> Law {
        self.0
    }

    pub fn kind_name(&self) -> &'static str {
        match self.0 {
            Law::Exponential { .. } => "exponential",
            Law::Gamma { .. } => "gamma",
            Law::Deterministic { .. } => "deterministic",
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self.0, Law::Exponential { .. })
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.0, Law::Deterministic { .. })
    }

    pub fn eval(&self, point: f64, which: Evaluate) -> f64 {
        match which {
            Evaluate::Density => self.density(point),
            Evaluate::Cdf => self.cdf(point),
            Evaluate::Survival => self.survival(point),
        }
    }

    /// Density `f_S`. The deterministic law has no density; this returns 0
    /// everywhere and integrals over it go through the point-mass path.
    pub fn density(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        match self.0 {
            Law::Exponential { rate } => rate * (-rate * s).exp(),
            Law::Gamma { shape, rate } => {
                if s == 0.0 {
                    return if shape < 1.0 {
                        f64::INFINITY
                    } else if shape == 1.0 {
                        rate
                    } else {
                        0.0
                    };
                }
                (shape * rate.ln() + (shape - 1.0) * s.ln() - rate * s - ln_gamma(shape)).exp()
            }
            Law::Deterministic { .. } => 0.0,
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match self.0 {
            Law::Exponential { rate } => -(-rate * s).exp_m1(),
            Law::Gamma { shape, rate } => gamma_p(shape, rate * s),
            Law::Deterministic { value } => {
                if s >= value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn survival(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 1.0;
        }
        match self.0 {
            Law::Exponential { rate } => (-rate * s).exp(),
            Law::Gamma { shape, rate } => gamma_q(shape, rate * s),
            Law::Deterministic { value } => {
                if s >= value {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self.0 {
            Law::Exponential { rate } => 1.0 / rate,
            Law::Gamma { shape, rate } => shape / rate,
            Law::Deterministic { value } => value,
        }
    }

    pub fn second_moment(&self) -> f64 {
        match self.0 {
            Law::Exponential { rate } => 2.0 / (rate * rate),
            Law::Gamma { shape, rate } => shape * (shape + 1.0) / (rate * rate),
            Law::Deterministic { value } => value * value,
        }
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// `E[exp(-lambda S)]`, the moment generating function at `-lambda`.
    pub fn mgf_at_minus(&self, lambda: f64) -> f64 {
        match self.0 {
            Law::Exponential { rate } => rate / (rate + lambda),
            Law::Gamma { shape, rate } => (rate / (rate + lambda)).powf(shape),
            Law::Deterministic { value } => (-lambda * value).exp(),
        }
    }

    /// Density of the equilibrium (stationary-excess) law, `Pr{S > w} / E[S]`.
    pub fn equilibrium_density(&self, w: f64) -> f64 {
        if w < 0.0 {
            return 0.0;
        }
        self.survival(w) / self.mean()
    }

    /// Mean of the equilibrium law, `E[S^2] / (2 E[S])`.
    pub fn equilibrium_mean(&self) -> f64 {
        self.second_moment() / (2.0 * self.mean())
    }

    /// A point beyond which the law keeps at most `tail` probability mass.
    /// For the deterministic law this is the atom itself.
    pub fn tail_point(&self, tail: f64) -> f64 {
        match self.0 {
            Law::Exponential { rate } => -tail.ln() / rate,
            Law::Gamma { shape, rate } => gamma_q_inverse(shape, tail) / rate,
            Law::Deterministic { value } => value,
        }
    }

    pub fn sampler(&self) -> ServiceSampler {
        match self.0 {
            Law::Exponential { rate } => ServiceSampler::Exponential(Exp::new(rate).expect("validated rate")),
            Law::Gamma { shape, rate } => {
                ServiceSampler::Gamma(Gamma::new(shape, 1.0 / rate).expect("validated gamma parameters"))
            }
            Law::Deterministic { value } => ServiceSampler::Constant(value),
        }
    }
}

impl fmt::Display for ServiceDistribution {
    /// Parameter string used in result tables, e.g. `mu=2` or `alpha=2;beta=4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Law::Exponential { rate } => write!(f, "mu={rate}"),
            Law::Gamma { shape, rate } => write!(f, "alpha={shape};beta={rate}"),
            Law::Deterministic { value } => write!(f, "d={value}"),
        }
    }
}

/// Draws from a service law or from exponential interarrival times.
#[derive(Debug, Clone, Copy)]
pub enum ServiceSampler {
    Exponential(Exp<f64>),
    Gamma(Gamma<f64>),
    Constant(f64),
}

impl ServiceSampler {
    pub fn interarrival(lambda: f64) -> Result<Self> {
        Ok(ServiceSampler::Exponential(
            Exp::new(positive("lambda", lambda)?).expect("validated rate"),
        ))
    }

    pub fn sample(&self, source: &mut RandomSource) -> f64 {
        match self {
            ServiceSampler::Exponential(d) => d.sample(source.rng()),
            ServiceSampler::Gamma(d) => d.sample(source.rng()),
            ServiceSampler::Constant(v) => *v,
        }
    }
}
