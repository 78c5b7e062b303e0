use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A distribution or scenario parameter lies outside its domain.
    #[error("parameter `{name}` = {value} violates {constraint}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The infinite-buffer queue is unstable (utilization at or above one).
    #[error("M/M/1 requires utilization rho < 1, got rho = {rho}")]
    Unstable { rho: f64 },

    /// The requested model cannot be paired with the given service law.
    #[error("model {model} is incompatible with {service} service")]
    Incompatible { model: &'static str, service: &'static str },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    Convergence { subdivisions: usize, error_estimate: f64 },

    #[error("estimate undefined: {0}")]
    UndefinedEstimate(&'static str),

    #[error("batch means need at least {required} batches, got {got}")]
    InsufficientBatches { required: usize, got: usize },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::ParameterDomain {
            name,
            value,
            constraint,
        }
    }
}
