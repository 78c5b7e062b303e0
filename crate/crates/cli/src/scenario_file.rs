use std::fmt;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use overage::sim::{DEFAULT_PACKETS, DEFAULT_SEED};
use overage::{Method, QueueModel, Scenario, ServiceDistribution};

use crate::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Mg11,
    Mg12star,
    Mm1,
}

impl From<ModelName> for QueueModel {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::Mg11 => QueueModel::Mg11,
            ModelName::Mg12star => QueueModel::Mg12Star,
            ModelName::Mm1 => QueueModel::Mm1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ServiceKind {
    Exponential,
    Gamma,
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceSpec {
    pub kind: ServiceKind,
    pub params: ServiceParams,
}

impl ServiceSpec {
    pub fn distribution(&self) -> Result<ServiceDistribution> {
        let p = self.params;
        let (needed, present): (&[&str], [(&str, Option<f64>); 4]) = (
            match self.kind {
                ServiceKind::Exponential => &["mu"],
                ServiceKind::Gamma => &["alpha", "beta"],
                ServiceKind::Deterministic => &["d"],
            },
            [("mu", p.mu), ("alpha", p.alpha), ("beta", p.beta), ("d", p.d)],
        );
        for (name, value) in present {
            match (needed.contains(&name), value) {
                (true, None) => {
                    return Err(InputError::new(format!(
                        "service.params.{name} is required for {} service",
                        self.kind_name()
                    ))
                    .into())
                }
                (false, Some(_)) => {
                    return Err(InputError::new(format!(
                        "service.params.{name} is not a parameter of {} service",
                        self.kind_name()
                    ))
                    .into())
                }
                _ => {}
            }
        }
        let need = |v: Option<f64>| v.expect("checked above");
        Ok(match self.kind {
            ServiceKind::Exponential => ServiceDistribution::exponential(need(p.mu))?,
            ServiceKind::Gamma => ServiceDistribution::gamma(need(p.alpha), need(p.beta))?,
            ServiceKind::Deterministic => ServiceDistribution::deterministic(need(p.d))?,
        })
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            ServiceKind::Exponential => "exponential",
            ServiceKind::Gamma => "gamma",
            ServiceKind::Deterministic => "deterministic",
        }
    }

    /// Same family rescaled to mean `mean` (shape kept for gamma).
    pub fn with_mean(&self, mean: f64) -> ServiceSpec {
        let mut params = self.params;
        match self.kind {
            ServiceKind::Exponential => params.mu = Some(1.0 / mean),
            ServiceKind::Gamma => params.beta = params.alpha.map(|a| a / mean),
            ServiceKind::Deterministic => params.d = Some(mean),
        }
        ServiceSpec {
            kind: self.kind,
            params,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Analytic,
    Quadrature,
    Simulation,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Self {
        match m {
            MethodName::Analytic => Method::Analytic,
            MethodName::Quadrature => Method::Quadrature,
            MethodName::Simulation => Method::Simulation,
        }
    }
}

impl std::str::FromStr for MethodName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(MethodName::Analytic),
            "quadrature" => Ok(MethodName::Quadrature),
            "simulation" => Ok(MethodName::Simulation),
            other => Err(format!(
                "unknown method `{other}` (expected analytic, quadrature or simulation)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packets: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batches: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "H")]
    Threshold,
    #[serde(rename = "rho")]
    Rho,
    #[serde(rename = "mean_service")]
    MeanService,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::Lambda => "lambda",
            SweepParameter::Threshold => "H",
            SweepParameter::Rho => "rho",
            SweepParameter::MeanService => "mean_service",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// A scenario document as read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub model: ModelName,
    pub lambda: f64,
    pub service: ServiceSpec,
    #[serde(rename = "threshold_H")]
    pub threshold_h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<MethodName>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub methods: Option<Vec<MethodName>>,
    pub seed: Option<u64>,
    pub packets: Option<u64>,
}

impl ScenarioFile {
    /// Strict parse; syntax and schema errors carry line and column.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| InputError::new(format!("{origin}:{}:{}: {e}", e.line(), e.column())).into())
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Ok(Scenario::new(
            self.model.into(),
            self.lambda,
            self.service.distribution()?,
            self.threshold_h,
        )?)
    }

    /// Fills defaults and applies overrides. Analytic is in the default
    /// method set only for exponential service.
    pub fn normalized(&self, overrides: &Overrides) -> ScenarioFile {
        let mut out = self.clone();
        let default_methods = || {
            let mut m = vec![MethodName::Quadrature, MethodName::Simulation];
            if self.service.kind == ServiceKind::Exponential {
                m.insert(0, MethodName::Analytic);
            }
            m
        };
        let mut methods = overrides
            .methods
            .clone()
            .or_else(|| self.methods.clone())
            .unwrap_or_else(default_methods);
        methods.sort_by_key(|&m| Method::from(m));
        methods.dedup();
        out.methods = Some(methods);
        let sim = self.sim.unwrap_or_default();
        out.sim = Some(SimSection {
            packets: overrides.packets.or(sim.packets).or(Some(DEFAULT_PACKETS)),
            warmup_fraction: sim.warmup_fraction.or(Some(0.05)),
            batches: sim.batches.or(Some(20)),
            seed: overrides.seed.or(sim.seed).or(Some(DEFAULT_SEED)),
        });
        out
    }

    /// Copy with the sweep parameter set to `value`.
    pub fn at(&self, parameter: SweepParameter, value: f64) -> Result<ScenarioFile> {
        let mut out = self.clone();
        out.sweep = None;
        match parameter {
            SweepParameter::Lambda => out.lambda = value,
            SweepParameter::Threshold => out.threshold_h = value,
            SweepParameter::Rho => out.lambda = value / self.service.distribution()?.mean(),
            SweepParameter::MeanService => {
                if !(value.is_finite() && value > 0.0) {
                    return Err(overage::Error::ParameterDomain {
                        name: "mean_service",
                        value,
                        constraint: "a finite value > 0",
                    }
                    .into());
                }
                out.service = self.service.with_mean(value);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str =
        r#"{"model": "mm1", "lambda": 1, "service": {"kind": "exponential", "params": {"mu": 2}}, "threshold_H": 1}"#;

    #[test]
    fn parses_minimal_file() {
        let f = ScenarioFile::parse(BASE, "t").unwrap();
        assert_eq!(f.model, ModelName::Mm1);
        assert_eq!(f.service.params.mu, Some(2.0));
        assert!(f.scenario().is_ok());
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = BASE.replace("\"lambda\"", "\"rate\": 3, \"lambda\"");
        let err = ScenarioFile::parse(&text, "t").unwrap_err();
        assert!(err.downcast_ref::<InputError>().is_some());
        assert!(err.to_string().contains("unknown field `rate`"), "{err}");
    }

    #[test]
    fn reports_line_and_column() {
        let err = ScenarioFile::parse("{\n  \"model\": mm1\n}", "f.json").unwrap_err();
        assert!(err.to_string().starts_with("f.json:2:"), "{err}");
    }

    #[test]
    fn params_must_match_kind() {
        let text = BASE.replace("{\"mu\": 2}", "{\"mu\": 2, \"alpha\": 1}");
        let f = ScenarioFile::parse(&text, "t").unwrap();
        assert!(f.scenario().unwrap_err().downcast_ref::<InputError>().is_some());
    }

    #[test]
    fn defaults_are_filled() {
        let f = ScenarioFile::parse(BASE, "t")
            .unwrap()
            .normalized(&Overrides::default());
        let sim = f.sim.unwrap();
        assert_eq!(sim.seed, Some(DEFAULT_SEED));
        assert_eq!(sim.packets, Some(DEFAULT_PACKETS));
        assert_eq!(f.methods.unwrap().len(), 3);
    }

    #[test]
    fn mean_service_keeps_shape() {
        let s = ServiceSpec {
            kind: ServiceKind::Gamma,
            params: ServiceParams {
                alpha: Some(2.0),
                beta: Some(4.0),
                ..Default::default()
            },
        };
        let d = s.with_mean(1.0).distribution().unwrap();
        assert!((d.mean() - 1.0).abs() < 1e-15);
        assert_eq!(s.with_mean(1.0).params.alpha, Some(2.0));
    }
}
