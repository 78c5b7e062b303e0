use std::io::Write;
use std::time::Instant;

use anyhow::{anyhow, Result};
use rayon::prelude::*;
use serde::Serialize;

use overage::sim::{run_simulation, SimConfig};
use overage::{analytic, quadrature, Method, Metric, MetricSet, QuadratureSpec, RandomSource, Scenario};

use crate::scenario_file::SimSection;

pub const CSV_HEADER: &str =
    "model,lambda,service_kind,service_params,H,metric,method,value,ci_low,ci_high,n_packets,seed,runtime_seconds";

/// One CSV line: a metric of one scenario point by one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub model: &'static str,
    pub lambda: f64,
    pub service_kind: &'static str,
    pub service_params: String,
    #[serde(rename = "H")]
    pub h: f64,
    pub metric: &'static str,
    pub method: &'static str,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub n_packets: Option<u64>,
    pub seed: Option<u64>,
    pub runtime_seconds: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub methods: Vec<Method>,
    pub metrics: Vec<Metric>,
    /// Silently skip methods that are undefined for a point (analytic with
    /// non-exponential service) instead of failing.
    pub skip_undefined: bool,
    pub packets: u64,
    pub warmup_fraction: f64,
    pub batches: usize,
    pub seed: u64,
    pub timing: bool,
    pub quadrature: QuadratureSpec,
}

impl Settings {
    pub fn new(methods: Vec<Method>, sim: &SimSection) -> Self {
        let defaults = SimConfig::default();
        Self {
            methods,
            metrics: Metric::ALL.to_vec(),
            skip_undefined: false,
            packets: sim.packets.unwrap_or(defaults.total_generated_packets),
            warmup_fraction: sim.warmup_fraction.unwrap_or(defaults.warmup_fraction),
            batches: sim.batches.unwrap_or(defaults.batch_count),
            seed: sim.seed.unwrap_or(defaults.source.seed()),
            timing: true,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn sim_config(&self, stream: u64) -> SimConfig {
        SimConfig {
            total_generated_packets: self.packets,
            warmup_fraction: self.warmup_fraction,
            batch_count: self.batches,
            source: RandomSource::new(self.seed, stream),
        }
    }

    /// Rejects simulation settings before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.methods.contains(&Method::Simulation) {
            self.sim_config(0).validate()?;
        }
        Ok(())
    }
}

fn rows_for(
    scenario: &Scenario,
    method: Method,
    metrics: &[Metric],
    values: impl Fn(Metric) -> (f64, Option<(f64, f64)>),
    sim: Option<(u64, u64)>,
    runtime: Option<f64>,
) -> Result<Vec<ResultRow>> {
    metrics
        .iter()
        .map(|&m| {
            let (value, ci) = values(m);
            if !value.is_finite() {
                return Err(anyhow!(overage::Error::UndefinedEstimate("non-finite metric value")));
            }
            Ok(ResultRow {
                model: scenario.model().as_str(),
                lambda: scenario.arrival_rate(),
                service_kind: scenario.service().kind_name(),
                service_params: scenario.service().to_string(),
                h: scenario.threshold(),
                metric: m.as_str(),
                method: method.as_str(),
                value,
                ci_low: ci.map(|c| c.0),
                ci_high: ci.map(|c| c.1),
                n_packets: sim.map(|s| s.0),
                seed: sim.map(|s| s.1),
                runtime_seconds: runtime,
            })
        })
        .collect()
}

/// All requested methods for one point; `stream` selects the simulation's
/// random stream.
pub fn evaluate_point(scenario: &Scenario, stream: u64, settings: &Settings) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for &method in &settings.methods {
        if method == Method::Analytic && !scenario.service().is_exponential() {
            if settings.skip_undefined {
                continue;
            }
            return Err(overage::Error::Incompatible {
                model: "analytic method",
                service: scenario.service().kind_name(),
            }
            .into());
        }
        let start = Instant::now();
        let elapsed = |t: Instant| settings.timing.then(|| t.elapsed().as_secs_f64());
        let fixed = |set: MetricSet| move |m: Metric| (set.get(m), None);
        let mut part = match method {
            Method::Analytic => {
                let set = analytic::metrics(scenario)?;
                rows_for(scenario, method, &settings.metrics, fixed(set), None, elapsed(start))?
            }
            Method::Quadrature => {
                let set = quadrature::metrics(scenario, &settings.quadrature)?;
                rows_for(scenario, method, &settings.metrics, fixed(set), None, elapsed(start))?
            }
            Method::Simulation => {
                let est = run_simulation(scenario, &settings.sim_config(stream))?;
                let runtime = elapsed(start);
                rows_for(
                    scenario,
                    method,
                    &settings.metrics,
                    |m| {
                        let e = est.get(m);
                        (e.point, Some((e.ci_low, e.ci_high)))
                    },
                    Some((settings.packets, settings.seed)),
                    runtime,
                )?
            }
        };
        rows.append(&mut part);
    }
    Ok(rows)
}

/// Evaluates points on a pool of `workers` threads. Point `k` simulates on
/// stream `k`; rows keep the order of `points`, and the first failing point
/// (in that order) determines the error.
pub fn evaluate_points(points: &[Scenario], settings: &Settings, workers: Option<usize>) -> Result<Vec<ResultRow>> {
    settings.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build()?;
    let results: Vec<Result<Vec<ResultRow>>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(k, s)| evaluate_point(s, k as u64, settings))
            .collect()
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}
