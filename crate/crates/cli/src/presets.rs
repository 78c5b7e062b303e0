use anyhow::Result;

use overage::{Metric, QueueModel, Scenario, ServiceDistribution};

use crate::InputError;

pub const PRESET_NAMES: [&str; 5] = ["fig3", "fig4a", "fig4b", "fig5", "fig6"];

/// Gamma shapes for fig5 and fig6, either side of the exponential case.
/// Chosen for this tool; the source figures do not list their values.
pub const GAMMA_SHAPES: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Thresholds for the (rho, H) grid of fig4b.
pub const FIG4B_THRESHOLDS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];

/// A figure's scenario points, series-major then in sweep order.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub points: Vec<Scenario>,
    pub metrics: Vec<Metric>,
}

/// `first, first + step, ...` up to `last`, rounded to clean decimals.
pub fn grid(first: f64, last: f64, step: f64) -> Vec<f64> {
    let n = ((last - first) / step).round() as usize;
    (0..=n)
        .map(|k| ((first + k as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

fn exp2() -> ServiceDistribution {
    ServiceDistribution::exponential(2.0).expect("valid rate")
}

pub fn preset(name: &str) -> Result<Preset> {
    let mut points = Vec::new();
    let (name, metrics) = match name {
        "fig3" => {
            for model in QueueModel::ALL {
                for h in grid(0.1, 5.0, 0.1) {
                    points.push(Scenario::new(model, 1.0, exp2(), h)?);
                }
            }
            ("fig3", vec![Metric::OverageProbability, Metric::StaleUpdateProbability])
        }
        "fig4a" => {
            for model in QueueModel::ALL {
                for rho in grid(0.05, 0.95, 0.05) {
                    points.push(Scenario::new(model, 2.0 * rho, exp2(), 1.0)?);
                }
            }
            ("fig4a", vec![Metric::AverageOverage, Metric::AverageAoi])
        }
        "fig4b" => {
            for h in FIG4B_THRESHOLDS {
                for rho in grid(0.05, 0.95, 0.05) {
                    points.push(Scenario::new(QueueModel::Mm1, 2.0 * rho, exp2(), h)?);
                }
            }
            ("fig4b", vec![Metric::AverageOverage, Metric::AverageAoi])
        }
        "fig5" => {
            for alpha in GAMMA_SHAPES {
                let dist = ServiceDistribution::gamma_with_mean(alpha, 0.5)?;
                for lambda in grid(0.2, 4.0, 0.2) {
                    points.push(Scenario::new(QueueModel::Mg11, lambda, dist, 1.0)?);
                }
            }
            ("fig5", vec![Metric::OverageProbability, Metric::StaleUpdateProbability])
        }
        "fig6" => {
            for alpha in GAMMA_SHAPES {
                for mean in grid(0.1, 2.0, 0.1) {
                    let dist = ServiceDistribution::gamma_with_mean(alpha, mean)?;
                    points.push(Scenario::new(QueueModel::Mg12Star, 1.0, dist, 1.0)?);
                }
            }
            ("fig6", vec![Metric::OverageProbability, Metric::StaleUpdateProbability])
        }
        other => {
            return Err(InputError::new(format!(
                "unknown figure `{other}`; valid names: {}",
                PRESET_NAMES.join(", ")
            ))
            .into())
        }
    };
    Ok(Preset { name, points, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_clean() {
        let g = grid(0.1, 5.0, 0.1);
        assert_eq!(g.len(), 50);
        assert_eq!(g[2], 0.3);
        assert_eq!(*g.last().unwrap(), 5.0);
        assert_eq!(grid(0.05, 0.95, 0.05).len(), 19);
        assert_eq!(grid(0.2, 4.0, 0.2).len(), 20);
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(preset("fig3").unwrap().points.len(), 150);
        assert_eq!(preset("fig4a").unwrap().points.len(), 57);
        assert_eq!(preset("fig4b").unwrap().points.len(), 114);
        assert_eq!(preset("fig5").unwrap().points.len(), 80);
        assert_eq!(preset("fig6").unwrap().points.len(), 80);
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        let err = preset("fig7").unwrap_err();
        assert!(err.to_string().contains("fig3, fig4a, fig4b, fig5, fig6"));
    }
}
