use std::time::Instant;

use overage::analytic;
use overage::quadrature::{self, QuadratureSpec};
use overage::{QueueModel, Scenario, ServiceDistribution};

const LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
const MUS: [f64; 3] = [1.0, 2.0, 4.0];
const THRESHOLDS: [f64; 3] = [0.25, 1.0, 3.0];

fn grid(model: QueueModel) -> Vec<Scenario> {
    let mut out = Vec::new();
    for &l in &LAMBDAS {
        for &m in &MUS {
            if l == m || (model == QueueModel::Mm1 && l >= m) {
                continue;
            }
            for &h in &THRESHOLDS {
                let s = ServiceDistribution::exponential(m).unwrap();
                out.push(Scenario::new(model, l, s, h).unwrap());
            }
        }
    }
    out
}

#[test]
fn exponential_service_closed_forms_equal_quadrature() {
    let spec = QuadratureSpec::default();
    for model in QueueModel::ALL {
        let start = Instant::now();
        for sc in grid(model) {
            let a = analytic::metrics(&sc).unwrap();
            let q = quadrature::metrics(&sc, &spec).unwrap();
            let pairs = [
                ("P_o", a.overage_probability, q.overage_probability),
                ("avg_overage", a.average_overage, q.average_overage),
                ("P_s", a.stale_update_probability, q.stale_update_probability),
                ("avg_aoi", a.average_aoi, q.average_aoi),
            ];
            for (name, x, y) in pairs {
                assert!(
                    (x - y).abs() < 1e-6,
                    "{model} lambda={} H={} {name}: analytic {x} quadrature {y}",
                    sc.arrival_rate(),
                    sc.threshold()
                );
            }
        }
        eprintln!("{model}: {:?}", start.elapsed());
    }
}
