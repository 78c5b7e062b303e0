use proptest::prelude::*;

use overage::analytic::stationary;
use overage::sim::{path_consistency_check, simulate, SimConfig};
use overage::{analytic, quadrature, QuadratureSpec, QueueModel, Scenario, ServiceDistribution};

fn service() -> impl Strategy<Value = ServiceDistribution> {
    prop_oneof![
        (0.5f64..5.0).prop_map(|mu| ServiceDistribution::exponential(mu).unwrap()),
        (0.5f64..5.0, 0.1f64..2.0).prop_map(|(a, m)| ServiceDistribution::gamma_with_mean(a, m).unwrap()),
        (0.1f64..2.0).prop_map(|d| ServiceDistribution::deterministic(d).unwrap()),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (0usize..3, 0.1f64..3.0, service(), 0.0f64..4.0).prop_filter_map("valid", |(m, lambda, dist, h)| {
        let model = QueueModel::ALL[m];
        if model == QueueModel::Mm1 {
            // keep mm1 away from the unstable edge and with exponential service
            let mu = 1.0 / dist.mean();
            let dist = ServiceDistribution::exponential(mu).ok()?;
            return Scenario::new(model, lambda.min(0.9 * mu), dist, h).ok();
        }
        Scenario::new(model, lambda, dist, h).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_invariants(s in scenario(), dh in 0.05f64..1.0) {
        let spec = QuadratureSpec::default();
        let m = quadrature::metrics(&s, &spec).unwrap();
        let higher = quadrature::metrics(&s.with_threshold(s.threshold() + dh).unwrap(), &spec).unwrap();
        for p in [m.overage_probability, m.stale_update_probability, m.delivery_probability] {
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&p));
        }
        prop_assert!(higher.overage_probability <= m.overage_probability + 1e-9);
        prop_assert!(higher.average_overage <= m.average_overage + 1e-9);
        prop_assert!(higher.stale_update_probability <= m.stale_update_probability + 1e-9);
        let aoi = m.average_aoi;
        prop_assert!(m.average_overage <= aoi + 1e-9);
        prop_assert!(m.average_overage >= (aoi - s.threshold()).max(0.0) - 1e-9);
        let p_d = stationary(&s).unwrap().delivery_probability;
        prop_assert!(m.stale_update_probability >= 1.0 - p_d - 1e-9);
    }

    #[test]
    fn analytic_agrees_with_quadrature(s in scenario()) {
        prop_assume!(s.service().is_exponential());
        let a = analytic::metrics(&s).unwrap();
        let q = quadrature::metrics(&s, &QuadratureSpec::default()).unwrap();
        prop_assert!((a.overage_probability - q.overage_probability).abs() < 1e-6);
        prop_assert!((a.average_overage - q.average_overage).abs() < 1e-6 * a.average_overage.max(1.0));
        prop_assert!((a.stale_update_probability - q.stale_update_probability).abs() < 1e-6);
    }

    #[test]
    fn simulated_path_matches_contributions(s in scenario(), seed in 0u64..1000) {
        let cfg = SimConfig::default().with_packets(5_000).with_seed(seed);
        let run = simulate(&s, &cfg).unwrap();
        let check = path_consistency_check(&run.ledger, &run.contributions, s.threshold());
        prop_assert!(check.holds(1e-9), "{:?}", check);
        let c = run.estimate.counts;
        prop_assert_eq!(c.generated, c.delivered + c.dropped);
    }
}
