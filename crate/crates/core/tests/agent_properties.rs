use contract_menu_core::agent::{
    best_response_effort, build_contract, certainty_equivalent, imitation_effort, rent_integrand,
};
use contract_menu_core::{AgentType, CostModel, ModelParams};
use proptest::prelude::*;

use AgentType::{High, Low};

fn cost_model() -> impl Strategy<Value = CostModel> {
    prop_oneof![
        (0.5f64..2.0).prop_map(|k| CostModel::quadratic(k).unwrap()),
        (0.5f64..2.0, 3.0f64..5.0).prop_map(|(k, p)| CostModel::power(k, p).unwrap()),
    ]
}

fn params() -> impl Strategy<Value = ModelParams> {
    (
        0.5f64..1.5,
        1.01f64..2.0,
        0.1f64..3.0,
        0.1f64..2.0,
        0.01f64..0.99,
    )
        .prop_map(|(theta_l, ratio, rho, sigma, alpha)| ModelParams {
            theta_l,
            theta_h: theta_l * ratio,
            rho,
            sigma,
            alpha,
            w_l: 0.0,
            w_h: 0.0,
            mu_max: 50.0,
        })
}

proptest! {
    #[test]
    fn high_type_works_harder_and_earns_rent(model in cost_model(), p in params(), mu in 1e-6f64..2.0) {
        let hl = imitation_effort(&model, &p, mu, High, Low).unwrap();
        prop_assert!(hl > mu);
        let lh = imitation_effort(&model, &p, mu, Low, High).unwrap();
        prop_assert!(lh < mu);

        let rent = rent_integrand(&model, &p, mu).unwrap();
        prop_assert!(rent > 0.0);

        let contract = build_contract(&model, &p, mu, p.w_l, Low).unwrap();
        let h = certainty_equivalent(&model, &p, &contract, High).unwrap().value;
        let l = certainty_equivalent(&model, &p, &contract, Low).unwrap().value;
        prop_assert!((h - l - rent).abs() <= 1e-10 * rent.max(1.0), "{} vs {}", h - l, rent);
    }

    #[test]
    fn contract_round_trip(model in cost_model(), p in params(), mu in 0.0f64..3.0, w in -1.0f64..1.0) {
        for agent in [High, Low] {
            let c = build_contract(&model, &p, mu, w, agent).unwrap();
            let effort = best_response_effort(&model, &p, &c, agent).unwrap();
            prop_assert!((effort - mu).abs() <= 1e-10);
            let ce = certainty_equivalent(&model, &p, &c, agent).unwrap().value;
            prop_assert!((ce - w).abs() <= 1e-10);
        }
    }

    #[test]
    fn rent_increases_in_effort(model in cost_model(), p in params(), mu in 1e-4f64..2.0, step in 1e-4f64..0.5) {
        let a = rent_integrand(&model, &p, mu).unwrap();
        let b = rent_integrand(&model, &p, mu + step).unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn only_productivity_ratio_matters(model in cost_model(), p in params(), mu in 0.0f64..2.0) {
        let doubled = ModelParams { theta_l: 2.0 * p.theta_l, theta_h: 2.0 * p.theta_h, ..p };
        for (k, m) in [(High, Low), (Low, High)] {
            let a = imitation_effort(&model, &p, mu, k, m).unwrap();
            let b = imitation_effort(&model, &doubled, mu, k, m).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.max(1.0));
        }
    }
}

#[test]
fn rent_vanishes_at_zero_effort() {
    let p = ModelParams {
        theta_l: 1.0,
        theta_h: 1.7,
        rho: 1.0,
        sigma: 1.0,
        alpha: 0.5,
        w_l: 0.0,
        w_h: 0.0,
        mu_max: 5.0,
    };
    for model in [
        CostModel::quadratic(1.0).unwrap(),
        CostModel::power(1.0, 3.0).unwrap(),
    ] {
        assert_eq!(rent_integrand(&model, &p, 0.0).unwrap(), 0.0);
    }
}
