mod common;

use olps::portfolio::{commission_return, total_return, wealth_series};
use olps::{anticor_step, daily_return, drift, reverse_market, simulate, MarketSequence, Portfolio, StrategySpec};
use proptest::prelude::*;

fn market(max_days: usize) -> impl Strategy<Value = MarketSequence> {
    (2usize..=4, 1usize..=max_days).prop_flat_map(|(m, n)| {
        prop::collection::vec(0.5f64..2.0, n * m)
            .prop_map(move |flat| MarketSequence::from_flat((1..=m).map(|j| format!("A{j}")).collect(), flat).unwrap())
    })
}

fn portfolio(m: usize) -> impl Strategy<Value = Portfolio> {
    prop::collection::vec(0.0f64..1.0, m)
        .prop_filter("nonzero", |v| v.iter().sum::<f64>() > 1e-6)
        .prop_map(|v| Portfolio::new(v).unwrap())
}

fn market_and_portfolios() -> impl Strategy<Value = (MarketSequence, Vec<Portfolio>)> {
    market(30).prop_flat_map(|x| {
        let (n, m) = (x.n_days(), x.n_assets());
        (Just(x), prop::collection::vec(portfolio(m), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn drift_stays_on_simplex(
        (b, x) in (2usize..6).prop_flat_map(|m| (portfolio(m), prop::collection::vec(0.5f64..2.0, m)))
    ) {
        let d = drift(&b, &x).unwrap();
        prop_assert!(d.is_valid(1e-12));
        let r = daily_return(&b, &x).unwrap();
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(0.0, f64::max);
        prop_assert!(r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn commission_is_monotone_in_gamma((x, p) in market_and_portfolios(), g in 0.0f64..0.5, dg in 0.0f64..0.4) {
        let low = wealth_series(&p, &x, g).unwrap().final_wealth();
        let high = wealth_series(&p, &x, g + dg).unwrap().final_wealth();
        prop_assert!(high <= low);
        prop_assert_eq!(commission_return(&p, &x, 0.0).unwrap(), total_return(&p, &x).unwrap());
    }

    #[test]
    fn reversal_is_an_involution(x in market(50)) {
        let back = reverse_market(&reverse_market(&x));
        for (a, b) in back.as_flat().iter().zip(x.as_flat()) {
            prop_assert!(((a - b) / b).abs() <= 1e-15);
        }
        prop_assert_eq!(back.n_days(), x.n_days());
    }

    #[test]
    fn anticor_step_commutes_with_asset_permutation(
        (x, b, order, w) in market(16).prop_flat_map(|x| {
            let m = x.n_assets();
            let order = Just((0..m).collect::<Vec<usize>>()).prop_shuffle();
            (Just(x), portfolio(m), order, 2usize..=4)
        })
    ) {
        let t = x.n_days();
        let y = x.permuted(&order).unwrap();
        let b_perm = Portfolio::new(order.iter().map(|&j| b.weights()[j]).collect()).unwrap();
        let direct = anticor_step(w, t, x.history(t), &b).unwrap();
        let permuted = anticor_step(w, t, y.history(t), &b_perm).unwrap();
        for (k, &j) in order.iter().enumerate() {
            prop_assert!((permuted.weights()[k] - direct.weights()[j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn every_strategy_stays_on_simplex(x in market(40)) {
        for spec in common::quick_strategies() {
            let mut s = spec.instantiate(&x, 3).unwrap();
            let trace = simulate(s.as_mut(), &x, 0.0).unwrap();
            prop_assert_eq!(trace.portfolios.len(), x.n_days());
            for b in &trace.portfolios {
                prop_assert!(b.is_valid(1e-9), "{} produced {:?}", spec.id(), b);
            }
        }
    }

    #[test]
    fn lz_portfolios_have_full_support(x in market(40)) {
        let mut s = StrategySpec::Lz.instantiate(&x, 0).unwrap();
        let trace = simulate(s.as_mut(), &x, 0.0).unwrap();
        prop_assert!(trace.portfolios.iter().all(|b| b.weights().iter().all(|w| *w > 0.0)));
    }

    #[test]
    fn runs_are_deterministic(x in market(40), seed in any::<u64>()) {
        for spec in [StrategySpec::Universal { n_samples: 50 }, StrategySpec::Anti1 { max_w: 4 }] {
            let a = simulate(spec.instantiate(&x, seed).unwrap().as_mut(), &x, 0.001).unwrap();
            let b = simulate(spec.instantiate(&x, seed).unwrap().as_mut(), &x, 0.001).unwrap();
            prop_assert_eq!(a.portfolios, b.portfolios);
            prop_assert_eq!(a.wealth.final_wealth().to_bits(), b.wealth.final_wealth().to_bits());
        }
    }
}
