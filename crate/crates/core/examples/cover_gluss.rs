//! Constant rebalancing on a market that goes nowhere.
//!
//! Cash and a stock that alternately halves and doubles: buy-and-hold ends
//! where it started, while rebalancing to 50/50 every day compounds 9/8 per
//! pair of days.

use olps::{cover_gluss, run, RunSpec, StrategySpec};

fn main() -> olps::Result<()> {
    let x = cover_gluss(20)?;
    for spec in [
        StrategySpec::UBah,
        StrategySpec::UCbal,
        StrategySpec::CbalStar { tol: 1e-12 },
    ] {
        let out = run(&RunSpec::new("cover-gluss", spec.clone()), &x)?;
        let daily: Vec<String> = out.trace.wealth.daily_factors()[..4]
            .iter()
            .map(|r| format!("{r}"))
            .collect();
        println!(
            "{:<16} final wealth {:>10.6}   first days {}",
            spec.label(),
            out.trace.wealth.final_wealth(),
            daily.join(", ")
        );
    }
    println!("(9/8)^10 = {:.6}", 1.125f64.powi(10));
    Ok(())
}
