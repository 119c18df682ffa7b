//! Annualized return, volatility and Sharpe ratio of several strategies.

use olps::report::metric_cells;
use olps::{annualize, random_market, run, MarketSequence, RunSpec, StrategySpec};

fn main() -> olps::Result<()> {
    let x = random_market(504, 5, 0.97, 1.031, 3)?;
    println!("{:<16} {:>14} {:>8}", "strategy", "return ± risk", "sharpe");
    for spec in [
        StrategySpec::UBah,
        StrategySpec::BestStock,
        StrategySpec::UCbal,
        StrategySpec::Anti1 { max_w: 20 },
    ] {
        let report = run(&RunSpec::new("synthetic", spec.clone()), &x)?.report;
        let (ret, sharpe) = metric_cells(&report);
        println!("{:<16} {ret:>14} {sharpe:>8}", spec.label());
    }

    // a flat series has no volatility and so no Sharpe ratio
    let flat = MarketSequence::from_rows(vec![vec![1.0, 1.0]; 10])?;
    let out = run(&RunSpec::new("flat", StrategySpec::UBah), &flat)?;
    println!(
        "buy-and-hold on a flat market: sharpe {:?}",
        annualize(out.trace.wealth.daily_factors())?.sharpe
    );
    Ok(())
}
