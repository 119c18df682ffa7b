//! ANTICOR applied to ANTICOR: the wealth curves of ANTICOR_w for every
//! window become the assets of a second-level market.

use olps::meta::{anticor_over, bah_over, meta_market};
use olps::{run, MarketSequence, RunSpec, StrategySpec};

/// Prices that wander around a common level with asset-specific rhythms.
fn oscillating_market(days: usize, assets: usize) -> olps::Result<MarketSequence> {
    let price = |t: usize, j: usize| {
        let t = t as f64;
        let j = j as f64;
        (0.08 * (t / (7.0 + 3.0 * j)).sin() + 0.04 * (t * (0.9 + 0.37 * j)).sin()).exp()
    };
    let rows = (1..=days)
        .map(|t| (0..assets).map(|j| price(t, j) / price(t - 1, j)).collect())
        .collect();
    MarketSequence::from_rows(rows)
}

fn main() -> olps::Result<()> {
    let x = oscillating_market(500, 5)?;
    let max_w = 10;

    let mut level1 = anticor_over(max_w)?;
    let derived = meta_market(&mut level1, &x)?;
    println!("derived market: {} strategies as assets", derived.n_assets());
    for (name, growth) in derived.names().iter().zip(derived.asset_growth()) {
        println!("  {name:<12} {growth:>12.4}");
    }

    let anti1 = bah_over(&mut anticor_over(max_w)?, &x)?;
    println!("BAH over ANTICOR_w, w = 2..{max_w}: {:.4}", anti1.final_wealth());
    for spec in [
        StrategySpec::UBah,
        StrategySpec::Anti1 { max_w },
        StrategySpec::Anti2 { max_w },
    ] {
        let out = run(&RunSpec::new("oscillating", spec.clone()), &x)?;
        println!("{:<16} {:.4}", spec.label(), out.trace.wealth.final_wealth());
    }
    Ok(())
}
