//! Checking that a strategy never looks ahead: every decision must survive
//! arbitrary changes to the days that follow it.

use olps::{causality_audit, random_market, StrategySpec};

fn main() -> olps::Result<()> {
    let x = random_market(60, 3, 0.9, 1.1, 2)?;
    for spec in [
        StrategySpec::UCbal,
        StrategySpec::Lz,
        StrategySpec::Anticor { w: 4 },
        StrategySpec::Anti2 { max_w: 5 },
        StrategySpec::BestStock,
        StrategySpec::CbalStar { tol: 1e-10 },
    ] {
        let leak = causality_audit(|m| spec.instantiate(m, 0), &x)?;
        match leak {
            None => println!("{:<16} online", spec.label()),
            Some(day) => println!("{:<16} uses the future from day {day}", spec.label()),
        }
    }
    Ok(())
}
