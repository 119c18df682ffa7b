//! Running time backwards: the reversed market reads the days in reverse
//! order with every relative inverted, so prices retrace their path.

use olps::{random_market, reverse_market, run, RunSpec, StrategySpec};

fn main() -> olps::Result<()> {
    let x = random_market(500, 4, 0.9, 1.12, 13)?;
    let rev = reverse_market(&x);
    let drift = reverse_market(&rev)
        .as_flat()
        .iter()
        .zip(x.as_flat())
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max);
    println!("reversing twice: largest relative change {drift:.1e}");
    println!("{:<16} {:>10} {:>10}", "strategy", "forward", "reversed");
    for spec in [
        StrategySpec::UBah,
        StrategySpec::BestStock,
        StrategySpec::UCbal,
        StrategySpec::Anticor { w: 8 },
    ] {
        let fw = run(&RunSpec::new("x", spec.clone()), &x)?.trace.wealth.final_wealth();
        let bw = run(&RunSpec::new("x-1", spec.clone()), &rev)?
            .trace
            .wealth
            .final_wealth();
        println!("{:<16} {fw:>10.4} {bw:>10.4}", spec.label());
    }
    Ok(())
}
