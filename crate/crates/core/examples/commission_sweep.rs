//! Final wealth as proportional commission grows from 0 to 1%, written as a
//! CSV series and an SVG chart.

use olps::report::{emit_report, ReportData, ReportFormat};
use olps::{random_market, sweep_commission, StrategySpec};

fn main() -> olps::Result<()> {
    let x = random_market(750, 4, 0.95, 1.05, 21)?;
    let gammas: Vec<f64> = (0..=10).map(|k| k as f64 / 1000.0).collect();
    let strategies = [
        StrategySpec::UCbal,
        StrategySpec::Anticor { w: 10 },
        StrategySpec::Anti1 { max_w: 15 },
    ];
    let sweep = sweep_commission(&x, &gammas, &strategies)?;
    emit_report(
        &ReportData::Sweep(sweep.clone()),
        ReportFormat::Csv,
        std::io::stdout().lock(),
    )?;

    let path = std::env::temp_dir().join("commission_sweep.svg");
    emit_report(
        &ReportData::Sweep(sweep),
        ReportFormat::SvgLines,
        std::fs::File::create(&path)?,
    )?;
    eprintln!("chart written to {}", path.display());
    Ok(())
}
