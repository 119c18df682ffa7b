//! Final wealth of the whole comparison suite on one market.
//!
//! ```text
//! cargo run --release --example benchmarks -- data/nyse.csv
//! ```
//! Without an argument a synthetic four-asset market is used.

use olps::report::{emit_report, Cell, ReportData, ReportFormat, ResultTable};
use olps::{load_market_file, random_market, run, InputFormat, RunSpec, StrategySpec};

fn main() -> olps::Result<()> {
    let (name, x) = match std::env::args().nth(1) {
        Some(path) => (
            path.clone(),
            load_market_file(path.as_ref(), InputFormat::CsvRelatives)?,
        ),
        None => ("synthetic".to_string(), random_market(1000, 4, 0.9, 1.11, 1)?),
    };
    let mut table = ResultTable::new("Algorithm", vec![name.clone()]);
    table
        .notes
        .push(format!("{} days, {} assets", x.n_days(), x.n_assets()));
    for spec in StrategySpec::suite() {
        let out = run(&RunSpec::new(name.clone(), spec.clone()), &x)?;
        table.push_row(spec.label(), vec![Cell::Value(out.trace.wealth.final_wealth())]);
    }
    emit_report(&ReportData::Table(table), ReportFormat::Tsv, std::io::stdout().lock())
}
