//! ANTICOR_w for each window size next to the market and the best stock.
//!
//! ```text
//! cargo run --release --example window_sweep -- data/nyse.csv
//! ```

use olps::report::{emit_report, ReportData, ReportFormat};
use olps::{load_market_file, random_market, sweep_window, InputFormat};

fn main() -> olps::Result<()> {
    let x = match std::env::args().nth(1) {
        Some(path) => load_market_file(path.as_ref(), InputFormat::CsvRelatives)?,
        None => random_market(800, 6, 0.94, 1.06, 5)?,
    };
    let windows: Vec<usize> = (2..=30).collect();
    let sweep = sweep_window(&x, &windows, 0.0)?;
    emit_report(&ReportData::Sweep(sweep), ReportFormat::Tsv, std::io::stdout().lock())
}
