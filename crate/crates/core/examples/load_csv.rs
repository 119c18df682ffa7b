//! Reading closing prices, converting to relatives and writing them back out.

use olps::market_data::{load_prices, write_relatives, Loaded};
use olps::InputFormat;

const PRICES: &str = "\
date,IBM,KO,GE
1984-12-24,122.0,62.5,56.25
1984-12-26,121.5,62.75,56.5
1984-12-27,122.75,62.0,56.0
1984-12-28,123.125,62.5,56.75
";

fn main() -> olps::Result<()> {
    let Loaded::Prices(prices) = load_prices(PRICES.as_bytes(), InputFormat::CsvPrices)? else {
        unreachable!("price input yields prices");
    };
    println!("{} days of prices for {:?}", prices.n_days(), prices.names());
    let x = prices.to_relatives()?;
    println!("{} days of relatives; growth {:?}", x.n_days(), x.asset_growth());
    write_relatives(&x, std::io::stdout().lock())?;

    // malformed input is rejected with the offending position
    let err = load_prices("a,b\n1,2\n3,oops\n".as_bytes(), InputFormat::CsvPrices).unwrap_err();
    println!("error: {err}");
    Ok(())
}
