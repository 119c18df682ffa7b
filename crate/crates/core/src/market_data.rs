//! Market data: closing prices, relative-price sequences, and the synthetic
//! markets used throughout the test corpus.
//!
//! Everything downstream works on [`MarketSequence`], an `n x m` row-major
//! matrix of relative prices `x_t(j) = v_t(j) / v_{t-1}(j)`. Strategies never
//! see a whole sequence while trading; they get a [`History`] view holding
//! only the days observed so far.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Closing prices, oldest day first.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    names: Vec<String>,
    prices: Vec<f64>,
    day_labels: Option<Vec<String>>,
}

impl PriceSeries {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>, day_labels: Option<Vec<String>>) -> Result<Self> {
        let m = names.len();
        if m < 2 {
            return Err(Error::Dimension(format!("at least 2 assets are required, got {m}")));
        }
        if let Some(labels) = &day_labels {
            if labels.len() != rows.len() {
                return Err(Error::Dimension(format!(
                    "{} day labels for {} rows",
                    labels.len(),
                    rows.len()
                )));
            }
        }
        let prices = flatten_checked(&rows, m)?;
        Ok(Self {
            names,
            prices,
            day_labels,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_days(&self) -> usize {
        self.prices.len() / self.names.len()
    }

    pub fn n_assets(&self) -> usize {
        self.names.len()
    }

    pub fn day(&self, t: usize) -> &[f64] {
        let m = self.names.len();
        &self.prices[t * m..(t + 1) * m]
    }

    pub fn day_labels(&self) -> Option<&[String]> {
        self.day_labels.as_deref()
    }

    /// Converts prices to relative prices; the result has one day fewer.
    pub fn to_relatives(&self) -> Result<MarketSequence> {
        let n = self.n_days();
        if n < 2 {
            return Err(Error::Dimension(format!(
                "need at least 2 days of prices to form relatives, got {n}"
            )));
        }
        let m = self.n_assets();
        let mut relatives = Vec::with_capacity((n - 1) * m);
        for t in 1..n {
            let (prev, cur) = (self.day(t - 1), self.day(t));
            relatives.extend(cur.iter().zip(prev).map(|(c, p)| c / p));
        }
        MarketSequence::from_flat(self.names.clone(), relatives)
    }
}

/// Relative prices for `n` days over `m >= 2` assets.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSequence {
    names: Vec<String>,
    relatives: Vec<f64>,
}

impl MarketSequence {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = names.len();
        let relatives = flatten_checked(&rows, m)?;
        Self::from_flat(names, relatives)
    }

    /// Builds a sequence with generated asset labels `A1..Am`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        Self::new(default_names(m), rows)
    }

    /// Row-major constructor; `relatives.len()` must be a multiple of `names.len()`.
    pub fn from_flat(names: Vec<String>, relatives: Vec<f64>) -> Result<Self> {
        let m = names.len();
        if m < 2 {
            return Err(Error::Dimension(format!("at least 2 assets are required, got {m}")));
        }
        if relatives.is_empty() || !relatives.len().is_multiple_of(m) {
            return Err(Error::Dimension(format!(
                "{} values do not form a non-empty {m}-column matrix",
                relatives.len()
            )));
        }
        if let Some(k) = relatives.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Validation {
                row: k / m + 1,
                column: k % m + 1,
                message: format!("relative price must be positive and finite, got {}", relatives[k]),
            });
        }
        Ok(Self { names, relatives })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_days(&self) -> usize {
        self.relatives.len() / self.names.len()
    }

    pub fn n_assets(&self) -> usize {
        self.names.len()
    }

    /// Market vector for 0-based day `t`.
    pub fn day(&self, t: usize) -> &[f64] {
        let m = self.names.len();
        &self.relatives[t * m..(t + 1) * m]
    }

    pub fn days(&self) -> std::slice::ChunksExact<'_, f64> {
        self.relatives.chunks_exact(self.names.len())
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.relatives
    }

    /// The first `t` days as seen by an online strategy on day `t + 1`.
    pub fn history(&self, t: usize) -> History<'_> {
        let m = self.names.len();
        History::new(&self.relatives[..t * m], m)
    }

    /// Per-asset product of relatives over the whole sequence.
    pub fn asset_growth(&self) -> Vec<f64> {
        let mut growth = vec![1.0; self.n_assets()];
        for day in self.days() {
            for (g, x) in growth.iter_mut().zip(day) {
                *g *= x;
            }
        }
        growth
    }

    /// Copy of the first `days` days.
    pub fn truncated(&self, days: usize) -> Result<Self> {
        if days == 0 || days > self.n_days() {
            return Err(Error::Argument(format!(
                "cannot truncate {} days to {days}",
                self.n_days()
            )));
        }
        let m = self.n_assets();
        Ok(Self {
            names: self.names.clone(),
            relatives: self.relatives[..days * m].to_vec(),
        })
    }

    /// Reorders asset columns: column `k` of the result is column `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let m = self.n_assets();
        let mut seen = vec![false; m];
        if order.len() != m || !order.iter().all(|&j| j < m && !std::mem::replace(&mut seen[j], true)) {
            return Err(Error::Argument("not a permutation of the asset columns".into()));
        }
        let names = order.iter().map(|&j| self.names[j].clone()).collect();
        let relatives = self.days().flat_map(|day| order.iter().map(move |&j| day[j])).collect();
        Ok(Self { names, relatives })
    }
}

/// Borrowed prefix of a market: the days an online strategy may look at.
#[derive(Debug, Clone, Copy)]
pub struct History<'a> {
    data: &'a [f64],
    m: usize,
}

impl<'a> History<'a> {
    pub fn new(data: &'a [f64], m: usize) -> Self {
        assert!(
            m > 0 && data.len().is_multiple_of(m),
            "history must be a whole number of days"
        );
        Self { data, m }
    }

    /// Number of observed days.
    pub fn len(&self) -> usize {
        self.data.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn n_assets(&self) -> usize {
        self.m
    }

    /// Market vector for 0-based day `t`.
    pub fn day(&self, t: usize) -> &'a [f64] {
        &self.data[t * self.m..(t + 1) * self.m]
    }

    pub fn last(&self) -> Option<&'a [f64]> {
        (!self.is_empty()).then(|| self.day(self.len() - 1))
    }

    pub fn as_flat(&self) -> &'a [f64] {
        self.data
    }
}

/// Time-reversed market with every relative inverted.
pub fn reverse_market(x: &MarketSequence) -> MarketSequence {
    let m = x.n_assets();
    let mut relatives = Vec::with_capacity(x.relatives.len());
    for day in x.relatives.chunks_exact(m).rev() {
        relatives.extend(day.iter().map(|v| 1.0 / v));
    }
    MarketSequence {
        names: x.names.clone(),
        relatives,
    }
}

/// Cash plus one stock alternating between halving and doubling:
/// `(1, 1/2), (1, 2), (1, 1/2), ...`.
pub fn cover_gluss(n_days: usize) -> Result<MarketSequence> {
    if n_days == 0 || !n_days.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "cover-gluss needs a positive even number of days, got {n_days}"
        )));
    }
    let relatives = (0..n_days)
        .flat_map(|t| [1.0, if t % 2 == 0 { 0.5 } else { 2.0 }])
        .collect();
    MarketSequence::from_flat(vec!["cash".into(), "stock".into()], relatives)
}

/// Independent uniform relatives in `[lo, hi]`, reproducible from `seed`.
pub fn random_market(n_days: usize, n_assets: usize, lo: f64, hi: f64, seed: u64) -> Result<MarketSequence> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Argument(format!("bad relative range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let relatives = (0..n_days * n_assets)
        .map(|_| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect();
    MarketSequence::from_flat(default_names(n_assets), relatives)
}

pub(crate) fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("A{j}")).collect()
}

fn flatten_checked(rows: &[Vec<f64>], m: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(rows.len() * m);
    for (t, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::Parse {
                row: t + 1,
                message: format!("expected {m} values, found {}", row.len()),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation {
                    row: t + 1,
                    column: j + 1,
                    message: format!("value must be positive and finite, got {v}"),
                });
            }
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

/// Which kind of CSV a file holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    CsvPrices,
    CsvRelatives,
}

impl std::str::FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv-prices" | "prices" => Ok(Self::CsvPrices),
            "csv-relatives" | "relatives" => Ok(Self::CsvRelatives),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Loaded {
    Prices(PriceSeries),
    Relatives(MarketSequence),
}

impl Loaded {
    /// Relative prices regardless of which form was loaded.
    pub fn into_market(self) -> Result<MarketSequence> {
        match self {
            Loaded::Prices(p) => p.to_relatives(),
            Loaded::Relatives(x) => Ok(x),
        }
    }
}

/// Reads a header row of asset names followed by one row per day.
///
/// A leading `date` (or `day`) column is kept as day labels for price files
/// and ignored for relative files.
pub fn load_prices<R: Read>(source: R, format: InputFormat) -> Result<Loaded> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = reader
        .headers()
        .map_err(|e| Error::Parse {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let labelled = header
        .get(0)
        .is_some_and(|h| h.eq_ignore_ascii_case("date") || h.eq_ignore_ascii_case("day"));
    let skip = usize::from(labelled);
    let names: Vec<String> = header.iter().skip(skip).map(str::to_string).collect();
    let m = names.len();
    if m < 2 {
        return Err(Error::Dimension(format!("at least 2 assets are required, got {m}")));
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (t, record) in reader.records().enumerate() {
        let row_no = t + 1;
        let record = record.map_err(|e| Error::Parse {
            row: row_no,
            message: e.to_string(),
        })?;
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != m + skip {
            return Err(Error::Parse {
                row: row_no,
                message: format!("expected {} fields, found {}", m + skip, record.len()),
            });
        }
        if labelled {
            labels.push(record[0].to_string());
        }
        let mut row = Vec::with_capacity(m);
        for (j, cell) in record.iter().skip(skip).enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Validation {
                row: row_no,
                column: j + 1,
                message: format!("not a number: {cell:?}"),
            })?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation {
                    row: row_no,
                    column: j + 1,
                    message: format!("value must be positive and finite, got {cell}"),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Dimension("no data rows".into()));
    }

    match format {
        InputFormat::CsvPrices => Ok(Loaded::Prices(PriceSeries::new(
            names,
            rows,
            labelled.then_some(labels),
        )?)),
        InputFormat::CsvRelatives => Ok(Loaded::Relatives(MarketSequence::new(names, rows)?)),
    }
}

/// Loads a file in either format and returns relative prices.
pub fn load_market_file(path: &std::path::Path, format: InputFormat) -> Result<MarketSequence> {
    let file = std::fs::File::open(path)?;
    load_prices(std::io::BufReader::new(file), format)?.into_market()
}

/// Writes relatives as CSV. Values use the shortest round-tripping decimal form.
pub fn write_relatives<W: Write>(x: &MarketSequence, out: W) -> Result<()> {
    write_matrix(out, x.names(), x.days())
}

pub fn write_prices<W: Write>(p: &PriceSeries, out: W) -> Result<()> {
    write_matrix(out, p.names(), p.prices.chunks_exact(p.n_assets()))
}

fn write_matrix<'a, W: Write>(out: W, names: &[String], rows: impl Iterator<Item = &'a [f64]>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    writer.write_record(names).map_err(csv_err)?;
    for row in rows {
        writer
            .write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, format: InputFormat) -> Result<Loaded> {
        load_prices(text.as_bytes(), format)
    }

    #[test]
    fn parses_small_price_file() {
        let loaded = load("A,B\n1.0,2.0\n1.5,2.5\n2.0,2.0\n", InputFormat::CsvPrices).unwrap();
        let Loaded::Prices(p) = loaded else {
            panic!("expected prices")
        };
        assert_eq!((p.n_days(), p.n_assets()), (3, 2));
        assert_eq!(p.day(1), &[1.5, 2.5]);
    }

    #[test]
    fn zero_price_is_rejected() {
        let err = load("A,B\n1.0,2.0\n0.0,1.0\n", InputFormat::CsvPrices).unwrap_err();
        assert!(matches!(err, Error::Validation { row: 2, column: 1, .. }), "{err}");
    }

    #[test]
    fn non_numeric_cell_is_rejected() {
        let err = load("A,B\n1.0,x\n", InputFormat::CsvRelatives).unwrap_err();
        assert!(matches!(err, Error::Validation { row: 1, column: 2, .. }), "{err}");
    }

    #[test]
    fn ragged_row_reports_row_index() {
        let err = load("A,B\n1.5\n", InputFormat::CsvPrices).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }), "{err}");
    }

    #[test]
    fn single_asset_is_a_dimension_error() {
        let err = load("A\n1.0\n2.0\n", InputFormat::CsvPrices).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn date_column_becomes_labels() {
        let text = "date,A,B\n2001-01-02,1,2\n2001-01-03,2,2\n";
        let Loaded::Prices(p) = load(text, InputFormat::CsvPrices).unwrap() else {
            panic!()
        };
        assert_eq!(p.day_labels().unwrap()[1], "2001-01-03");
        assert_eq!(p.names(), &["A".to_string(), "B".to_string()]);
    }

    #[test]
    fn relatives_from_prices() {
        let p = PriceSeries::new(default_names(2), vec![vec![2.0, 4.0], vec![4.0, 2.0]], None).unwrap();
        assert_eq!(p.to_relatives().unwrap().as_flat(), &[2.0, 0.5]);

        let p = PriceSeries::new(default_names(2), vec![vec![3.0, 3.0]; 3], None).unwrap();
        assert!(p.to_relatives().unwrap().as_flat().iter().all(|&v| v == 1.0));

        let p = PriceSeries::new(
            default_names(2),
            vec![vec![1.0, 1.0], vec![2.0, 3.0], vec![1.0, 6.0]],
            None,
        )
        .unwrap();
        assert_eq!(p.to_relatives().unwrap().as_flat(), &[2.0, 3.0, 0.5, 2.0]);
    }

    #[test]
    fn single_day_of_prices_has_no_relatives() {
        let p = PriceSeries::new(default_names(2), vec![vec![1.0, 1.0]], None).unwrap();
        assert!(matches!(p.to_relatives(), Err(Error::Dimension(_))));
    }

    #[test]
    fn reversal_examples() {
        let x = MarketSequence::from_rows(vec![vec![2.0, 0.5]]).unwrap();
        assert_eq!(reverse_market(&x).as_flat(), &[0.5, 2.0]);

        let x = MarketSequence::from_rows(vec![vec![2.0, 1.0], vec![1.0, 4.0]]).unwrap();
        assert_eq!(reverse_market(&x).as_flat(), &[1.0, 0.25, 0.5, 1.0]);
    }

    #[test]
    fn cover_gluss_sequence() {
        assert_eq!(cover_gluss(2).unwrap().as_flat(), &[1.0, 0.5, 1.0, 2.0]);
        assert_eq!(
            cover_gluss(4).unwrap().as_flat(),
            &[1.0, 0.5, 1.0, 2.0, 1.0, 0.5, 1.0, 2.0]
        );
        assert!(matches!(cover_gluss(3), Err(Error::Argument(_))));
        assert!(matches!(cover_gluss(0), Err(Error::Argument(_))));
    }

    #[test]
    fn cover_gluss_has_no_growth_per_period() {
        let x = cover_gluss(10).unwrap();
        for t in (0..10).step_by(2) {
            assert_eq!(x.day(t)[0] * x.day(t + 1)[0], 1.0);
            assert_eq!(x.day(t)[1] * x.day(t + 1)[1], 1.0);
        }
    }

    #[test]
    fn history_exposes_only_prefix() {
        let x = cover_gluss(4).unwrap();
        let h = x.history(3);
        assert_eq!(h.len(), 3);
        assert_eq!(h.last().unwrap(), &[1.0, 0.5]);
        assert!(x.history(0).is_empty());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let x = random_market(20, 3, 0.5, 2.0, 7).unwrap();
        let mut buf = Vec::new();
        write_relatives(&x, &mut buf).unwrap();
        let back = load_prices(buf.as_slice(), InputFormat::CsvRelatives)
            .unwrap()
            .into_market()
            .unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn permutation_must_be_valid() {
        let x = random_market(3, 3, 0.5, 2.0, 1).unwrap();
        assert!(x.permuted(&[0, 0, 1]).is_err());
        let p = x.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.day(1)[0], x.day(1)[2]);
    }
}
