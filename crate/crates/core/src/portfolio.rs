//! Portfolio arithmetic and wealth accounting.
//!
//! Wealth is accumulated in log space. Compounded strategies on long
//! histories reach totals in the hundreds of millions, and meta-markets built
//! from them multiply such totals again.

use crate::error::{Error, Result};
use crate::market_data::MarketSequence;

/// Allocation of wealth over `m` assets; nonnegative, sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio(Vec<f64>);

impl Portfolio {
    /// Normalizes `weights` onto the simplex.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Dimension("portfolio needs at least one asset".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Argument(format!(
                "portfolio weight {w} is not a finite nonnegative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Argument("portfolio weights sum to zero".into()));
        }
        Ok(Self(weights.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    /// All wealth in asset `j`.
    pub fn indicator(m: usize, j: usize) -> Self {
        let mut w = vec![0.0; m];
        w[j] = 1.0;
        Self(w)
    }

    /// Wraps weights that are already on the simplex up to rounding.
    pub(crate) fn from_simplex(weights: Vec<f64>) -> Self {
        debug_assert!(
            weights.iter().all(|w| *w >= 0.0) && (weights.iter().sum::<f64>() - 1.0).abs() < 1e-9,
            "off-simplex weights {weights:?}"
        );
        Self(weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.0
    }

    /// `b . x` without a dimension check.
    pub(crate) fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(b, x)| b * x).sum()
    }

    /// True when every weight is nonnegative and the sum is within `tol` of one.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.0.iter().all(|w| w.is_finite() && *w >= 0.0) && (self.0.iter().sum::<f64>() - 1.0).abs() <= tol
    }

    /// Holdings after one day of price moves, before rebalancing.
    pub(crate) fn drifted(&self, x: &[f64]) -> Portfolio {
        let r = self.dot(x);
        Portfolio(self.0.iter().zip(x).map(|(b, x)| b * x / r).collect())
    }
}

fn check_dims(b: &Portfolio, x: &[f64]) -> Result<()> {
    if b.len() != x.len() {
        return Err(Error::Dimension(format!(
            "portfolio has {} assets, market vector has {}",
            b.len(),
            x.len()
        )));
    }
    Ok(())
}

/// `b . x`, the factor by which one day multiplies wealth.
pub fn daily_return(b: &Portfolio, x: &[f64]) -> Result<f64> {
    check_dims(b, x)?;
    Ok(b.dot(x))
}

/// `b(j) x(j) / (b . x)` for each asset.
pub fn drift(b: &Portfolio, x: &[f64]) -> Result<Portfolio> {
    check_dims(b, x)?;
    Ok(b.drifted(x))
}

/// Cumulative wealth per dollar invested, `n + 1` values starting at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WealthSeries {
    factors: Vec<f64>,
    log_values: Vec<f64>,
}

impl WealthSeries {
    /// Builds the series from per-day wealth ratios.
    pub fn from_factors(factors: Vec<f64>) -> Result<Self> {
        let mut log_values = Vec::with_capacity(factors.len() + 1);
        let mut acc = 0.0;
        log_values.push(acc);
        for (t, f) in factors.iter().enumerate() {
            if !(f.is_finite() && *f > 0.0) {
                return Err(Error::Validation {
                    row: t + 1,
                    column: 0,
                    message: format!("daily wealth factor must be positive, got {f}"),
                });
            }
            acc += f.ln();
            log_values.push(acc);
        }
        Ok(Self { factors, log_values })
    }

    pub fn n_days(&self) -> usize {
        self.factors.len()
    }

    /// Wealth after `t` days.
    pub fn value(&self, t: usize) -> f64 {
        self.log_values[t].exp()
    }

    pub fn log_value(&self, t: usize) -> f64 {
        self.log_values[t]
    }

    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }

    pub fn final_wealth(&self) -> f64 {
        self.value(self.n_days())
    }

    pub fn log_final(&self) -> f64 {
        self.log_values[self.n_days()]
    }

    /// Wealth ratio of each day to the one before.
    pub fn daily_factors(&self) -> &[f64] {
        &self.factors
    }
}

/// Wealth from holding `portfolios[t]` on day `t`, no costs.
pub fn total_return(portfolios: &[Portfolio], x: &MarketSequence) -> Result<f64> {
    Ok(wealth_series(portfolios, x, 0.0)?.final_wealth())
}

/// Wealth with proportional commission `gamma`: every dollar bought or sold
/// costs `gamma / 2`.
///
/// The cost on day `t` is charged on the move from the previous day's drifted
/// holdings to `portfolios[t]`. The account starts in cash, so the first
/// purchase pays `gamma / 2` on the whole stake.
pub fn commission_return(portfolios: &[Portfolio], x: &MarketSequence, gamma: f64) -> Result<f64> {
    Ok(wealth_series(portfolios, x, gamma)?.final_wealth())
}

pub fn wealth_series(portfolios: &[Portfolio], x: &MarketSequence, gamma: f64) -> Result<WealthSeries> {
    check_gamma(gamma)?;
    if portfolios.len() != x.n_days() {
        return Err(Error::Dimension(format!(
            "{} portfolios for {} days",
            portfolios.len(),
            x.n_days()
        )));
    }
    let mut previous: Option<Portfolio> = None;
    let mut factors = Vec::with_capacity(portfolios.len());
    for (b, day) in portfolios.iter().zip(x.days()) {
        check_dims(b, day)?;
        let f = day_factor(b, day, previous.as_ref(), gamma);
        factors.push(f);
        previous = Some(b.drifted(day));
    }
    WealthSeries::from_factors(factors)
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Argument(format!(
            "commission rate must be in [0, 1), got {gamma}"
        )));
    }
    Ok(())
}

/// Turnover `sum_j |b(j) - held(j)|`; `None` means the account holds only cash.
pub(crate) fn turnover(b: &Portfolio, held: Option<&Portfolio>) -> f64 {
    match held {
        Some(h) => b.0.iter().zip(&h.0).map(|(b, h)| (b - h).abs()).sum(),
        None => b.0.iter().sum(),
    }
}

pub(crate) fn day_factor(b: &Portfolio, x: &[f64], held: Option<&Portfolio>, gamma: f64) -> f64 {
    let cost = 1.0 - 0.5 * gamma * turnover(b, held);
    assert!(cost > 0.0, "commission factor {cost} is not positive");
    b.dot(x) * cost
}
