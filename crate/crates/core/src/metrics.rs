//! Annualized return, volatility and Sharpe ratio from daily wealth ratios.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsConfig {
    pub trading_days: f64,
    /// Annual risk-free rate, subtracted from the annualized return.
    pub risk_free: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            trading_days: 252.0,
            risk_free: 0.04,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceReport {
    pub total_return: f64,
    pub annualized_return: f64,
    pub annualized_risk: f64,
    /// `None` when the return series has zero volatility.
    pub sharpe: Option<f64>,
    pub n_days: usize,
}

pub fn annualize(daily_returns: &[f64]) -> Result<PerformanceReport> {
    annualize_with(daily_returns, MetricsConfig::default())
}

/// Geometric-mean annualized return `(prod r)^(D/n) - 1`, sample standard
/// deviation of `r` scaled by `sqrt(D)`, and their Sharpe ratio.
pub fn annualize_with(daily_returns: &[f64], config: MetricsConfig) -> Result<PerformanceReport> {
    let n = daily_returns.len();
    if n < 2 {
        return Err(Error::Dimension(format!("need at least 2 daily returns, got {n}")));
    }
    if let Some(r) = daily_returns.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::Argument(format!("daily returns must be positive, got {r}")));
    }
    let log_total: f64 = daily_returns.iter().map(|r| r.ln()).sum();
    let annualized_return = (log_total * config.trading_days / n as f64).exp() - 1.0;

    let mean = daily_returns.iter().sum::<f64>() / n as f64;
    let var = daily_returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let annualized_risk = var.sqrt() * config.trading_days.sqrt();
    let sharpe = (annualized_risk > 0.0).then(|| (annualized_return - config.risk_free) / annualized_risk);

    Ok(PerformanceReport {
        total_return: log_total.exp(),
        annualized_return,
        annualized_risk,
        sharpe,
        n_days: n,
    })
}
