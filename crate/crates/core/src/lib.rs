//! Online portfolio selection over daily price-relative sequences.
//!
//! The crate provides the ANTICOR strategy, its compounded variants ANTI1 and
//! ANTI2, the classic benchmarks (buy-and-hold, constant rebalancing, the best
//! constant rebalanced portfolio in hindsight, exponentiated gradient, the
//! universal portfolio and an LZ78-based predictor), and a backtester that
//! charges proportional commission on every rebalance.
//!
//! ```
//! use olps::{cover_gluss, run, RunSpec, StrategySpec};
//!
//! let x = cover_gluss(4).unwrap();
//! let out = run(&RunSpec::new("cover-gluss", StrategySpec::UCbal), &x).unwrap();
//! assert!((out.trace.wealth.final_wealth() - 81.0 / 64.0).abs() < 1e-12);
//! ```

pub mod anticor;
pub mod backtest;
pub mod benchmarks;
pub mod cli;
pub mod error;
pub mod market_data;
pub mod meta;
pub mod metrics;
pub mod portfolio;
pub mod report;
pub mod strategy;

pub use anticor::{anticor_step, Anticor};
pub use backtest::{
    causality_audit, run, run_with, simulate, sweep_commission, sweep_max_window, sweep_window, universal_band,
    RunOutcome, RunSpec, StrategyParams, StrategySpec, SweepResult, Trace,
};
pub use benchmarks::{
    best_stock_hindsight, cbal_star, Bah, Cbal, CbalStarOptions, DirichletSampler, Eg, Lz, Universal,
};
pub use error::{Error, Result};
pub use market_data::{
    cover_gluss, load_market_file, load_prices, random_market, reverse_market, History, InputFormat, MarketSequence,
    PriceSeries,
};
pub use meta::{bah_over, meta_market, Compound};
pub use metrics::{annualize, annualize_with, MetricsConfig, PerformanceReport};
pub use portfolio::{commission_return, daily_return, drift, total_return, wealth_series, Portfolio, WealthSeries};
pub use report::{emit_report, ReportData, ReportFormat, ResultTable};
pub use strategy::{Strategy, StrategyHandle};
