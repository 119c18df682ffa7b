//! Strategies as assets.
//!
//! A family of strategies running on a market produces wealth curves; their
//! day-over-day ratios form a derived market that another family can trade.
//! [`Compound`] stacks such families and holds a uniform buy-and-hold over the
//! top one. `BAH_W(ANTICOR)` is one level of `{ANTICOR_w : 2 <= w <= W}`, and
//! `BAH_W(ANTICOR(ANTICOR))` is two.
//!
//! Only real assets are ever traded. The portfolio a compound strategy
//! reports is the flattened mix: top-level buy-and-hold weights times each
//! member's weights over the level below, down to the real assets. Internal
//! layers never pay commission; the engine charges it once on the flattened
//! portfolio.

use rayon::prelude::*;

use crate::anticor::Anticor;
use crate::backtest::simulate;
use crate::error::{Error, Result};
use crate::market_data::{History, MarketSequence};
use crate::portfolio::{Portfolio, WealthSeries};
use crate::strategy::{Strategy, StrategyHandle};

/// Daily wealth ratios of `s` run on `x` without commission.
pub fn strategy_as_asset(s: &mut dyn Strategy, x: &MarketSequence) -> Result<Vec<f64>> {
    Ok(simulate(s, x, 0.0)?.wealth.daily_factors().to_vec())
}

/// Derived market whose asset `k` is strategy `k`'s wealth curve.
pub fn meta_market(strategies: &mut [StrategyHandle], x: &MarketSequence) -> Result<MarketSequence> {
    let columns = strategies
        .iter_mut()
        .map(|s| strategy_as_asset(s.as_mut(), x))
        .collect::<Result<Vec<_>>>()?;
    let relatives = (0..x.n_days())
        .flat_map(|t| columns.iter().map(move |c| c[t]))
        .collect();
    let names = strategies.iter().map(|s| s.name()).collect();
    MarketSequence::from_flat(names, relatives)
}

/// Uniform buy-and-hold over strategies: the mean of their wealth curves.
pub fn bah_over(strategies: &mut [StrategyHandle], x: &MarketSequence) -> Result<WealthSeries> {
    if strategies.is_empty() {
        return Err(Error::Argument("buy-and-hold over an empty strategy list".into()));
    }
    let curves = strategies
        .iter_mut()
        .map(|s| Ok(simulate(s.as_mut(), x, 0.0)?.wealth))
        .collect::<Result<Vec<_>>>()?;
    let k = curves.len() as f64;
    let mut factors = Vec::with_capacity(x.n_days());
    let mut prev_log = 0.0;
    for t in 1..=x.n_days() {
        let logs: Vec<f64> = curves.iter().map(|c| c.log_value(t)).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_mean = top + (logs.iter().map(|l| (l - top).exp()).sum::<f64>() / k).ln();
        factors.push((log_mean - prev_log).exp());
        prev_log = log_mean;
    }
    WealthSeries::from_factors(factors)
}

/// `{ANTICOR_w : w = 2..=max_w}`.
pub fn anticor_over(max_w: usize) -> Result<Vec<StrategyHandle>> {
    if max_w < 2 {
        return Err(Error::Argument(format!(
            "maximal window must be at least 2, got {max_w}"
        )));
    }
    (2..=max_w)
        .map(|w| Ok(Box::new(Anticor::new(w)?) as StrategyHandle))
        .collect()
}

/// A family of strategies sharing one market, each with its own holdings and wealth.
struct Family {
    members: Vec<StrategyHandle>,
    holdings: Vec<Portfolio>,
    log_wealth: Vec<f64>,
}

impl Family {
    fn new(members: Vec<StrategyHandle>) -> Self {
        Self {
            members,
            holdings: Vec::new(),
            log_wealth: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn reset(&mut self, m: usize) {
        self.holdings = vec![Portfolio::uniform(m); self.members.len()];
        self.log_wealth = vec![0.0; self.members.len()];
    }

    /// Applies one day of the family's market; appends each member's wealth ratio to `out`.
    fn observe(&mut self, x: &[f64], out: &mut Vec<f64>) {
        for (b, lw) in self.holdings.iter_mut().zip(&mut self.log_wealth) {
            let r = b.dot(x);
            *lw += r.ln();
            out.push(r);
            *b = b.drifted(x);
        }
    }

    fn decide(&mut self, history: History<'_>) {
        self.members
            .par_iter_mut()
            .zip(self.holdings.par_iter_mut())
            .for_each(|(s, b)| *b = s.next_portfolio(history, b));
    }
}

/// Uniform buy-and-hold over the top of a stack of strategy families.
pub struct Compound {
    name: String,
    levels: Vec<Family>,
    /// Derived market of level `k + 1`, produced by level `k`.
    derived: Vec<Vec<f64>>,
    seen: usize,
    m: usize,
}

impl Compound {
    /// `levels[0]` trades the real market; `levels[k]` trades the wealth curves of `levels[k - 1]`.
    pub fn new(name: impl Into<String>, levels: Vec<Vec<StrategyHandle>>) -> Result<Self> {
        if levels.is_empty() || levels.iter().any(Vec::is_empty) {
            return Err(Error::Argument(
                "every compounding level needs at least one strategy".into(),
            ));
        }
        let derived = vec![Vec::new(); levels.len() - 1];
        Ok(Self {
            name: name.into(),
            levels: levels.into_iter().map(Family::new).collect(),
            derived,
            seen: 0,
            m: 0,
        })
    }

    /// Buy-and-hold over arbitrary strategies.
    pub fn bah(strategies: Vec<StrategyHandle>) -> Result<Self> {
        Self::new("bah-over", vec![strategies])
    }

    /// `BAH_W(ANTICOR)`.
    pub fn anti1(max_w: usize) -> Result<Self> {
        Self::new(format!("anti1-{max_w}"), vec![anticor_over(max_w)?])
    }

    /// `BAH_W(ANTICOR(ANTICOR))`.
    pub fn anti2(max_w: usize) -> Result<Self> {
        Self::new(
            format!("anti2-{max_w}"),
            vec![anticor_over(max_w)?, anticor_over(max_w)?],
        )
    }

    fn restart(&mut self, m: usize) {
        self.m = m;
        self.seen = 0;
        let mut width = m;
        for (k, level) in self.levels.iter_mut().enumerate() {
            level.reset(width);
            width = level.len();
            if k < self.derived.len() {
                self.derived[k].clear();
            }
        }
    }

    /// Feeds one real market vector up through every level.
    fn observe(&mut self, x: &[f64]) {
        let mut input = x.to_vec();
        for k in 0..self.levels.len() {
            let mut ratios = Vec::with_capacity(self.levels[k].len());
            self.levels[k].observe(&input, &mut ratios);
            if k < self.derived.len() {
                self.derived[k].extend_from_slice(&ratios);
            }
            input = ratios;
        }
    }

    fn flatten(&self) -> Vec<f64> {
        let top = self.levels.last().unwrap();
        let peak = top.log_wealth.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut mix: Vec<f64> = top.log_wealth.iter().map(|l| (l - peak).exp()).collect();
        let total: f64 = mix.iter().sum();
        mix.iter_mut().for_each(|v| *v /= total);
        for level in self.levels.iter().rev() {
            let width = level.holdings[0].len();
            let mut below = vec![0.0; width];
            for (weight, b) in mix.iter().zip(&level.holdings) {
                for (acc, v) in below.iter_mut().zip(b.weights()) {
                    *acc += weight * v;
                }
            }
            mix = below;
        }
        mix
    }
}

impl Strategy for Compound {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn next_portfolio(&mut self, history: History<'_>, _drifted: &Portfolio) -> Portfolio {
        let m = history.n_assets();
        if history.len() < self.seen || m != self.m || self.levels[0].holdings.is_empty() {
            self.restart(m);
        }
        for t in self.seen..history.len() {
            self.observe(history.day(t));
        }
        self.seen = history.len();

        self.levels[0].decide(history);
        for k in 1..self.levels.len() {
            let width = self.levels[k - 1].len();
            let view = History::new(&self.derived[k - 1], width);
            self.levels[k].decide(view);
        }
        let mut mix = self.flatten();
        let total: f64 = mix.iter().sum();
        mix.iter_mut().for_each(|v| *v /= total);
        Portfolio::from_simplex(mix)
    }
}
