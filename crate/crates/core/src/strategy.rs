use crate::market_data::History;
use crate::portfolio::Portfolio;

/// An online trading rule.
///
/// The engine calls [`Strategy::next_portfolio`] once per day, in order, with
/// the days observed so far. Before the first day `history` is empty and
/// `drifted` is the uniform portfolio.
pub trait Strategy: Send {
    fn name(&self) -> String;

    /// Portfolio to hold on day `history.len() + 1`.
    ///
    /// `drifted` is this strategy's previous portfolio after the last observed
    /// day's price moves.
    fn next_portfolio(&mut self, history: History<'_>, drifted: &Portfolio) -> Portfolio;
}

/// Boxed strategy; what families and meta-strategies hold.
pub type StrategyHandle = Box<dyn Strategy>;

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn next_portfolio(&mut self, history: History<'_>, drifted: &Portfolio) -> Portfolio {
        (**self).next_portfolio(history, drifted)
    }
}
