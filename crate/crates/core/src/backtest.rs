//! Day-by-day execution of strategies, run specifications, and parameter sweeps.

use rayon::prelude::*;

use crate::anticor::Anticor;
use crate::benchmarks::{
    best_stock_hindsight, cbal_star, Bah, Cbal, CbalStarOptions, DirichletSampler, Eg, Lz, Universal,
};
use crate::error::{Error, Result};
use crate::market_data::{History, MarketSequence};
use crate::meta::Compound;
use crate::metrics::{annualize_with, MetricsConfig, PerformanceReport};
use crate::portfolio::{check_gamma, day_factor, wealth_series, Portfolio, WealthSeries};
use crate::strategy::{Strategy, StrategyHandle};

/// Portfolios held on each day and the resulting wealth.
#[derive(Debug, Clone)]
pub struct Trace {
    pub portfolios: Vec<Portfolio>,
    pub wealth: WealthSeries,
}

const SIMPLEX_TOL: f64 = 1e-9;

/// Runs `strategy` online over `x`: on day `t` it sees days `1..t-1`, its
/// holdings drift with prices, and moving back to target costs `gamma / 2`
/// per dollar traded.
pub fn simulate(strategy: &mut dyn Strategy, x: &MarketSequence, gamma: f64) -> Result<Trace> {
    check_gamma(gamma)?;
    let m = x.n_assets();
    let mut drifted = Portfolio::uniform(m);
    let mut held: Option<Portfolio> = None;
    let mut portfolios = Vec::with_capacity(x.n_days());
    let mut factors = Vec::with_capacity(x.n_days());
    for t in 0..x.n_days() {
        let b = decide(strategy, x.history(t), &drifted)?;
        let day = x.day(t);
        factors.push(day_factor(&b, day, held.as_ref(), gamma));
        drifted = b.drifted(day);
        held = Some(drifted.clone());
        portfolios.push(b);
    }
    Ok(Trace {
        portfolios,
        wealth: WealthSeries::from_factors(factors)?,
    })
}

fn decide(strategy: &mut dyn Strategy, history: History<'_>, drifted: &Portfolio) -> Result<Portfolio> {
    let b = strategy.next_portfolio(history, drifted);
    if b.len() != history.n_assets() {
        return Err(Error::Dimension(format!(
            "{} returned {} weights for a {}-asset market",
            strategy.name(),
            b.len(),
            history.n_assets()
        )));
    }
    debug_assert!(b.is_valid(SIMPLEX_TOL), "{} left the simplex: {:?}", strategy.name(), b);
    Ok(b)
}

/// Checks that decisions never depend on the future. For each day `t` the
/// days after `t` are replaced with a different future, the strategy is rebuilt
/// from that market and re-run, and its first `t + 1` decisions must match the
/// unmodified run exactly. Returns the first day whose decision changed.
pub fn causality_audit<F>(make: F, x: &MarketSequence) -> Result<Option<usize>>
where
    F: Fn(&MarketSequence) -> Result<StrategyHandle>,
{
    let full = simulate(make(x)?.as_mut(), x, 0.0)?.portfolios;
    let m = x.n_assets();
    for t in 0..x.n_days() {
        let mut data = x.as_flat().to_vec();
        let future = &mut data[t * m..];
        future.reverse();
        future.iter_mut().for_each(|v| *v = 1.37 / *v);
        let shadow_market = MarketSequence::from_flat(x.names().to_vec(), data)?;
        let shadow = simulate(make(&shadow_market)?.as_mut(), &shadow_market, 0.0)?.portfolios;
        if let Some(day) = (0..=t).find(|&k| shadow[k] != full[k]) {
            return Ok(Some(day));
        }
    }
    Ok(None)
}

/// A strategy and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    UBah,
    BestStock,
    UCbal,
    CbalStar { tol: f64 },
    Eg { eta: f64 },
    Universal { n_samples: usize },
    Lz,
    Anticor { w: usize },
    Anti1 { max_w: usize },
    Anti2 { max_w: usize },
}

impl StrategySpec {
    /// Every id accepted by [`StrategySpec::parse`].
    pub const IDS: &'static [&'static str] = &[
        "u-bah",
        "best-stock",
        "u-cbal",
        "cbal-star",
        "eg",
        "universal",
        "lz",
        "anticor",
        "anti1",
        "anti2",
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Self::UBah => "u-bah",
            Self::BestStock => "best-stock",
            Self::UCbal => "u-cbal",
            Self::CbalStar { .. } => "cbal-star",
            Self::Eg { .. } => "eg",
            Self::Universal { .. } => "universal",
            Self::Lz => "lz",
            Self::Anticor { .. } => "anticor",
            Self::Anti1 { .. } => "anti1",
            Self::Anti2 { .. } => "anti2",
        }
    }

    /// Short display label, e.g. for table rows.
    pub fn label(&self) -> String {
        match self {
            Self::UBah => "MARKET (U-BAH)".into(),
            Self::BestStock => "BEST STOCK".into(),
            Self::UCbal => "U-CBAL".into(),
            Self::CbalStar { .. } => "CBAL*".into(),
            Self::Eg { .. } => "EG".into(),
            Self::Universal { .. } => "UNIVERSAL".into(),
            Self::Lz => "LZ".into(),
            Self::Anticor { w } => format!("ANTICOR_{w}"),
            Self::Anti1 { .. } => "ANTI1".into(),
            Self::Anti2 { .. } => "ANTI2".into(),
        }
    }

    /// Online strategies see only the past; the rest are computed in hindsight.
    pub fn is_online(&self) -> bool {
        !matches!(self, Self::BestStock | Self::CbalStar { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::CbalStar { tol } if tol.is_nan() || tol <= 0.0 => {
                Err(Error::Argument(format!("tol must be positive, got {tol}")))
            }
            Self::Eg { eta } if !(eta >= 0.0 && eta.is_finite()) => {
                Err(Error::Argument(format!("eta must be nonnegative, got {eta}")))
            }
            Self::Universal { n_samples: 0 } => Err(Error::Argument("universal needs at least one sample".into())),
            Self::Anticor { w } if w < 2 => Err(Error::Argument(format!("window w must be at least 2, got {w}"))),
            Self::Anti1 { max_w } | Self::Anti2 { max_w } if max_w < 2 => Err(Error::Argument(format!(
                "maximal window W must be at least 2, got {max_w}"
            ))),
            _ => Ok(()),
        }
    }

    /// Builds the strategy for market `x`; hindsight strategies read all of `x` here.
    pub fn instantiate(&self, x: &MarketSequence, seed: u64) -> Result<StrategyHandle> {
        self.validate()?;
        Ok(match *self {
            Self::UBah => Box::new(Bah::uniform()),
            Self::BestStock => Box::new(Bah::new(best_stock_hindsight(x))),
            Self::UCbal => Box::new(Cbal::uniform()),
            Self::CbalStar { tol } => {
                let opts = CbalStarOptions {
                    tol,
                    ..CbalStarOptions::default()
                };
                Box::new(Cbal::new(cbal_star(x, opts)?.portfolio))
            }
            Self::Eg { eta } => Box::new(Eg::new(eta)?),
            Self::Universal { n_samples } => Box::new(Universal::new(DirichletSampler::half(seed), n_samples)?),
            Self::Lz => Box::new(Lz::new()),
            Self::Anticor { w } => Box::new(Anticor::new(w)?),
            Self::Anti1 { max_w } => Box::new(Compound::anti1(max_w)?),
            Self::Anti2 { max_w } => Box::new(Compound::anti2(max_w)?),
        })
    }

    /// The comparison suite with default parameters.
    pub fn suite() -> Vec<StrategySpec> {
        vec![
            Self::UBah,
            Self::BestStock,
            Self::CbalStar { tol: 1e-10 },
            Self::UCbal,
            Self::Anti1 {
                max_w: DEFAULT_MAX_WINDOW,
            },
            Self::Anti2 {
                max_w: DEFAULT_MAX_WINDOW,
            },
            Self::Lz,
            Self::Eg { eta: DEFAULT_ETA },
            Self::Universal {
                n_samples: DEFAULT_UNIVERSAL_SAMPLES,
            },
        ]
    }
}

/// Parameters that [`StrategySpec::parse`] draws from; unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyParams {
    pub w: usize,
    pub max_w: usize,
    pub eta: f64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for StrategyParams {
    fn default() -> Self {
        Self {
            w: 5,
            max_w: DEFAULT_MAX_WINDOW,
            eta: DEFAULT_ETA,
            samples: DEFAULT_UNIVERSAL_SAMPLES,
            tol: 1e-10,
        }
    }
}

impl StrategySpec {
    /// Looks up `id` in [`StrategySpec::IDS`] and validates the parameters.
    pub fn parse(id: &str, params: &StrategyParams) -> Result<StrategySpec> {
        let spec = match id {
            "u-bah" | "market" => Self::UBah,
            "best-stock" => Self::BestStock,
            "u-cbal" => Self::UCbal,
            "cbal-star" => Self::CbalStar { tol: params.tol },
            "eg" => Self::Eg { eta: params.eta },
            "universal" => Self::Universal {
                n_samples: params.samples,
            },
            "lz" => Self::Lz,
            "anticor" => Self::Anticor { w: params.w },
            "anti1" => Self::Anti1 { max_w: params.max_w },
            "anti2" => Self::Anti2 { max_w: params.max_w },
            other => {
                return Err(Error::Argument(format!(
                    "unknown strategy '{other}', expected one of: {}",
                    Self::IDS.join(", ")
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub const DEFAULT_MAX_WINDOW: usize = 30;
pub const DEFAULT_ETA: f64 = 0.01;
pub const DEFAULT_UNIVERSAL_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_040_101;

/// One (market, strategy, commission, seed) experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub market: String,
    pub strategy: StrategySpec,
    pub gamma: f64,
    pub seed: u64,
}

impl RunSpec {
    pub fn new(market: impl Into<String>, strategy: StrategySpec) -> Self {
        Self {
            market: market.into(),
            strategy,
            gamma: 0.0,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: Trace,
    pub report: PerformanceReport,
}

pub fn run(spec: &RunSpec, x: &MarketSequence) -> Result<RunOutcome> {
    run_with(spec, x, MetricsConfig::default())
}

pub fn run_with(spec: &RunSpec, x: &MarketSequence, metrics: MetricsConfig) -> Result<RunOutcome> {
    check_gamma(spec.gamma)?;
    let mut strategy = spec.strategy.instantiate(x, spec.seed)?;
    let trace = simulate(strategy.as_mut(), x, spec.gamma)?;
    let report = if x.n_days() >= 2 {
        annualize_with(trace.wealth.daily_factors(), metrics)?
    } else {
        let total = trace.wealth.final_wealth();
        PerformanceReport {
            total_return: total,
            annualized_return: f64::NAN,
            annualized_risk: 0.0,
            sharpe: None,
            n_days: x.n_days(),
        }
    };
    Ok(RunOutcome { trace, report })
}

/// Mean and standard error of universal-portfolio final wealth across seeds.
pub fn universal_band(x: &MarketSequence, n_samples: usize, seeds: &[u64]) -> Result<(f64, f64)> {
    if seeds.is_empty() {
        return Err(Error::Argument("need at least one seed".into()));
    }
    let finals = seeds
        .par_iter()
        .map(|&seed| {
            let spec = RunSpec::new("", StrategySpec::Universal { n_samples }).with_seed(seed);
            Ok(run(&spec, x)?.trace.wealth.final_wealth())
        })
        .collect::<Result<Vec<f64>>>()?;
    let k = finals.len() as f64;
    let mean = finals.iter().sum::<f64>() / k;
    let stderr = if finals.len() > 1 {
        (finals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt() / k.sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

/// Final returns along one parameter axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_name: String,
    pub axis: Vec<f64>,
    /// `(name, value at each axis point)`.
    pub series: Vec<(String, Vec<f64>)>,
}

impl SweepResult {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

fn check_axis<T: PartialOrd + Copy>(axis: &[T]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Argument("sweep range is empty".into()));
    }
    if axis.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Argument("sweep axis must be strictly increasing".into()));
    }
    Ok(())
}

fn final_wealth(strategy: StrategySpec, x: &MarketSequence, gamma: f64) -> Result<f64> {
    let spec = RunSpec::new("", strategy).with_gamma(gamma);
    Ok(run(&spec, x)?.trace.wealth.final_wealth())
}

fn baselines(x: &MarketSequence, gamma: f64) -> Result<(f64, f64)> {
    Ok((
        final_wealth(StrategySpec::UBah, x, gamma)?,
        final_wealth(StrategySpec::BestStock, x, gamma)?,
    ))
}

/// `ANTICOR_w` for each `w`, with the market and best stock for reference.
pub fn sweep_window(x: &MarketSequence, windows: &[usize], gamma: f64) -> Result<SweepResult> {
    check_axis(windows)?;
    let values = windows
        .par_iter()
        .map(|&w| final_wealth(StrategySpec::Anticor { w }, x, gamma))
        .collect::<Result<Vec<_>>>()?;
    let (market, best) = baselines(x, gamma)?;
    Ok(SweepResult {
        axis_name: "w".into(),
        axis: windows.iter().map(|&w| w as f64).collect(),
        series: vec![
            ("anticor".into(), values),
            ("market".into(), vec![market; windows.len()]),
            ("best-stock".into(), vec![best; windows.len()]),
        ],
    })
}

/// `BAH_W(ANTICOR)` for each maximal window `W`.
pub fn sweep_max_window(x: &MarketSequence, max_windows: &[usize], gamma: f64) -> Result<SweepResult> {
    check_axis(max_windows)?;
    let values = max_windows
        .par_iter()
        .map(|&max_w| final_wealth(StrategySpec::Anti1 { max_w }, x, gamma))
        .collect::<Result<Vec<_>>>()?;
    let (market, best) = baselines(x, gamma)?;
    Ok(SweepResult {
        axis_name: "W".into(),
        axis: max_windows.iter().map(|&w| w as f64).collect(),
        series: vec![
            ("anti1".into(), values),
            ("market".into(), vec![market; max_windows.len()]),
            ("best-stock".into(), vec![best; max_windows.len()]),
        ],
    })
}

/// Final wealth of each strategy under each commission rate.
///
/// Decisions do not depend on the commission rate, so each strategy runs once
/// and its recorded portfolios are re-priced at every `gamma`.
pub fn sweep_commission(x: &MarketSequence, gammas: &[f64], strategies: &[StrategySpec]) -> Result<SweepResult> {
    check_axis(gammas)?;
    for &g in gammas {
        check_gamma(g)?;
    }
    let mut all = strategies.to_vec();
    all.extend([StrategySpec::UBah, StrategySpec::BestStock]);
    let series = all
        .par_iter()
        .map(|spec| {
            let trace = run(&RunSpec::new("", spec.clone()), x)?.trace;
            let values = gammas
                .iter()
                .map(|&g| Ok(wealth_series(&trace.portfolios, x, g)?.final_wealth()))
                .collect::<Result<Vec<_>>>()?;
            let name = match spec {
                StrategySpec::UBah => "market".to_string(),
                other => other.id().to_string(),
            };
            Ok((name, values))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axis_name: "gamma".into(),
        axis: gammas.to_vec(),
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::{cover_gluss, random_market};
    use crate::portfolio::commission_return;
    use approx::assert_relative_eq;

    #[test]
    fn ubah_on_no_growth_market() {
        let x = cover_gluss(50).unwrap();
        let out = run(&RunSpec::new("cg", StrategySpec::UBah), &x).unwrap();
        assert_relative_eq!(out.trace.wealth.final_wealth(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ucbal_closed_form() {
        let x = cover_gluss(100).unwrap();
        let out = run(&RunSpec::new("cg", StrategySpec::UCbal), &x).unwrap();
        assert_relative_eq!(
            out.trace.wealth.final_wealth(),
            (9.0f64 / 8.0).powi(50),
            max_relative = 1e-12
        );
    }

    #[test]
    fn engine_wealth_matches_commission_formula() {
        let x = random_market(120, 4, 0.7, 1.4, 21).unwrap();
        for spec in [
            StrategySpec::Anticor { w: 3 },
            StrategySpec::Eg { eta: 0.05 },
            StrategySpec::Lz,
        ] {
            let out = run(&RunSpec::new("r", spec).with_gamma(0.004), &x).unwrap();
            let formula = commission_return(&out.trace.portfolios, &x, 0.004).unwrap();
            assert_relative_eq!(out.trace.wealth.final_wealth(), formula, max_relative = 1e-10);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let x = cover_gluss(4).unwrap();
        assert!(run(&RunSpec::new("", StrategySpec::Anticor { w: 1 }), &x).is_err());
        assert!(run(&RunSpec::new("", StrategySpec::UBah).with_gamma(1.0), &x).is_err());
        assert!(run(&RunSpec::new("", StrategySpec::Universal { n_samples: 0 }), &x).is_err());
    }

    #[test]
    fn sweeps_on_flat_market() {
        let ones = MarketSequence::from_rows(vec![vec![1.0; 3]; 20]).unwrap();
        let s = sweep_window(&ones, &[2, 3, 4], 0.0).unwrap();
        assert!(s.series.iter().all(|(_, v)| v.iter().all(|&r| r == 1.0)));
        assert!(sweep_window(&ones, &[3, 2], 0.0).is_err());
        assert!(sweep_window(&ones, &[], 0.0).is_err());
    }

    #[test]
    fn zero_commission_point_matches_plain_run() {
        let x = random_market(60, 3, 0.7, 1.4, 8).unwrap();
        let s = sweep_commission(&x, &[0.0, 0.005], &[StrategySpec::Anti1 { max_w: 5 }]).unwrap();
        let plain = final_wealth(StrategySpec::Anti1 { max_w: 5 }, &x, 0.0).unwrap();
        assert_eq!(s.series("anti1").unwrap()[0], plain);
        let taxed = final_wealth(StrategySpec::Anti1 { max_w: 5 }, &x, 0.005).unwrap();
        assert_relative_eq!(s.series("anti1").unwrap()[1], taxed, max_relative = 1e-10);
    }

    #[test]
    fn audit_passes_for_online_strategies() {
        let x = random_market(24, 3, 0.7, 1.4, 2).unwrap();
        let anticor = |_: &MarketSequence| Ok(Box::new(Anticor::new(2)?) as StrategyHandle);
        assert_eq!(causality_audit(anticor, &x).unwrap(), None);
        let anti2 = |_: &MarketSequence| Ok(Box::new(Compound::anti2(3)?) as StrategyHandle);
        assert_eq!(causality_audit(anti2, &x).unwrap(), None);
    }

    struct Oracle(MarketSequence);

    impl Strategy for Oracle {
        fn name(&self) -> String {
            "oracle".into()
        }

        fn next_portfolio(&mut self, history: History<'_>, _drifted: &Portfolio) -> Portfolio {
            let best = crate::benchmarks::winner(self.0.day(history.len()));
            Portfolio::indicator(history.n_assets(), best)
        }
    }

    #[test]
    fn audit_catches_lookahead() {
        let x = random_market(10, 3, 0.5, 2.0, 4).unwrap();
        let spy = |m: &MarketSequence| Ok(Box::new(Oracle(m.clone())) as StrategyHandle);
        assert_eq!(causality_audit(spy, &x).unwrap(), Some(0));

        let hindsight = |m: &MarketSequence| StrategySpec::CbalStar { tol: 1e-10 }.instantiate(m, 0);
        assert!(causality_audit(hindsight, &x).unwrap().is_some());
    }
}
