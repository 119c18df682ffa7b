//! Comparison strategies: buy-and-hold, constant rebalancing, the hindsight
//! optimal constant-rebalanced portfolio, exponentiated gradient, Cover's
//! universal portfolio with a Dirichlet(1/2) prior, and Lempel-Ziv winner
//! prediction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::market_data::{History, MarketSequence};
use crate::portfolio::Portfolio;
use crate::strategy::Strategy;

/// Buys `b` on the first day and never trades again.
#[derive(Debug, Clone)]
pub struct Bah {
    target: Option<Portfolio>,
}

impl Bah {
    pub fn new(b: Portfolio) -> Self {
        Self { target: Some(b) }
    }

    /// Uniform buy-and-hold; the asset count is taken from the market.
    pub fn uniform() -> Self {
        Self { target: None }
    }
}

impl Strategy for Bah {
    fn name(&self) -> String {
        if self.target.is_some() { "bah" } else { "u-bah" }.into()
    }

    fn next_portfolio(&mut self, history: History<'_>, drifted: &Portfolio) -> Portfolio {
        if history.is_empty() {
            self.target
                .clone()
                .unwrap_or_else(|| Portfolio::uniform(history.n_assets()))
        } else {
            drifted.clone()
        }
    }
}

/// Rebalances to `b` every day.
#[derive(Debug, Clone)]
pub struct Cbal {
    target: Option<Portfolio>,
}

impl Cbal {
    pub fn new(b: Portfolio) -> Self {
        Self { target: Some(b) }
    }

    pub fn uniform() -> Self {
        Self { target: None }
    }
}

impl Strategy for Cbal {
    fn name(&self) -> String {
        if self.target.is_some() { "cbal" } else { "u-cbal" }.into()
    }

    fn next_portfolio(&mut self, history: History<'_>, _drifted: &Portfolio) -> Portfolio {
        let m = history.n_assets();
        self.target.get_or_insert_with(|| Portfolio::uniform(m)).clone()
    }
}

/// Index of the asset with the largest total growth; ties go to the lowest index.
pub fn best_stock_index(x: &MarketSequence) -> usize {
    let mut log_growth = vec![0.0; x.n_assets()];
    for day in x.days() {
        for (g, v) in log_growth.iter_mut().zip(day) {
            *g += v.ln();
        }
    }
    let mut best = 0;
    for (j, g) in log_growth.iter().enumerate() {
        if *g > log_growth[best] {
            best = j;
        }
    }
    best
}

/// Indicator portfolio of the best stock in hindsight.
pub fn best_stock_hindsight(x: &MarketSequence) -> Portfolio {
    Portfolio::indicator(x.n_assets(), best_stock_index(x))
}

/// Settings for [`cbal_star`].
#[derive(Debug, Clone, Copy)]
pub struct CbalStarOptions {
    /// Bound on the suboptimality of `sum_t ln(b . x_t)`, i.e. on the log of
    /// the wealth shortfall.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for CbalStarOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CbalStar {
    pub portfolio: Portfolio,
    pub total_return: f64,
    /// Certified upper bound on `max_b sum_t ln(b . x_t)` minus the achieved value.
    pub gap: f64,
    pub iterations: usize,
}

/// Log-optimal constant-rebalanced portfolio in hindsight.
///
/// Maximizes `f(b) = sum_t ln(b . x_t)` from the uniform portfolio by Newton
/// steps restricted to the assets currently held, with an exact line search
/// that keeps every weight nonnegative. An asset whose weight reaches zero
/// leaves the active set; a zero-weight asset is re-seeded when it offers the
/// steepest ascent. With `g(j) = mean_t x_t(j) / (b . x_t)`, concavity gives
/// the stopping certificate `f* - f(b) <= n (max_j g(j) - 1)`.
pub fn cbal_star(x: &MarketSequence, opts: CbalStarOptions) -> Result<CbalStar> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Argument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let (n, m) = (x.n_days(), x.n_assets());
    let data = x.as_flat();
    let mut b = vec![1.0 / m as f64; m];
    let mut returns = vec![0.0; n];
    let mut dir_returns = vec![0.0; n];
    let mut g = vec![0.0; m];
    let mut gap = f64::INFINITY;

    for iteration in 0..=opts.max_iterations {
        for (r, day) in returns.iter_mut().zip(data.chunks_exact(m)) {
            *r = day.iter().zip(&b).map(|(x, b)| x * b).sum();
        }
        g.iter_mut().for_each(|v| *v = 0.0);
        for (r, day) in returns.iter().zip(data.chunks_exact(m)) {
            let inv = 1.0 / r;
            for (gj, xj) in g.iter_mut().zip(day) {
                *gj += xj * inv;
            }
        }
        g.iter_mut().for_each(|v| *v /= n as f64);
        let g_held = g
            .iter()
            .zip(&b)
            .filter(|(_, b)| **b > 0.0)
            .map(|(g, _)| *g)
            .fold(f64::NEG_INFINITY, f64::max);
        let g_all = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        gap = n as f64 * (g_all - 1.0).max(0.0);
        if gap <= opts.tol {
            let portfolio = Portfolio::new(b)?;
            let log_total: f64 = returns.iter().map(|r| r.ln()).sum();
            return Ok(CbalStar {
                portfolio,
                total_return: log_total.exp(),
                gap,
                iterations: iteration,
            });
        }
        if iteration == opts.max_iterations {
            break;
        }
        if g_held < g_all {
            let j = g.iter().zip(&b).position(|(g, b)| *b == 0.0 && *g == g_all).unwrap();
            b.iter_mut().for_each(|v| *v *= 1.0 - 1e-6);
            b[j] += 1e-6;
            continue;
        }

        let active: Vec<usize> = (0..m).filter(|&j| b[j] > 0.0).collect();
        let mut dir = newton_direction(data, m, &returns, &g, &active)
            .filter(|d| d.iter().zip(&g).map(|(d, g)| d * g).sum::<f64>() > 0.0)
            .unwrap_or_else(|| b.iter().zip(&g).map(|(b, g)| b * (g - 1.0)).collect());
        for (d, bj) in dir.iter_mut().zip(&b) {
            if *bj == 0.0 {
                *d = 0.0;
            }
        }

        let mut alpha_max = f64::INFINITY;
        let mut blocking = None;
        for j in 0..m {
            if dir[j] < 0.0 && -b[j] / dir[j] < alpha_max {
                alpha_max = -b[j] / dir[j];
                blocking = Some(j);
            }
        }
        for (d, day) in dir_returns.iter_mut().zip(data.chunks_exact(m)) {
            *d = day.iter().zip(&dir).map(|(x, d)| x * d).sum();
        }
        let alpha = line_search(&returns, &dir_returns, alpha_max);
        for j in 0..m {
            b[j] = (b[j] + alpha * dir[j]).max(0.0);
        }
        if let Some(j) = blocking {
            if alpha >= alpha_max * (1.0 - 1e-12) {
                b[j] = 0.0;
            }
        }
        let total: f64 = b.iter().sum();
        b.iter_mut().for_each(|v| *v /= total);
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        gap,
        best: b,
    })
}

/// Newton step for `f` on the face `{b : b(j) = 0 for j not in active, sum b = 1}`,
/// from the KKT system `[H 1; 1' 0] [d; l] = [-grad; 0]`. `None` if singular.
fn newton_direction(data: &[f64], m: usize, returns: &[f64], g: &[f64], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    if k < 2 {
        return None;
    }
    let n = returns.len() as f64;
    let size = k + 1;
    let mut a = vec![0.0; size * size];
    let mut xs = vec![0.0; k];
    for (r, day) in returns.iter().zip(data.chunks_exact(m)) {
        let inv = 1.0 / r;
        for (xi, &j) in xs.iter_mut().zip(active) {
            *xi = day[j] * inv;
        }
        for p in 0..k {
            let row = &mut a[p * size..p * size + k];
            for (cell, xq) in row.iter_mut().zip(&xs) {
                *cell -= xs[p] * xq;
            }
        }
    }
    let mut rhs = vec![0.0; size];
    for p in 0..k {
        a[p * size + k] = 1.0;
        a[k * size + p] = 1.0;
        rhs[p] = -n * g[active[p]];
    }
    let sol = solve_dense(&mut a, &mut rhs, size)?;
    let mut dir = vec![0.0; m];
    for (p, &j) in active.iter().enumerate() {
        dir[j] = sol[p];
    }
    Some(dir)
}

/// Gaussian elimination with partial pivoting; `None` on a (near) singular matrix.
fn solve_dense(a: &mut [f64], b: &mut [f64], size: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..size {
        let pivot = (col..size).max_by(|&p, &q| a[p * size + col].abs().total_cmp(&a[q * size + col].abs()))?;
        if a[pivot * size + col].abs() <= 1e-13 * scale {
            return None;
        }
        if pivot != col {
            for c in 0..size {
                a.swap(pivot * size + c, col * size + c);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..size {
            let f = a[row * size + col] / a[col * size + col];
            if f != 0.0 {
                for c in col..size {
                    a[row * size + c] -= f * a[col * size + c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; size];
    for row in (0..size).rev() {
        let s: f64 = (row + 1..size).map(|c| a[row * size + c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row * size + row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Maximizes `phi(a) = sum_t ln(r_t + a d_t)` over `[0, a_max]` by safeguarded
/// Newton on the concave `phi`. `phi'(0) > 0` whenever the direction is nonzero.
fn line_search(r: &[f64], d: &[f64], a_max: f64) -> f64 {
    let derivs = |a: f64| -> (f64, f64) {
        r.iter().zip(d).fold((0.0, 0.0), |(d1, d2), (r, d)| {
            let q = d / (r + a * d);
            (d1 + q, d2 - q * q)
        })
    };
    if a_max.is_finite() && derivs(a_max).0 >= 0.0 && r.iter().zip(d).all(|(r, d)| r + a_max * d > 0.0) {
        return a_max;
    }
    // an interior maximum exists (or the boundary is a pole); bisect-guarded Newton
    let upper = if a_max.is_finite() { a_max } else { f64::INFINITY };
    let (mut lo, mut hi) = (0.0, upper);
    let mut a = 1.0f64.min(0.5 * upper);
    for _ in 0..100 {
        let (d1, d2) = derivs(a);
        if !d1.is_finite() || d1 < 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        if d1.is_finite() && d1.abs() < 1e-15 * r.len() as f64 {
            break;
        }
        let newton = if d1.is_finite() && d2 < 0.0 {
            a - d1 / d2
        } else {
            f64::NAN
        };
        a = if newton > lo && newton < hi {
            newton
        } else if hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            2.0 * a.max(1.0)
        };
        if hi - lo <= 1e-16 * hi.max(1.0) {
            break;
        }
    }
    a.clamp(lo, upper)
}

/// Exponentiated gradient: `b(j) <- b(j) exp(eta x(j) / (b . x))`, normalized.
#[derive(Debug, Clone)]
pub struct Eg {
    eta: f64,
    current: Option<Portfolio>,
}

impl Eg {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::Argument(format!("learning rate must be nonnegative, got {eta}")));
        }
        Ok(Self { eta, current: None })
    }

    fn update(&self, b: &Portfolio, x: &[f64]) -> Portfolio {
        if self.eta == 0.0 {
            // every multiplier is exp(0) = 1
            return b.clone();
        }
        let r = b.dot(x);
        let raw: Vec<f64> = b
            .weights()
            .iter()
            .zip(x)
            .map(|(b, x)| b * (self.eta * x / r).exp())
            .collect();
        let z: f64 = raw.iter().sum();
        Portfolio::from_simplex(raw.into_iter().map(|v| v / z).collect())
    }
}

impl Strategy for Eg {
    fn name(&self) -> String {
        format!("eg-{}", self.eta)
    }

    fn next_portfolio(&mut self, history: History<'_>, _drifted: &Portfolio) -> Portfolio {
        let next = match (&self.current, history.last()) {
            (Some(b), Some(x)) => self.update(b, x),
            _ => Portfolio::uniform(history.n_assets()),
        };
        self.current = Some(next.clone());
        next
    }
}

/// Draws portfolios from a symmetric Dirichlet prior.
#[derive(Debug, Clone)]
pub struct DirichletSampler {
    alpha: f64,
    seed: u64,
}

impl DirichletSampler {
    /// The universal-portfolio prior, Dirichlet(1/2, ..., 1/2).
    pub fn half(seed: u64) -> Self {
        Self { alpha: 0.5, seed }
    }

    pub fn new(alpha: f64, seed: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Argument(format!("concentration must be positive, got {alpha}")));
        }
        Ok(Self { alpha, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `count` portfolios over `m` assets, by normalizing independent Gamma draws.
    pub fn sample(&self, m: usize, count: usize) -> Vec<Portfolio> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let gamma = Gamma::new(self.alpha, 1.0).expect("alpha checked at construction");
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let raw: Vec<f64> = (0..m).map(|_| gamma.sample(&mut rng)).collect();
            let total: f64 = raw.iter().sum();
            // all-zero draws only happen through underflow; redraw
            if total > 0.0 && total.is_finite() {
                out.push(Portfolio::from_simplex(raw.into_iter().map(|v| v / total).collect()));
            }
        }
        out
    }
}

/// Universal portfolio by Monte Carlo: the wealth-weighted average of
/// `n_samples` constant-rebalanced portfolios drawn once from the prior.
#[derive(Debug, Clone)]
pub struct Universal {
    sampler: DirichletSampler,
    n_samples: usize,
    samples: Vec<Portfolio>,
    log_wealth: Vec<f64>,
    seen: usize,
}

impl Universal {
    pub fn new(sampler: DirichletSampler, n_samples: usize) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::Argument("universal needs at least one sample".into()));
        }
        Ok(Self {
            sampler,
            n_samples,
            samples: Vec::new(),
            log_wealth: Vec::new(),
            seen: 0,
        })
    }

    /// The sampled constant-rebalanced portfolios (empty before the first decision).
    pub fn samples(&self) -> &[Portfolio] {
        &self.samples
    }

    fn ensure_samples(&mut self, m: usize) {
        if self.samples.is_empty() || self.samples[0].len() != m {
            self.samples = self.sampler.sample(m, self.n_samples);
            self.log_wealth = vec![0.0; self.n_samples];
            self.seen = 0;
        }
    }
}

impl Strategy for Universal {
    fn name(&self) -> String {
        format!("universal-{}", self.n_samples)
    }

    fn next_portfolio(&mut self, history: History<'_>, _drifted: &Portfolio) -> Portfolio {
        let m = history.n_assets();
        if history.len() < self.seen {
            self.samples.clear();
        }
        self.ensure_samples(m);
        for t in self.seen..history.len() {
            let x = history.day(t);
            for (lw, b) in self.log_wealth.iter_mut().zip(&self.samples) {
                *lw += b.dot(x).ln();
            }
        }
        self.seen = history.len();

        let top = self.log_wealth.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut mix = vec![0.0; m];
        let mut total = 0.0;
        for (lw, b) in self.log_wealth.iter().zip(&self.samples) {
            let weight = (lw - top).exp();
            total += weight;
            for (acc, v) in mix.iter_mut().zip(b.weights()) {
                *acc += weight * v;
            }
        }
        mix.iter_mut().for_each(|v| *v /= total);
        Portfolio::from_simplex(mix)
    }
}

/// Mean final wealth of the sampled constant-rebalanced portfolios.
pub fn sampled_cbal_mean_wealth(sampler: &DirichletSampler, n_samples: usize, x: &MarketSequence) -> f64 {
    let samples = sampler.sample(x.n_assets(), n_samples);
    let logs: Vec<f64> = samples
        .iter()
        .map(|b| x.days().map(|day| b.dot(day).ln()).sum())
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = logs.iter().map(|l| (l - top).exp()).sum::<f64>() / n_samples as f64;
    mean * top.exp()
}

/// One node of the incremental-parsing tree. `count` is the number of parsed
/// symbols whose parse path included this node.
#[derive(Debug, Clone, Default)]
pub struct LzNode {
    pub children: std::collections::BTreeMap<usize, usize>,
    pub count: u64,
}

/// LZ78 parse tree over an alphabet of `m` symbols, with add-one smoothed
/// next-symbol probabilities at the current context.
#[derive(Debug, Clone)]
pub struct LzTree {
    m: usize,
    nodes: Vec<LzNode>,
    path: Vec<usize>,
}

impl LzTree {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            nodes: vec![LzNode::default()],
            path: vec![0],
        }
    }

    pub fn root(&self) -> &LzNode {
        &self.nodes[0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Extends the parse with one symbol. A known continuation descends; an
    /// unknown one adds a leaf and the next phrase restarts at the root.
    pub fn push(&mut self, symbol: usize) {
        assert!(symbol < self.m, "symbol {symbol} outside alphabet of {}", self.m);
        let context = *self.path.last().unwrap();
        let child = self.nodes[context].children.get(&symbol).copied();
        let target = child.unwrap_or_else(|| {
            self.nodes.push(LzNode::default());
            let id = self.nodes.len() - 1;
            self.nodes[context].children.insert(symbol, id);
            id
        });
        for &id in &self.path {
            self.nodes[id].count += 1;
        }
        self.nodes[target].count += 1;
        if child.is_some() {
            self.path.push(target);
        } else {
            self.path.truncate(1);
        }
    }

    /// `p(j) = (count(child j) + 1) / (sum of child counts + m)` at the current context.
    pub fn predict(&self) -> Vec<f64> {
        let node = &self.nodes[*self.path.last().unwrap()];
        let mut p = vec![1.0; self.m];
        for (&s, &c) in &node.children {
            p[s] += self.nodes[c].count as f64;
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= total);
        p
    }
}

/// Index of the largest relative; ties go to the lowest index.
pub fn winner(x: &[f64]) -> usize {
    let mut best = 0;
    for (j, v) in x.iter().enumerate() {
        if *v > x[best] {
            best = j;
        }
    }
    best
}

/// Invests each asset in proportion to the LZ predictor's probability that it
/// will have the best relative price the next day.
#[derive(Debug, Clone, Default)]
pub struct Lz {
    tree: Option<LzTree>,
    seen: usize,
}

impl Lz {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Strategy for Lz {
    fn name(&self) -> String {
        "lz".into()
    }

    fn next_portfolio(&mut self, history: History<'_>, _drifted: &Portfolio) -> Portfolio {
        let m = history.n_assets();
        if history.len() < self.seen || self.tree.as_ref().is_some_and(|t| t.m != m) {
            self.tree = None;
            self.seen = 0;
        }
        let tree = self.tree.get_or_insert_with(|| LzTree::new(m));
        for t in self.seen..history.len() {
            tree.push(winner(history.day(t)));
        }
        self.seen = history.len();
        Portfolio::from_simplex(tree.predict())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::{cover_gluss, random_market};
    use crate::portfolio::total_return;
    use approx::assert_relative_eq;

    fn run(s: &mut dyn Strategy, x: &MarketSequence) -> Vec<Portfolio> {
        let mut drifted = Portfolio::uniform(x.n_assets());
        (0..x.n_days())
            .map(|t| {
                let b = s.next_portfolio(x.history(t), &drifted);
                drifted = b.drifted(x.day(t));
                b
            })
            .collect()
    }

    #[test]
    fn best_stock_examples() {
        let x = MarketSequence::from_rows(vec![vec![2.0, 1.0]; 2]).unwrap();
        assert_eq!(best_stock_index(&x), 0);
        assert_eq!(total_return(&vec![best_stock_hindsight(&x); 2], &x).unwrap(), 4.0);

        let ones = MarketSequence::from_rows(vec![vec![1.0; 3]; 4]).unwrap();
        assert_eq!(best_stock_index(&ones), 0);
    }

    #[test]
    fn ucbal_on_cover_gluss() {
        let x = cover_gluss(40).unwrap();
        let bs = run(&mut Cbal::uniform(), &x);
        assert_relative_eq!(
            total_return(&bs, &x).unwrap(),
            (9.0f64 / 8.0).powi(20),
            max_relative = 1e-12
        );
    }

    #[test]
    fn single_asset_cbal_is_bah() {
        let x = random_market(30, 3, 0.5, 2.0, 9).unwrap();
        let b = Portfolio::indicator(3, 1);
        assert_eq!(run(&mut Cbal::new(b.clone()), &x), run(&mut Bah::new(b), &x));
    }

    #[test]
    fn cbal_star_on_cover_gluss_is_uniform() {
        let x = cover_gluss(20).unwrap();
        let star = cbal_star(&x, CbalStarOptions::default()).unwrap();
        assert_relative_eq!(star.portfolio.weights()[0], 0.5, epsilon = 1e-6);
        assert_relative_eq!(star.total_return, (9.0f64 / 8.0).powi(10), max_relative = 1e-10);
    }

    #[test]
    fn cbal_star_with_dominant_asset_goes_to_vertex() {
        let x = MarketSequence::from_rows(vec![vec![1.1, 1.0, 0.9]; 10]).unwrap();
        let star = cbal_star(&x, CbalStarOptions::default()).unwrap();
        assert_relative_eq!(star.total_return, 1.1f64.powi(10), max_relative = 1e-9);
    }

    #[test]
    fn cbal_star_reports_non_convergence() {
        let x = random_market(50, 4, 0.5, 2.0, 2).unwrap();
        let err = cbal_star(
            &x,
            CbalStarOptions {
                tol: 1e-300,
                max_iterations: 3,
            },
        )
        .unwrap_err();
        match err {
            Error::NonConvergence { iterations, best, .. } => {
                assert_eq!(iterations, 3);
                assert_eq!(best.len(), 4);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn eg_zero_is_ucbal() {
        let x = random_market(50, 5, 0.5, 2.0, 4).unwrap();
        assert_eq!(run(&mut Eg::new(0.0).unwrap(), &x), run(&mut Cbal::uniform(), &x));
    }

    #[test]
    fn eg_stays_uniform_on_symmetric_market() {
        let rows: Vec<_> = [1.3, 0.8, 1.1].iter().map(|&v| vec![v; 4]).collect();
        let x = MarketSequence::from_rows(rows).unwrap();
        for b in run(&mut Eg::new(0.5).unwrap(), &x) {
            for w in b.weights() {
                assert_relative_eq!(*w, 0.25, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn eg_rejects_negative_rate() {
        assert!(Eg::new(-0.1).is_err());
    }

    #[test]
    fn universal_with_one_sample_is_that_cbal() {
        let x = random_market(40, 3, 0.5, 2.0, 6).unwrap();
        let sampler = DirichletSampler::half(17);
        let mut u = Universal::new(sampler.clone(), 1).unwrap();
        let bs = run(&mut u, &x);
        let b = sampler.sample(3, 1).remove(0);
        assert!(bs.iter().all(|p| *p == b));
    }

    #[test]
    fn universal_wealth_is_mean_of_sampled_wealths() {
        let x = random_market(60, 3, 0.5, 2.0, 8).unwrap();
        let sampler = DirichletSampler::half(3);
        let bs = run(&mut Universal::new(sampler.clone(), 200).unwrap(), &x);
        let direct = sampled_cbal_mean_wealth(&sampler, 200, &x);
        assert_relative_eq!(total_return(&bs, &x).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn dirichlet_samples_are_on_simplex_and_reproducible() {
        let s = DirichletSampler::half(99);
        let a = s.sample(5, 100);
        assert_eq!(a, s.sample(5, 100));
        assert!(a.iter().all(|b| b.is_valid(1e-12)));
        assert!(DirichletSampler::new(0.0, 1).is_err());
    }

    #[test]
    fn lz_starts_uniform_and_keeps_full_support() {
        let x = random_market(100, 4, 0.5, 2.0, 12).unwrap();
        let bs = run(&mut Lz::new(), &x);
        assert_eq!(bs[0], Portfolio::uniform(4));
        assert!(bs.iter().all(|b| b.weights().iter().all(|w| *w > 0.0)));
    }

    #[test]
    fn lz_root_counts_every_symbol() {
        let mut tree = LzTree::new(3);
        let symbols = [0, 1, 0, 0, 2, 1, 0, 1, 1, 2, 0, 0, 0];
        for s in symbols {
            tree.push(s);
        }
        assert_eq!(tree.root().count, symbols.len() as u64);
    }

    #[test]
    fn lz_parses_phrases_like_lz78() {
        // a | b | aa | ab | ... : phrases 0 | 1 | 0 0 | 0 1
        let mut tree = LzTree::new(2);
        for s in [0, 1, 0, 0, 0, 1] {
            tree.push(s);
        }
        assert_eq!(tree.node_count(), 5);
    }
}
