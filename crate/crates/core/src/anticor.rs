//! The ANTICOR_w trading rule.
//!
//! On day `t` (with `t >= 2w` days observed) the rule looks at two adjacent
//! windows of log relative prices, `LX1` over days `t-2w+1 ..= t-w` and `LX2`
//! over `t-w+1 ..= t`, and cross-correlates every column of the first with
//! every column of the second. Wealth moves from asset `i` to asset `j` when
//! `i` outgrew `j` over the latest window (`mu2(i) > mu2(j)`) and `i`'s earlier
//! window is positively correlated with `j`'s latest one. Negative
//! self-correlation of either asset strengthens the claim.
//!
//! Standard deviations use the same `w - 1` divisor as the covariance, so a
//! repeated window correlates with itself at exactly 1.

use crate::error::{Error, Result};
use crate::market_data::History;
use crate::portfolio::Portfolio;
use crate::strategy::Strategy;

/// Row-major `m x m` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    m: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            data: vec![0.0; m * m],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("matrix rows must all have length m".into()));
        }
        Ok(Self { m, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.m + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }
}

/// Log relatives of the two windows ending at day `t`, with column statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowStats {
    w: usize,
    m: usize,
    /// `w x m`, row-major, oldest day first.
    pub lx1: Vec<f64>,
    pub lx2: Vec<f64>,
    pub mu1: Vec<f64>,
    pub mu2: Vec<f64>,
    pub sigma1: Vec<f64>,
    pub sigma2: Vec<f64>,
}

impl WindowStats {
    /// Computes statistics from two `w x m` row-major log windows.
    pub fn from_windows(lx1: Vec<f64>, lx2: Vec<f64>, m: usize) -> Result<Self> {
        if m == 0 || lx1.len() != lx2.len() || !lx1.len().is_multiple_of(m) {
            return Err(Error::Dimension("windows must be two w x m matrices".into()));
        }
        let w = lx1.len() / m;
        if w < 2 {
            return Err(Error::Argument(format!("window size must be at least 2, got {w}")));
        }
        let (mu1, sigma1) = column_stats(&lx1, w, m);
        let (mu2, sigma2) = column_stats(&lx2, w, m);
        Ok(Self {
            w,
            m,
            lx1,
            lx2,
            mu1,
            mu2,
            sigma1,
            sigma2,
        })
    }

    pub fn window(&self) -> usize {
        self.w
    }

    pub fn n_assets(&self) -> usize {
        self.m
    }
}

/// Mean and `(w-1)`-divisor standard deviation of each column. A column whose
/// entries are all identical gets its own value as mean and exactly zero
/// deviation, so rounding in the mean cannot make it look non-constant.
fn column_stats(lx: &[f64], w: usize, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut mu = vec![0.0; m];
    let mut sigma = vec![0.0; m];
    for j in 0..m {
        let first = lx[j];
        if (1..w).all(|k| lx[k * m + j] == first) {
            mu[j] = first;
            continue;
        }
        let mean = (0..w).map(|k| lx[k * m + j]).sum::<f64>() / w as f64;
        let ss: f64 = (0..w).map(|k| (lx[k * m + j] - mean).powi(2)).sum();
        mu[j] = mean;
        sigma[j] = (ss / (w - 1) as f64).sqrt();
    }
    (mu, sigma)
}

/// Slices the two windows ending at day `t` (1-based count of observed days)
/// out of the history and takes natural logs.
pub fn log_windows(history: History<'_>, t: usize, w: usize) -> Result<WindowStats> {
    if w < 2 {
        return Err(Error::Argument(format!("window size must be at least 2, got {w}")));
    }
    if t < 2 * w {
        return Err(Error::InsufficientHistory { day: t, needed: 2 * w });
    }
    if t > history.len() {
        return Err(Error::InsufficientHistory {
            day: history.len(),
            needed: t,
        });
    }
    let m = history.n_assets();
    let logs = |from: usize| -> Vec<f64> {
        history.as_flat()[from * m..(from + w) * m]
            .iter()
            .map(|v| v.ln())
            .collect()
    };
    WindowStats::from_windows(logs(t - 2 * w), logs(t - w), m)
}

/// Windows ending at day `t` from a precomputed log matrix.
fn stats_from_logs(logs: &[f64], m: usize, t: usize, w: usize) -> WindowStats {
    let lx1 = logs[(t - 2 * w) * m..(t - w) * m].to_vec();
    let lx2 = logs[(t - w) * m..t * m].to_vec();
    let (mu1, sigma1) = column_stats(&lx1, w, m);
    let (mu2, sigma2) = column_stats(&lx2, w, m);
    WindowStats {
        w,
        m,
        lx1,
        lx2,
        mu1,
        mu2,
        sigma1,
        sigma2,
    }
}

/// Cross-covariance and cross-correlation between the two windows' columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationPair {
    pub m_cov: SquareMatrix,
    pub m_cor: SquareMatrix,
}

pub fn cross_correlation(s: &WindowStats) -> CorrelationPair {
    let (w, m) = (s.w, s.m);
    let centered = |lx: &[f64], mu: &[f64]| -> Vec<f64> {
        lx.chunks_exact(m)
            .flat_map(|row| row.iter().zip(mu).map(|(v, mu)| v - mu))
            .collect()
    };
    let c1 = centered(&s.lx1, &s.mu1);
    let c2 = centered(&s.lx2, &s.mu2);

    let mut cov = SquareMatrix::zeros(m);
    for k in 0..w {
        let r1 = &c1[k * m..(k + 1) * m];
        let r2 = &c2[k * m..(k + 1) * m];
        for (i, &a) in r1.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let out = &mut cov.data[i * m..(i + 1) * m];
            for (o, b) in out.iter_mut().zip(r2) {
                *o += a * b;
            }
        }
    }
    let scale = 1.0 / (w - 1) as f64;
    cov.data.iter_mut().for_each(|v| *v *= scale);

    let mut cor = SquareMatrix::zeros(m);
    for i in 0..m {
        if s.sigma1[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            if s.sigma2[j] == 0.0 {
                continue;
            }
            let v = cov.get(i, j) / (s.sigma1[i] * s.sigma2[j]);
            cor.set(i, j, v.clamp(-1.0, 1.0));
        }
    }
    CorrelationPair { m_cov: cov, m_cor: cor }
}

/// `claim(i, j)`: how strongly wealth should move from asset `i` to asset `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimMatrix(SquareMatrix);

impl ClaimMatrix {
    /// Wraps explicit claims; entries must be nonnegative with a zero diagonal.
    pub fn new(claims: SquareMatrix) -> Result<Self> {
        let m = claims.dim();
        for i in 0..m {
            for j in 0..m {
                let v = claims.get(i, j);
                if !(v.is_finite() && v >= 0.0) || (i == j && v != 0.0) {
                    return Err(Error::Argument(format!("invalid claim {v} at ({i}, {j})")));
                }
            }
        }
        Ok(Self(claims))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.data.iter().all(|v| *v == 0.0)
    }
}

/// Claims between every ordered pair of distinct assets.
///
/// `claim(i, j) = cor(i, j) + A(i) + A(j)` when `mu2(i) > mu2(j)` and
/// `cor(i, j) > 0`, where `A(h) = -cor(h, h)` for negative self-correlation
/// and 0 otherwise.
pub fn claims(c: &CorrelationPair, mu2: &[f64]) -> Result<ClaimMatrix> {
    let cor = &c.m_cor;
    let m = cor.dim();
    if mu2.len() != m {
        return Err(Error::Dimension(format!("{} growth rates for {m} assets", mu2.len())));
    }
    let anti: Vec<f64> = (0..m).map(|h| (-cor.get(h, h)).max(0.0)).collect();
    let mut out = SquareMatrix::zeros(m);
    for i in 0..m {
        for j in 0..m {
            let r = cor.get(i, j);
            if i != j && mu2[i] > mu2[j] && r > 0.0 {
                out.set(i, j, r + anti[i] + anti[j]);
            }
        }
    }
    Ok(ClaimMatrix(out))
}

/// Moves wealth along the claims: asset `i` sends `b(i) * claim(i, j) / sum_k claim(i, k)`
/// to each `j`. Rows without claims send nothing.
pub fn transfers(cl: &ClaimMatrix, b_hat: &Portfolio) -> Result<Portfolio> {
    let m = cl.dim();
    if b_hat.len() != m {
        return Err(Error::Dimension(format!(
            "claims over {m} assets, portfolio over {}",
            b_hat.len()
        )));
    }
    let b = b_hat.weights();
    let mut inflow = vec![0.0; m];
    let mut outflow = vec![0.0; m];
    for i in 0..m {
        let row = cl.0.row(i);
        let total: f64 = row.iter().sum();
        if total <= 0.0 || b[i] == 0.0 {
            continue;
        }
        for (j, &c) in row.iter().enumerate() {
            if c > 0.0 {
                let amount = b[i] * c / total;
                outflow[i] += amount;
                inflow[j] += amount;
            }
        }
    }
    let next = (0..m).map(|i| (b[i] - outflow[i] + inflow[i]).max(0.0)).collect();
    Ok(Portfolio::from_simplex(next))
}

/// One ANTICOR_w decision after observing `t` days; the identity on `b_hat`
/// while `t < 2w`.
pub fn anticor_step(w: usize, t: usize, history: History<'_>, b_hat: &Portfolio) -> Result<Portfolio> {
    if w < 2 {
        return Err(Error::Argument(format!("window size must be at least 2, got {w}")));
    }
    if b_hat.len() != history.n_assets() {
        return Err(Error::Dimension(format!(
            "portfolio over {} assets, market over {}",
            b_hat.len(),
            history.n_assets()
        )));
    }
    if t < 2 * w {
        return Ok(b_hat.clone());
    }
    let stats = log_windows(history, t, w)?;
    step_from_stats(&stats, b_hat)
}

fn step_from_stats(stats: &WindowStats, b_hat: &Portfolio) -> Result<Portfolio> {
    let corr = cross_correlation(stats);
    let cl = claims(&corr, &stats.mu2)?;
    transfers(&cl, b_hat)
}

/// ANTICOR_w as an online strategy. Keeps a log cache of the history it has seen.
#[derive(Debug, Clone)]
pub struct Anticor {
    w: usize,
    logs: Vec<f64>,
}

impl Anticor {
    pub fn new(w: usize) -> Result<Self> {
        if w < 2 {
            return Err(Error::Argument(format!("window size must be at least 2, got {w}")));
        }
        Ok(Self { w, logs: Vec::new() })
    }

    pub fn window(&self) -> usize {
        self.w
    }

    fn sync_logs(&mut self, history: History<'_>) {
        let data = history.as_flat();
        if self.logs.len() > data.len() {
            self.logs.clear();
        }
        let start = self.logs.len();
        self.logs.extend(data[start..].iter().map(|v| v.ln()));
    }
}

impl Strategy for Anticor {
    fn name(&self) -> String {
        format!("anticor-{}", self.w)
    }

    fn next_portfolio(&mut self, history: History<'_>, drifted: &Portfolio) -> Portfolio {
        let t = history.len();
        if t < 2 * self.w {
            return drifted.clone();
        }
        self.sync_logs(history);
        let stats = stats_from_logs(&self.logs, history.n_assets(), t, self.w);
        step_from_stats(&stats, drifted).expect("dimensions fixed by history")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::MarketSequence;
    use approx::assert_relative_eq;

    fn market(rows: Vec<Vec<f64>>) -> MarketSequence {
        MarketSequence::from_rows(rows).unwrap()
    }

    #[test]
    fn constant_market_has_zero_spread() {
        let x = market(vec![vec![1.5, 1.5, 1.5]; 6]);
        let s = log_windows(x.history(6), 6, 3).unwrap();
        assert!(s.mu1.iter().chain(&s.mu2).all(|&v| v == 1.5f64.ln()));
        assert!(s.sigma1.iter().chain(&s.sigma2).all(|&v| v == 0.0));
    }

    #[test]
    fn windows_are_sliced_in_order() {
        // second column is filler; only the first matters here
        let x = market(vec![vec![2.0, 1.0], vec![2.0, 1.0], vec![0.5, 1.0], vec![0.5, 1.0]]);
        let s = log_windows(x.history(4), 4, 2).unwrap();
        assert_eq!(s.lx1, vec![2f64.ln(), 0.0, 2f64.ln(), 0.0]);
        assert_eq!(s.lx2, vec![0.5f64.ln(), 0.0, 0.5f64.ln(), 0.0]);
    }

    #[test]
    fn short_history_is_an_error() {
        let x = market(vec![vec![1.0, 2.0]; 5]);
        assert!(matches!(
            log_windows(x.history(5), 5, 3),
            Err(Error::InsufficientHistory { day: 5, needed: 6 })
        ));
    }

    #[test]
    fn identical_windows_self_correlate_at_one() {
        let lx = vec![0.1, -0.2, 0.3, 0.0, -0.4, 0.2];
        let s = WindowStats::from_windows(lx.clone(), lx, 2).unwrap();
        let c = cross_correlation(&s);
        assert_relative_eq!(c.m_cor.get(0, 0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(c.m_cor.get(1, 1), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn constant_column_gets_zero_correlation() {
        let lx1 = vec![0.1, 0.2, -0.3, 0.5, 0.2, 0.1];
        let lx2 = vec![0.4, 0.7, -0.1, 0.7, 0.3, 0.7];
        let s = WindowStats::from_windows(lx1, lx2, 2).unwrap();
        let c = cross_correlation(&s);
        assert_eq!(c.m_cor.get(0, 1), 0.0);
        assert_eq!(c.m_cor.get(1, 1), 0.0);
    }

    #[test]
    fn opposite_two_point_windows_anticorrelate() {
        // cov = (a(-b) + (-a)b) / 1 = -2ab, sigma1 = a sqrt 2, sigma2 = b sqrt 2
        let (a, b) = (0.3, 0.7);
        let s = WindowStats::from_windows(vec![a, -a], vec![-b, b], 1).unwrap();
        let c = cross_correlation(&s);
        assert_relative_eq!(c.m_cov.get(0, 0), -2.0 * a * b, max_relative = 1e-15);
        assert_eq!(c.m_cor.get(0, 0), -1.0);
    }

    fn pair(cor: &[Vec<f64>]) -> CorrelationPair {
        let m = SquareMatrix::from_rows(cor).unwrap();
        CorrelationPair {
            m_cov: m.clone(),
            m_cor: m,
        }
    }

    #[test]
    fn equal_growth_means_no_claims() {
        let c = pair(&[vec![0.5, 0.9], vec![0.9, 0.5]]);
        assert!(claims(&c, &[0.1, 0.1]).unwrap().is_zero());
    }

    #[test]
    fn claim_adds_negative_self_correlations() {
        let c = pair(&[vec![-0.2, 0.5], vec![0.0, 0.1]]);
        let cl = claims(&c, &[0.3, 0.1]).unwrap();
        assert_relative_eq!(cl.get(0, 1), 0.7, max_relative = 1e-15);
        assert_eq!(cl.get(1, 0), 0.0);
        assert_eq!(cl.get(0, 0), 0.0);
    }

    #[test]
    fn negative_cross_correlation_blocks_claim() {
        let c = pair(&[vec![0.0, -0.3], vec![0.4, 0.0]]);
        assert_eq!(claims(&c, &[0.3, 0.1]).unwrap().get(0, 1), 0.0);
    }

    #[test]
    fn transfer_examples() {
        let b = Portfolio::new(vec![0.6, 0.4]).unwrap();
        let zero = ClaimMatrix::new(SquareMatrix::zeros(2)).unwrap();
        assert_eq!(transfers(&zero, &b).unwrap(), b);

        // the only claim out of asset 1 carries all of it
        let one = ClaimMatrix::new(SquareMatrix::from_rows(&[vec![0.0, 0.7], vec![0.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(transfers(&one, &b).unwrap().weights(), &[0.0, 1.0]);

        let sym = ClaimMatrix::new(SquareMatrix::from_rows(&[vec![0.0, 0.4], vec![0.4, 0.0]]).unwrap()).unwrap();
        let u = Portfolio::uniform(2);
        assert_eq!(transfers(&sym, &u).unwrap(), u);
    }

    #[test]
    fn claim_matrix_rejects_bad_entries() {
        assert!(ClaimMatrix::new(SquareMatrix::from_rows(&[vec![0.1, 0.0], vec![0.0, 0.0]]).unwrap()).is_err());
        assert!(ClaimMatrix::new(SquareMatrix::from_rows(&[vec![0.0, -0.1], vec![0.0, 0.0]]).unwrap()).is_err());
    }

    #[test]
    fn warm_up_is_identity() {
        let x = crate::market_data::random_market(10, 3, 0.5, 2.0, 11).unwrap();
        let b = Portfolio::new(vec![0.2, 0.3, 0.5]).unwrap();
        for t in 0..6 {
            assert_eq!(anticor_step(3, t, x.history(t), &b).unwrap(), b);
        }
    }

    #[test]
    fn identical_columns_never_move() {
        let rows: Vec<_> = [1.2, 0.7, 1.9, 0.8, 1.1, 0.6, 1.3]
            .iter()
            .map(|&v| vec![v; 3])
            .collect();
        let x = market(rows);
        let b = Portfolio::new(vec![0.5, 0.3, 0.2]).unwrap();
        for t in 0..=7 {
            assert_eq!(anticor_step(2, t, x.history(t), &b).unwrap(), b);
        }
    }

    #[test]
    fn strategy_matches_free_function() {
        let x = crate::market_data::random_market(40, 4, 0.8, 1.25, 5).unwrap();
        let mut s = Anticor::new(3).unwrap();
        let mut b = Portfolio::uniform(4);
        for t in 0..x.n_days() {
            let expected = anticor_step(3, t, x.history(t), &b).unwrap();
            let got = s.next_portfolio(x.history(t), &b);
            assert_eq!(got, expected, "day {t}");
            b = got.drifted(x.day(t));
        }
    }

    #[test]
    fn window_below_two_is_rejected() {
        assert!(Anticor::new(1).is_err());
        let x = market(vec![vec![1.0, 2.0]; 4]);
        assert!(anticor_step(1, 4, x.history(4), &Portfolio::uniform(2)).is_err());
    }
}
