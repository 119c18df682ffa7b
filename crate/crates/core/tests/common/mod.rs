#![allow(dead_code)]

use std::path::PathBuf;

use olps::{cover_gluss, load_market_file, random_market, reverse_market, InputFormat, MarketSequence, StrategySpec};

/// Small deterministic markets used by the invariant checks.
pub fn corpus() -> Vec<(String, MarketSequence)> {
    let mut out = vec![
        ("cover-gluss-20".to_string(), cover_gluss(20).unwrap()),
        (
            "flat-3x30".to_string(),
            MarketSequence::from_rows(vec![vec![1.0; 3]; 30]).unwrap(),
        ),
        (
            "constant-column".to_string(),
            MarketSequence::from_rows(
                (0..40)
                    .map(|t| vec![1.01, if t % 3 == 0 { 0.9 } else { 1.06 }, 1.0])
                    .collect(),
            )
            .unwrap(),
        ),
        ("random-2x60".to_string(), random_market(60, 2, 0.5, 2.0, 1).unwrap()),
        ("random-3x80".to_string(), random_market(80, 3, 0.5, 2.0, 2).unwrap()),
        ("random-5x120".to_string(), random_market(120, 5, 0.8, 1.25, 3).unwrap()),
        ("random-4x50".to_string(), random_market(50, 4, 0.95, 1.05, 4).unwrap()),
    ];
    let reversed: Vec<_> = out
        .iter()
        .filter(|(name, _)| name.starts_with("random") || name.starts_with("cover"))
        .map(|(name, x)| (format!("{name}-reversed"), reverse_market(x)))
        .collect();
    out.extend(reversed);
    out
}

/// Every strategy with parameters small enough for quick corpus runs.
pub fn quick_strategies() -> Vec<StrategySpec> {
    vec![
        StrategySpec::UBah,
        StrategySpec::BestStock,
        StrategySpec::UCbal,
        StrategySpec::CbalStar { tol: 1e-10 },
        StrategySpec::Eg { eta: 0.01 },
        StrategySpec::Eg { eta: 0.0 },
        StrategySpec::Universal { n_samples: 200 },
        StrategySpec::Lz,
        StrategySpec::Anticor { w: 2 },
        StrategySpec::Anticor { w: 5 },
        StrategySpec::Anti1 { max_w: 6 },
        StrategySpec::Anti2 { max_w: 4 },
    ]
}

/// Directory holding `nyse.csv` and `djia.csv`: `$OLPS_DATA_DIR` or `<workspace>/data`.
pub fn data_dir() -> PathBuf {
    std::env::var_os("OLPS_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

pub fn dataset(name: &str) -> Option<MarketSequence> {
    let path = data_dir().join(format!("{name}.csv"));
    if !path.exists() {
        return None;
    }
    Some(load_market_file(&path, InputFormat::CsvRelatives).unwrap())
}

/// Direct evaluation of one ANTICOR_w step from the raw relatives of days
/// `1..=t`, written without reference to the library's internals.
pub fn reference_anticor_step(w: usize, days: &[Vec<f64>], b_hat: &[f64]) -> Vec<f64> {
    let t = days.len();
    let m = b_hat.len();
    if t < 2 * w {
        return b_hat.to_vec();
    }
    let window = |start: usize, j: usize| -> Vec<f64> { (start..start + w).map(|k| days[k][j].ln()).collect() };
    let stats = |col: &[f64]| -> (f64, f64) {
        if col.iter().all(|v| *v == col[0]) {
            return (col[0], 0.0);
        }
        let mut sum = 0.0;
        for v in col {
            sum += v;
        }
        let mean = sum / w as f64;
        let mut ss = 0.0;
        for v in col {
            ss += (v - mean) * (v - mean);
        }
        (mean, (ss / (w as f64 - 1.0)).sqrt())
    };
    let lx1: Vec<Vec<f64>> = (0..m).map(|j| window(t - 2 * w, j)).collect();
    let lx2: Vec<Vec<f64>> = (0..m).map(|j| window(t - w, j)).collect();
    let s1: Vec<(f64, f64)> = lx1.iter().map(|c| stats(c)).collect();
    let s2: Vec<(f64, f64)> = lx2.iter().map(|c| stats(c)).collect();

    let mut cor = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut cov = 0.0;
            for k in 0..w {
                cov += (lx1[i][k] - s1[i].0) * (lx2[j][k] - s2[j].0);
            }
            cov /= w as f64 - 1.0;
            if s1[i].1 != 0.0 && s2[j].1 != 0.0 {
                cor[i][j] = cov / (s1[i].1 * s2[j].1);
            }
        }
    }
    let a = |h: usize| if cor[h][h] < 0.0 { -cor[h][h] } else { 0.0 };
    let mut claim = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j && s2[i].0 > s2[j].0 && cor[i][j] > 0.0 {
                claim[i][j] = cor[i][j] + a(i) + a(j);
            }
        }
    }
    let mut next = b_hat.to_vec();
    for i in 0..m {
        let total: f64 = claim[i].iter().sum();
        if total == 0.0 {
            continue;
        }
        for j in 0..m {
            let transfer = b_hat[i] * claim[i][j] / total;
            next[i] -= transfer;
            next[j] += transfer;
        }
    }
    next
}

/// Portfolios chosen by the reference ANTICOR_w on days `1..=n+1`.
pub fn reference_anticor_run(w: usize, days: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = days[0].len();
    let mut b = vec![1.0 / m as f64; m];
    let mut out = vec![b.clone()];
    for t in 0..days.len() {
        let r: f64 = b.iter().zip(&days[t]).map(|(b, x)| b * x).sum();
        let b_hat: Vec<f64> = b.iter().zip(&days[t]).map(|(b, x)| b * x / r).collect();
        b = reference_anticor_step(w, &days[..=t], &b_hat);
        out.push(b.clone());
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
