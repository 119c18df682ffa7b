//! One ANTICOR decision taken apart: window statistics, cross-correlations,
//! claims, and the resulting transfers.

use olps::anticor::{claims, cross_correlation, log_windows, transfers};
use olps::{anticor_step, MarketSequence, Portfolio};

fn main() -> olps::Result<()> {
    // asset A led over the first window and lagged over the second; B did the opposite
    let x = MarketSequence::new(
        vec!["A".into(), "B".into(), "C".into()],
        vec![
            vec![1.05, 0.97, 1.00],
            vec![1.03, 0.98, 1.01],
            vec![1.04, 0.96, 0.99],
            vec![0.97, 1.04, 1.00],
            vec![0.98, 1.02, 1.01],
            vec![0.96, 1.05, 0.99],
        ],
    )?;
    let (w, t) = (3, 6);
    let b_hat = Portfolio::new(vec![0.2, 0.5, 0.3])?;

    let stats = log_windows(x.history(t), t, w)?;
    println!("mean log-relative, last window: {:?}", stats.mu2);
    let corr = cross_correlation(&stats);
    println!("cross-correlation (row: earlier window, column: later window)");
    for i in 0..3 {
        println!(
            "  {:?}",
            corr.m_cor.row(i).iter().map(|v| format!("{v:+.3}")).collect::<Vec<_>>()
        );
    }
    let cl = claims(&corr, &stats.mu2)?;
    for i in 0..3 {
        for j in 0..3 {
            if cl.get(i, j) > 0.0 {
                println!("claim {} -> {}: {:.3}", x.names()[i], x.names()[j], cl.get(i, j));
            }
        }
    }
    let next = transfers(&cl, &b_hat)?;
    println!("before {:?}", b_hat.weights());
    println!("after  {:?}", next.weights());
    assert_eq!(next, anticor_step(w, t, x.history(t), &b_hat)?);
    Ok(())
}
