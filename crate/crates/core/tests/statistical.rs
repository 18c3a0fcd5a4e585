//! Finite-n statistical checks of simulated runs against the limit laws,
//! at fixed seeds with precomputed pass bands.

use std::sync::OnceLock;

use ncg::limits::{u_d, xdw_table, LimitTable};
use ncg::simulator::{GraphState, Snapshot};
use ncg::stats::{
    compare, empirical_ratios, fit_power_law_exponent, vn_drift, CompareSettings, FitMethod,
};
use ncg::ModelParams;

const SEEDS: [u64; 5] = [11, 12, 13, 14, 15];
const CHECKPOINTS: [u64; 3] = [10_000, 100_000, 1_000_000];

fn params() -> ModelParams {
    ModelParams::new(4, 0.5, 0.5, 0.5).unwrap()
}

/// Snapshots at the checkpoints for each seed.
fn runs() -> &'static Vec<Vec<Snapshot>> {
    static RUNS: OnceLock<Vec<Vec<Snapshot>>> = OnceLock::new();
    RUNS.get_or_init(|| {
        SEEDS
            .iter()
            .map(|&s| {
                let mut g = GraphState::init(params(), s).unwrap();
                g.run(*CHECKPOINTS.last().unwrap(), &CHECKPOINTS).unwrap()
            })
            .collect()
    })
}

fn table() -> &'static LimitTable {
    static T: OnceLock<LimitTable> = OnceLock::new();
    T.get_or_init(|| xdw_table(&params().derive_constants().unwrap(), 4, 200))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn base_cell_ratio_near_limit() {
    let snap = &runs()[0][2];
    let e = empirical_ratios(snap).unwrap();
    let x31 = 1.0 / 4.9375;
    assert!(
        (e.get(3, 1) - x31).abs() <= 0.01,
        "{} vs {x31}",
        e.get(3, 1)
    );
}

#[test]
fn zero_band_cell_stays_empty() {
    for run in runs() {
        let e = empirical_ratios(&run[2]).unwrap();
        assert!(e.get(5, 2) <= 0.005, "{}", e.get(5, 2));
    }
}

#[test]
fn weight_tv_decreases_with_n() {
    let mut settings = CompareSettings::new(100, 60);
    settings.params = Some(params());
    let medians: Vec<f64> = (0..CHECKPOINTS.len())
        .map(|i| {
            median(
                runs()[..3]
                    .iter()
                    .map(|run| {
                        let e = empirical_ratios(&run[i]).unwrap();
                        compare(&e, table(), &settings).unwrap().tv_weights
                    })
                    .collect(),
            )
        })
        .collect();
    println!("median TV on weights at n = 1e4, 1e5, 1e6: {medians:.5?}");
    assert!(medians[2] < medians[0], "{medians:?}");
    assert!(medians[2] <= medians[1] * 1.5, "{medians:?}");
}

#[test]
fn vertex_count_drift() {
    let final_drift = vn_drift(&runs()[0], 0.5).last().unwrap().drift;
    assert!(final_drift <= 0.002, "{final_drift}");
    // sqrt(n) |V_n/n - p| is O(1): the standard deviation is
    // sqrt(p(1-p)) = 0.5, so a median over 5 seeds above 2 would be a
    // 4-sigma event.
    for i in 0..CHECKPOINTS.len() {
        let scaled: Vec<f64> = runs()
            .iter()
            .map(|run| {
                let pt = vn_drift(&run[i..=i], 0.5)[0];
                pt.drift * (pt.n as f64).sqrt()
            })
            .collect();
        let m = median(scaled);
        println!("n = {}: median sqrt(n) drift = {m:.3}", CHECKPOINTS[i]);
        assert!(m <= 2.0);
    }
}

#[test]
fn simulated_degree_tail_slope() {
    let c = params().derive_constants().unwrap();
    let target = c.tail_slope().unwrap();
    let snap = &runs()[0][2];
    let e = empirical_ratios(snap).unwrap();
    let dist: Vec<(u64, f64)> = e.degrees.iter().map(|(&d, &m)| (d, m)).collect();
    let fit = fit_power_law_exponent(&dist, 20, 100, FitMethod::LogLogLS).unwrap();
    let theory: Vec<(u64, f64)> = (20..=100)
        .map(|d| (d, u_d(&c, 4, d, 0.1, 1e-12).unwrap().value))
        .collect();
    let limit_fit = fit_power_law_exponent(&theory, 20, 100, FitMethod::LogLogLS).unwrap();
    let mle = fit_power_law_exponent(
        &e.degrees
            .iter()
            .map(|(&d, &m)| (d, m * snap.vertex_count() as f64))
            .collect::<Vec<_>>(),
        20,
        100,
        FitMethod::DiscreteMLE,
    )
    .unwrap();
    let rel = ((fit.exponent - target) / target).abs();
    println!(
        "simulated slope on d in [20,100]: LS {:.4} +- {:.4}, MLE {:.4} +- {:.4}; exact u_d slope on the same window {:.4}; asymptotic {:.4}; LS relative gap {:.1}%",
        fit.exponent, fit.stderr, mle.exponent, mle.stderr, limit_fit.exponent, target, 100.0 * rel
    );
    assert!(rel <= 0.15);
}
