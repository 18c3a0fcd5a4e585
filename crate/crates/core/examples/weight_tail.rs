//! Weight law: recurrence, Gamma closed form and power-law asymptote, plus
//! a log-log fit of the exponent.

use ncg::limits::{weight_constant, xw_asymptotic, xw_closed_form, xw_recurrence};
use ncg::stats::{fit_power_law_exponent, FitMethod};
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    let c = ModelParams::new(4, 0.5, 0.5, 0.5)?.derive_constants()?;
    println!(
        "C = {:.6}, exponent = {:.6}",
        weight_constant(&c)?,
        c.gamma_exponent.unwrap()
    );

    let rec = xw_recurrence(&c, 10_000);
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>8}",
        "w", "recurrence", "closed form", "asymptote", "ratio"
    );
    for w in [1u64, 2, 10, 100, 1000, 10_000] {
        let cf = xw_closed_form(&c, w)?;
        let asym = xw_asymptotic(&c, w)?;
        println!(
            "{w:>6} {:>14.6e} {cf:>14.6e} {asym:>14.6e} {:>8.4}",
            rec[w as usize - 1],
            cf / asym
        );
    }
    println!("sum_(w<=1e4) x_w = {:.10}", rec.iter().sum::<f64>());

    let dist: Vec<(u64, f64)> = (1000..=10_000).map(|w| (w, rec[w as usize - 1])).collect();
    let fit = fit_power_law_exponent(&dist, 1000, 10_000, FitMethod::LogLogLS)?;
    println!(
        "log-log slope on [1e3, 1e4]: {:.5} (theory {:.5})",
        fit.exponent,
        c.tail_slope().unwrap()
    );
    Ok(())
}
