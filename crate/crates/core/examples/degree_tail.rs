//! Degree marginal u_d with its certified truncation bound, against the
//! power-law asymptote.
//!
//! cargo run --release --example degree_tail -- [d_max]

use ncg::limits::{u_d, u_d_asymptotic, DEFAULT_EPS};
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    let d_max: u64 = std::env::args()
        .nth(1)
        .map_or(800, |s| s.parse().expect("d_max"));
    let c = ModelParams::new(4, 0.5, 0.5, 0.5)?.derive_constants()?;
    println!(
        "{:>6} {:>14} {:>10} {:>8} {:>14} {:>8}",
        "d", "u_d", "bound", "w_end", "asymptote", "ratio"
    );
    let mut d = 3;
    while d <= d_max {
        let u = u_d(&c, 4, d, DEFAULT_EPS, 1e-10)?;
        let asym = u_d_asymptotic(&c, d)?;
        println!(
            "{d:>6} {:>14.6e} {:>10.1e} {:>8} {asym:>14.6e} {:>8.4}",
            u.value,
            u.tail_bound,
            u.w_end,
            u.value / asym
        );
        d = if d < 6 { d + 1 } else { d * 2 };
    }
    Ok(())
}
