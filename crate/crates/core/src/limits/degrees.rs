use serde::{Deserialize, Serialize};

use super::{weight_tail_mass, LimitTable};
use crate::error::{Error, Result};
use crate::params::DerivedConstants;
use crate::special::ln_gamma;

/// Default half-width exponent of the concentration window:
/// `w in [f - f^{1/2+eps}, f + f^{1/2+eps}]`.
pub const DEFAULT_EPS: f64 = 0.1;

/// Rows beyond this are not attempted when certifying a degree marginal.
const MAX_ROWS: u64 = 50_000_000;

/// A certified value of the degree marginal `u_d = sum_w x_{d,w}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeMarginal {
    pub d: u64,
    /// `sum_{w <= w_end} x_{d,w}`.
    pub value: f64,
    /// Upper bound on the omitted mass `sum_{w > w_end} x_{d,w}`.
    pub tail_bound: f64,
    pub w_end: u64,
    /// `f = alpha d / alpha2`, the weight around which the mass of degree `d`
    /// concentrates, and the window `[f - f^{1/2+eps}, f + f^{1/2+eps}]`.
    pub centre: f64,
    pub window: (f64, f64),
}

/// Hoeffding bound on `sum_{w > w_end} x_{d,w}` given the exact `x_{w_end}`
/// and `E S_{w_end}`.
///
/// For `w > w_end`, `x_{d,w} <= x_w P(S_w <= d)`, and `S_w - xi_1` is a sum
/// of `w-1` independent variables in `[0, N-1]`, so
/// `P(S_w <= d) <= exp(-2 (E S_w - d)^2 / ((w-1)(N-1)^2))` once
/// `E S_w > d`. Every increment has mean at least `alpha2/alpha`, which
/// lower-bounds `E S_w - d` on the whole tail; the smallest exponent over
/// `w > w_end` is found in closed form. The remaining weight mass is
/// `(alpha w_end + beta) x_{w_end}`.
fn tail_bound(
    c: &DerivedConstants,
    clique_size: usize,
    d: u64,
    w_end: u64,
    x_w_end: f64,
    mean_end: f64,
) -> f64 {
    let mass = weight_tail_mass(c, w_end, x_w_end);
    let gap = mean_end - d as f64;
    if gap <= 0.0 {
        return mass;
    }
    let rate = c.alpha2 / c.alpha;
    // For u = w - 1 >= w_end: gap(w) >= rate * u + b.
    let u0 = w_end as f64;
    let b = gap - rate * (w_end as f64 - 1.0);
    let g = |u: f64| (rate * u + b).powi(2) / u;
    let min_exponent = if b > 0.0 && b / rate >= u0 {
        4.0 * rate * b
    } else {
        g(u0)
    };
    let span = (clique_size - 1) as f64;
    mass * (-2.0 * min_exponent / (span * span)).exp()
}

/// `u_d = sum_w x_{d,w}`, summed over `w` from `ceil(d/(N-1))` up to at
/// least `ceil(f + f^{1/2+eps})` and then in doubling increments until the
/// certified tail is at most `tail_tol`.
///
/// Only columns `d' <= d` of the `x_{d,w}` recurrence are needed, so the
/// cost is `O(w_end * d)`.
pub fn u_d(
    c: &DerivedConstants,
    clique_size: usize,
    d: u64,
    eps: f64,
    tail_tol: f64,
) -> Result<DegreeMarginal> {
    let span = clique_size as u64 - 1;
    if d < span {
        return Err(Error::Domain(format!("degree {d} below N-1 = {span}")));
    }
    if !(c.alpha2 > 0.0) {
        return Err(Error::Unsupported(
            "u_d needs alpha2 > 0; the concentration window is undefined".into(),
        ));
    }
    if !(eps > 0.0 && eps < 1.0 / 6.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 1/6)")));
    }
    if !(tail_tol > 0.0) {
        return Err(Error::Domain("tail_tol must be positive".into()));
    }

    let centre = c.alpha * d as f64 / c.alpha2;
    let half = centre.powf(0.5 + eps);
    let window = (centre - half, centre + half);
    let w_low = d.div_ceil(span);
    let mut w_end = (window.1.ceil() as u64).max(w_low).max(1);
    let mut margin = (half.ceil() as u64).max(1);

    let width = (d - span) as usize + 1;
    let top = span as f64;
    let mut row = vec![0.0; width];
    row[0] = 1.0 / (c.alpha + c.beta + 1.0);
    let mut next = vec![0.0; width];
    let mut x_w = row[0];
    let mut mean = top;
    let mut value = if d == span { row[0] } else { 0.0 };
    let mut w = 1u64;

    loop {
        while w < w_end {
            w += 1;
            let wm1 = (w - 1) as f64;
            let denom = c.alpha * w as f64 + c.beta + 1.0;
            let (stay, step, jump) = (c.alpha1 * wm1, c.alpha2 * wm1, c.beta);
            for j in 0..width {
                let mut v = stay * row[j];
                if j >= 1 {
                    v += step * row[j - 1];
                }
                if j >= span as usize {
                    v += jump * row[j - span as usize];
                }
                next[j] = v / denom;
            }
            std::mem::swap(&mut row, &mut next);
            value += row[width - 1];

            let inc_denom = c.alpha * wm1 + c.beta;
            mean += (c.alpha2 * wm1 + top * c.beta) / inc_denom;
            x_w *= inc_denom / denom;
        }
        let bound = tail_bound(c, clique_size, d, w_end, x_w, mean);
        if bound <= tail_tol {
            return Ok(DegreeMarginal {
                d,
                value,
                tail_bound: bound,
                w_end,
                centre,
                window,
            });
        }
        if w_end >= MAX_ROWS {
            return Err(Error::Domain(format!(
                "could not certify u_{d} to {tail_tol:e} within {MAX_ROWS} rows"
            )));
        }
        w_end = (w_end + margin).min(MAX_ROWS);
        margin = margin.saturating_mul(2);
    }
}

/// `Γ(1+(beta+1)/alpha) / (alpha2 Γ(1+beta/alpha)) (alpha d/alpha2)^{-(1+1/alpha)}`.
pub fn u_d_asymptotic(c: &DerivedConstants, d: u64) -> Result<f64> {
    if !(c.alpha > 0.0 && c.alpha2 > 0.0) {
        return Err(Error::Domain(
            "degree asymptotics need alpha > 0 and alpha2 > 0".into(),
        ));
    }
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    let (a, b) = (c.alpha, c.beta);
    let ln_prefactor = ln_gamma(1.0 + (b + 1.0) / a) - c.alpha2.ln() - ln_gamma(1.0 + b / a);
    let ln_scale = (a * d as f64 / c.alpha2).ln();
    Ok((ln_prefactor - (1.0 + 1.0 / a) * ln_scale).exp())
}

/// Column sum `sum_{w <= w_max} x_{d,w}` of a finite table.
pub fn degree_marginal_from_table(table: &LimitTable, d: u64) -> f64 {
    let span = table.d_min();
    if d < span {
        return 0.0;
    }
    let w_first = d.div_ceil(span) as usize;
    super::compensated_sum((w_first..=table.w_max()).map(|w| table.get(d, w as u64)))
}

/// `u_d` for `d = N-1 ..= d_max`: certified sums when `alpha2 > 0`,
/// otherwise column sums of `table`. The flag reports which was used.
pub fn theoretical_degree_marginals(
    table: &LimitTable,
    d_max: u64,
    eps: f64,
    tail_tol: f64,
) -> Result<(Vec<(u64, f64)>, bool)> {
    let c = table.constants();
    let n = table.clique_size();
    let certified = c.alpha2 > 0.0;
    let mut out = Vec::new();
    for d in table.d_min()..=d_max {
        let v = if certified {
            u_d(c, n, d, eps, tail_tol)?.value
        } else {
            degree_marginal_from_table(table, d)
        };
        out.push((d, v));
    }
    Ok((out, certified))
}
