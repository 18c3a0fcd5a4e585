use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{weight_tail_mass, xi_law, xw_closed_form, xw_recurrence};
use crate::error::{Error, Result};
use crate::params::DerivedConstants;

/// Exact law of `(S_W, W)` for `W <= w_max`, computed by convolving the
/// increment laws: row `w` holds `P(S_w = d) P(W = w)` over
/// `d = N-1 ..= (N-1)w`, the same layout as [`LimitTable`](super::LimitTable).
///
/// `P(W = w)` comes from the Gamma closed form when `alpha > 0` and from
/// the scalar recurrence otherwise, so this route never touches the
/// two-dimensional recurrence.
pub fn representation_joint(
    c: &DerivedConstants,
    clique_size: usize,
    w_max: usize,
) -> Result<Vec<Vec<f64>>> {
    let span = clique_size - 1;
    let weights: Vec<f64> = if c.alpha > 0.0 {
        (1..=w_max as u64)
            .map(|w| xw_closed_form(c, w))
            .collect::<Result<_>>()?
    } else {
        xw_recurrence(c, w_max)
    };

    let mut law = vec![1.0]; // P(S_1 = N-1), offset by N-1
    let mut rows = Vec::with_capacity(w_max);
    for w in 1..=w_max {
        if w >= 2 {
            let [p0, p1, pt] = xi_law(c, w as u64)?;
            let mut next = vec![0.0; law.len() + span];
            for (j, &m) in law.iter().enumerate() {
                next[j] += p0 * m;
                next[j + 1] += p1 * m;
                next[j + span] += pt * m;
            }
            law = next;
        }
        let x_w = weights[w - 1];
        rows.push(law.iter().map(|&m| m * x_w).collect());
    }
    Ok(rows)
}

/// Monte Carlo draws of `(S_W, W)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationSample {
    /// Counts keyed by `(d, w)`.
    #[serde(skip)]
    pub histogram: BTreeMap<(u64, u64), u64>,
    pub count: u64,
    pub w_cap: u64,
    /// `P(W > w_cap)`, the mass removed by truncating and renormalizing.
    pub truncated_mass: f64,
}

impl RepresentationSample {
    pub fn get(&self, d: u64, w: u64) -> u64 {
        self.histogram.get(&(d, w)).copied().unwrap_or(0)
    }
}

/// Draws `count` samples: `W` by inverse CDF from `x_w` truncated at `w_cap`
/// and renormalized, then `S_W = (N-1) + xi_2 + ... + xi_W` with independent
/// increments.
pub fn sample_representation<R: Rng + ?Sized>(
    c: &DerivedConstants,
    clique_size: usize,
    rng: &mut R,
    count: u64,
    w_cap: u64,
) -> Result<RepresentationSample> {
    if !(c.alpha > 0.0) {
        return Err(Error::Domain(
            "representation sampling needs alpha > 0".into(),
        ));
    }
    if w_cap == 0 {
        return Err(Error::Domain("w_cap must be positive".into()));
    }
    let xw = xw_recurrence(c, w_cap as usize);
    let truncated_mass = weight_tail_mass(c, w_cap, xw[w_cap as usize - 1]);
    if truncated_mass >= 1e-3 {
        return Err(Error::Domain(format!(
            "w_cap = {w_cap} leaves P(W > w_cap) = {truncated_mass:.3e}, need < 1e-3"
        )));
    }

    let mut cdf = Vec::with_capacity(xw.len());
    let mut acc = 0.0;
    for &x in &xw {
        acc += x;
        cdf.push(acc);
    }
    let total = acc;

    // Increment thresholds per w: xi_w = 0 below alpha1 (w-1), 1 below alpha (w-1).
    let span = (clique_size - 1) as u64;
    let mut histogram = BTreeMap::new();
    for _ in 0..count {
        let u = rng.gen::<f64>() * total;
        let w = (cdf.partition_point(|&v| v <= u) as u64 + 1).min(w_cap);
        let mut d = span;
        for k in 2..=w {
            let km1 = (k - 1) as f64;
            let v = rng.gen::<f64>() * (c.alpha * km1 + c.beta);
            if v < c.alpha1 * km1 {
                continue;
            } else if v < c.alpha * km1 {
                d += 1;
            } else {
                d += span;
            }
        }
        *histogram.entry((d, w)).or_insert(0) += 1;
    }
    Ok(RepresentationSample {
        histogram,
        count,
        w_cap,
        truncated_mass,
    })
}
