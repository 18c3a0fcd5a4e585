use serde::{Deserialize, Serialize};

use super::{xw_closed_form, LimitTable};
use crate::error::{Error, Result};
use crate::params::DerivedConstants;

/// Mean and variance of `S_w = xi_1 + ... + xi_w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwMoments {
    pub w: u64,
    pub mean: f64,
    pub variance: f64,
}

/// Law of `xi_w` for `w >= 2` as probabilities of the values `0`, `1` and
/// `N-1`, proportional to `alpha1 (w-1)`, `alpha2 (w-1)` and `beta`.
pub fn xi_law(c: &DerivedConstants, w: u64) -> Result<[f64; 3]> {
    if w < 2 {
        return Err(Error::Domain("xi_1 is the constant N-1".into()));
    }
    let wm1 = (w - 1) as f64;
    let denom = c.alpha * wm1 + c.beta;
    if !(denom > 0.0) {
        return Err(Error::Domain(
            "alpha (w-1) + beta vanishes; increment law undefined".into(),
        ));
    }
    Ok([
        c.alpha1 * wm1 / denom,
        c.alpha2 * wm1 / denom,
        c.beta / denom,
    ])
}

/// Moments of `S_1, ..., S_{w_max}`.
pub fn sw_moments_series(
    c: &DerivedConstants,
    clique_size: usize,
    w_max: u64,
) -> Result<Vec<SwMoments>> {
    let top = (clique_size - 1) as f64;
    let mut out = Vec::with_capacity(w_max as usize);
    let mut mean = top;
    let mut variance = 0.0;
    for w in 1..=w_max {
        if w >= 2 {
            let [_, p1, pt] = xi_law(c, w)?;
            let m = p1 + top * pt;
            mean += m;
            variance += p1 + top * top * pt - m * m;
        }
        out.push(SwMoments { w, mean, variance });
    }
    Ok(out)
}

pub fn sw_moments(c: &DerivedConstants, clique_size: usize, w: u64) -> Result<SwMoments> {
    if w == 0 {
        return Err(Error::Domain("w must be at least 1".into()));
    }
    Ok(*sw_moments_series(c, clique_size, w)?
        .last()
        .expect("w >= 1 yields one entry"))
}

fn require_clt(c: &DerivedConstants) -> Result<()> {
    if c.alpha1 > 0.0 && c.alpha2 > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(
            "local CLT approximation needs alpha1 > 0 and alpha2 > 0".into(),
        ))
    }
}

fn gaussian_profile(c: &DerivedConstants, m: &SwMoments, x_w: f64, d: f64) -> f64 {
    let w = m.w as f64;
    let scale = c.alpha / (2.0 * std::f64::consts::PI * c.alpha1 * c.alpha2 * w).sqrt();
    x_w * scale * (-(d - m.mean).powi(2) / (2.0 * m.variance)).exp()
}

/// `x_w alpha / sqrt(2 pi alpha1 alpha2 w) exp(-(d - E S_w)^2 / (2 Var S_w))`.
pub fn clt_approx_xdw(c: &DerivedConstants, clique_size: usize, d: u64, w: u64) -> Result<f64> {
    require_clt(c)?;
    if w < 2 {
        return Err(Error::Domain("local CLT approximation needs w >= 2".into()));
    }
    let m = sw_moments(c, clique_size, w)?;
    let x_w = xw_closed_form(c, w)?;
    Ok(gaussian_profile(c, &m, x_w, d as f64))
}

/// `sup_d |x_{d,w} - approx(d)| * sqrt(2 pi alpha1 alpha2 w) / (alpha x_w)`,
/// with the exact `x_{d,w}` read from `table` and the supremum taken over
/// the row support.
pub fn local_clt_error(table: &LimitTable, w: u64) -> Result<f64> {
    let c = table.constants();
    require_clt(c)?;
    if w < 2 || w as usize > table.w_max() {
        return Err(Error::Domain(format!(
            "w = {w} outside [2, {}]",
            table.w_max()
        )));
    }
    let m = sw_moments(c, table.clique_size(), w)?;
    let x_w = xw_closed_form(c, w)?;
    let norm =
        (2.0 * std::f64::consts::PI * c.alpha1 * c.alpha2 * w as f64).sqrt() / (c.alpha * x_w);
    let d_min = table.d_min();
    let sup = table
        .row(w as usize)
        .iter()
        .enumerate()
        .map(|(j, &exact)| {
            let d = (d_min + j as u64) as f64;
            (exact - gaussian_profile(c, &m, x_w, d)).abs()
        })
        .fold(0.0, f64::max);
    Ok(sup * norm)
}
