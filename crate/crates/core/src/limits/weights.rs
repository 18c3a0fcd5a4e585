use crate::error::{Error, Result};
use crate::params::DerivedConstants;
use crate::special::ln_gamma;

/// `x_1, ..., x_{w_max}` from `x_1 = 1/(alpha+beta+1)` and
/// `x_w = (alpha(w-1)+beta)/(alpha w+beta+1) x_{w-1}`. Valid for `alpha = 0`.
pub fn xw_recurrence(c: &DerivedConstants, w_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(w_max);
    let mut x = 1.0 / (c.alpha + c.beta + 1.0);
    for w in 1..=w_max {
        if w > 1 {
            let wf = w as f64;
            x *= (c.alpha * (wf - 1.0) + c.beta) / (c.alpha * wf + c.beta + 1.0);
        }
        out.push(x);
    }
    out
}

fn require_alpha(c: &DerivedConstants, what: &str) -> Result<()> {
    if c.alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs alpha > 0")))
    }
}

fn ln_weight_constant(c: &DerivedConstants) -> f64 {
    let (a, b) = (c.alpha, c.beta);
    ln_gamma(1.0 + (b + 1.0) / a) - a.ln() - ln_gamma(1.0 + b / a)
}

/// `C = Γ(1 + (beta+1)/alpha) / (alpha Γ(1 + beta/alpha))`, the prefactor
/// of the weight power law. May overflow to `inf` for very small `alpha`;
/// the other routines work in logs.
pub fn weight_constant(c: &DerivedConstants) -> Result<f64> {
    require_alpha(c, "weight_constant")?;
    Ok(ln_weight_constant(c).exp())
}

/// `x_w = C Γ(w + beta/alpha) / Γ(w + (beta+1)/alpha + 1)`, evaluated as a
/// difference of log-Gammas.
pub fn xw_closed_form(c: &DerivedConstants, w: u64) -> Result<f64> {
    require_alpha(c, "xw_closed_form")?;
    if w == 0 {
        return Err(Error::Domain("weights start at 1".into()));
    }
    let (a, b) = (c.alpha, c.beta);
    let wf = w as f64;
    let ln = ln_weight_constant(c) + ln_gamma(wf + b / a) - ln_gamma(wf + (b + 1.0) / a + 1.0);
    Ok(ln.exp())
}

/// `C w^{-(1 + 1/alpha)}`.
pub fn xw_asymptotic(c: &DerivedConstants, w: u64) -> Result<f64> {
    require_alpha(c, "xw_asymptotic")?;
    if w == 0 {
        return Err(Error::Domain("weights start at 1".into()));
    }
    let exponent = 1.0 + 1.0 / c.alpha;
    Ok((ln_weight_constant(c) - exponent * (w as f64).ln()).exp())
}

/// Exact mass beyond `w`: `sum_{k > w} x_k = (alpha w + beta) x_w`, which
/// follows from telescoping the `x_w` recurrence.
pub fn weight_tail_mass(c: &DerivedConstants, w: u64, x_w: f64) -> f64 {
    (c.alpha * w as f64 + c.beta) * x_w
}

/// `∫_w^∞ C t^{-(1+1/alpha)} dt = alpha C w^{-1/alpha}`.
pub fn weight_integral_tail(c: &DerivedConstants, w: u64) -> Result<f64> {
    require_alpha(c, "weight_integral_tail")?;
    Ok((c.alpha.ln() + ln_weight_constant(c) - (w as f64).ln() / c.alpha).exp())
}
