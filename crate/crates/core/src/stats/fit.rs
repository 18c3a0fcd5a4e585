use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of positive-mass support points in the fit window.
pub const MIN_SUPPORT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FitMethod {
    /// Ordinary least squares on `(ln k, ln mass)` over positive points.
    #[default]
    LogLogLS,
    /// Maximum likelihood for `P(k) ∝ k^{-s}` truncated to the window.
    /// Masses are read as counts; the standard error assumes they are.
    DiscreteMLE,
}

/// A fitted log-log slope. `exponent` is the slope itself, so a law
/// `k^{-(1+1/alpha)}` fits to `-(1+1/alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub method: FitMethod,
    pub exponent: f64,
    pub stderr: f64,
    pub k_min: u64,
    pub k_max: u64,
    /// Positive-mass points inside the window.
    pub points: usize,
}

/// Fits the power-law slope of `dist` on `[k_min, k_max]`.
///
/// Entries outside the window and (for least squares) entries with zero
/// mass are ignored. Fails with [`Error::InsufficientSupport`] when fewer
/// than [`MIN_SUPPORT`] positive points fall in the window.
pub fn fit_power_law_exponent(
    dist: &[(u64, f64)],
    k_min: u64,
    k_max: u64,
    method: FitMethod,
) -> Result<PowerLawFit> {
    if k_min == 0 || k_min > k_max {
        return Err(Error::Domain(format!(
            "fit window [{k_min}, {k_max}] must satisfy 1 <= k_min <= k_max"
        )));
    }
    let pts: Vec<(f64, f64)> = dist
        .iter()
        .filter(|&&(k, m)| k >= k_min && k <= k_max && m > 0.0 && m.is_finite())
        .map(|&(k, m)| (k as f64, m))
        .collect();
    if pts.len() < MIN_SUPPORT {
        return Err(Error::InsufficientSupport {
            k_min,
            k_max,
            found: pts.len(),
            needed: MIN_SUPPORT,
        });
    }
    let (exponent, stderr) = match method {
        FitMethod::LogLogLS => least_squares(&pts),
        FitMethod::DiscreteMLE => discrete_mle(&pts, k_min, k_max)?,
    };
    Ok(PowerLawFit {
        method,
        exponent,
        stderr,
        k_min,
        k_max,
        points: pts.len(),
    })
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    (slope, stderr)
}

/// Mean and variance of `ln k` under `k^{-s}` on the integer window.
fn log_moments(s: f64, k_min: u64, k_max: u64) -> (f64, f64) {
    // Weights relative to k_min keep exp() in range for large s.
    let base = (k_min as f64).ln();
    let (mut z, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for k in k_min..=k_max {
        let l = (k as f64).ln();
        let t = (-s * (l - base)).exp();
        z += t;
        m1 += t * l;
        m2 += t * l * l;
    }
    let mean = m1 / z;
    (mean, (m2 / z - mean * mean).max(0.0))
}

fn discrete_mle(pts: &[(f64, f64)], k_min: u64, k_max: u64) -> Result<(f64, f64)> {
    let total: f64 = pts.iter().map(|p| p.1).sum();
    let target = pts.iter().map(|p| p.1 * p.0.ln()).sum::<f64>() / total;
    // The model mean of ln k decreases in s; bracket and bisect.
    let (mut lo, mut hi) = (-20.0f64, 50.0f64);
    if log_moments(lo, k_min, k_max).0 < target || log_moments(hi, k_min, k_max).0 > target {
        return Err(Error::Domain(
            "maximum-likelihood slope outside [-50, 20]".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_moments(mid, k_min, k_max).0 > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    let var = log_moments(s, k_min, k_max).1;
    Ok((-s, 1.0 / (total * var).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn power(s: f64, ks: impl Iterator<Item = u64>) -> Vec<(u64, f64)> {
        ks.map(|k| (k, (k as f64).powf(-s))).collect()
    }

    #[test]
    fn exact_power_law_least_squares() {
        let f =
            fit_power_law_exponent(&power(3.2857, 10..200), 10, 199, FitMethod::LogLogLS).unwrap();
        assert!((f.exponent + 3.2857).abs() < 1e-10);
        assert!(f.stderr < 1e-10);
        assert_eq!(f.points, 190);
    }

    #[test]
    fn exact_power_law_mle() {
        // Expected counts of a truncated law are recovered exactly.
        let dist: Vec<(u64, f64)> = power(2.5, 5..=400)
            .into_iter()
            .map(|(k, m)| (k, 1e6 * m))
            .collect();
        let f = fit_power_law_exponent(&dist, 5, 400, FitMethod::DiscreteMLE).unwrap();
        assert!((f.exponent + 2.5).abs() < 1e-9, "{}", f.exponent);
        assert!(f.stderr > 0.0 && f.stderr < 0.05);
    }

    #[test]
    fn too_few_points() {
        let dist = power(2.0, 1..=9);
        match fit_power_law_exponent(&dist, 1, 100, FitMethod::LogLogLS) {
            Err(Error::InsufficientSupport { found: 9, .. }) => {}
            other => panic!("{other:?}"),
        }
        // Zero masses do not count as support.
        let mut dist = power(2.0, 1..=12);
        dist[0].1 = 0.0;
        dist[1].1 = 0.0;
        dist[2].1 = 0.0;
        assert!(fit_power_law_exponent(&dist, 1, 12, FitMethod::LogLogLS).is_err());
        assert!(fit_power_law_exponent(&dist, 0, 12, FitMethod::LogLogLS).is_err());
    }

    #[test]
    fn window_restricts_points() {
        let mut dist = power(3.0, 1..=100);
        dist[0].1 = 1e9;
        let f = fit_power_law_exponent(&dist, 2, 100, FitMethod::LogLogLS).unwrap();
        assert!((f.exponent + 3.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn least_squares_ignores_scale(s in 1.5f64..5.0, scale in 1e-6f64..1e6) {
            let a = power(s, 10..60);
            let b: Vec<(u64, f64)> = a.iter().map(|&(k, m)| (k, m * scale * (1.0 + 0.1 * ((k % 7) as f64)))).collect();
            let c: Vec<(u64, f64)> = a.iter().map(|&(k, m)| (k, m * (1.0 + 0.1 * ((k % 7) as f64)))).collect();
            let fb = fit_power_law_exponent(&b, 10, 59, FitMethod::LogLogLS).unwrap();
            let fc = fit_power_law_exponent(&c, 10, 59, FitMethod::LogLogLS).unwrap();
            prop_assert!((fb.exponent - fc.exponent).abs() < 1e-9);
        }
    }
}
