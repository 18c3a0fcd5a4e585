use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law_exponent, FitMethod, PowerLawFit};
use crate::error::{Error, Result};
use crate::limits::{theoretical_degree_marginals, LimitTable, DEFAULT_EPS};
use crate::params::{DerivedConstants, ModelParams};
use crate::simulator::Snapshot;

/// `X(n,d,w)/V_n`, `X(n,w)/V_n` and `U(n,d)/V_n`, with `V_n` kept so that
/// masses can be turned back into counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRatios {
    pub n: u64,
    pub clique_size: usize,
    pub vertex_count: u64,
    pub joint: BTreeMap<(u64, u64), f64>,
    pub weights: BTreeMap<u64, f64>,
    pub degrees: BTreeMap<u64, f64>,
}

/// Normalizes a snapshot by its vertex count.
pub fn empirical_ratios(snapshot: &Snapshot) -> Result<EmpiricalRatios> {
    let v = snapshot.vertex_count();
    if v == 0 {
        return Err(Error::Domain("snapshot has no vertices".into()));
    }
    let vf = v as f64;
    Ok(EmpiricalRatios {
        n: snapshot.n(),
        clique_size: snapshot.clique_size(),
        vertex_count: v,
        joint: snapshot
            .joint()
            .iter()
            .map(|(&k, &c)| (k, c as f64 / vf))
            .collect(),
        weights: snapshot
            .weights()
            .iter()
            .map(|(&k, &c)| (k, c as f64 / vf))
            .collect(),
        degrees: snapshot
            .degrees()
            .iter()
            .map(|(&k, &c)| (k, c as f64 / vf))
            .collect(),
    })
}

impl EmpiricalRatios {
    /// The limit laws themselves laid out as ratios: every table cell, the
    /// `x_w` vector, and `u_d` for `d <= d_max` computed exactly as
    /// [`compare`] computes them. Comparing the result against `table`
    /// gives an all-zero report.
    pub fn from_table(table: &LimitTable, d_max: u64, eps: f64, tail_tol: f64) -> Result<Self> {
        let mut joint = BTreeMap::new();
        for (w, row) in table.rows() {
            for (j, &x) in row.iter().enumerate() {
                if x > 0.0 {
                    joint.insert((table.d_min() + j as u64, w as u64), x);
                }
            }
        }
        let weights = table
            .xw()
            .iter()
            .enumerate()
            .map(|(i, &x)| (i as u64 + 1, x))
            .collect();
        let (ud, _) = theoretical_degree_marginals(table, d_max, eps, tail_tol)?;
        Ok(EmpiricalRatios {
            n: 0,
            clique_size: table.clique_size(),
            vertex_count: 0,
            joint,
            weights,
            degrees: ud.into_iter().collect(),
        })
    }

    pub fn get(&self, d: u64, w: u64) -> f64 {
        self.joint.get(&(d, w)).copied().unwrap_or(0.0)
    }

    fn scaled(map: &BTreeMap<u64, f64>, scale: f64) -> Vec<(u64, f64)> {
        map.iter().map(|(&k, &m)| (k, m * scale)).collect()
    }
}

/// Knobs for [`compare`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSettings {
    pub w_cut: u64,
    pub d_cut: u64,
    pub eps: f64,
    pub tail_tol: f64,
    /// Defaults to `[max(10, w_cut/10), w_cut]`.
    pub weight_fit_window: Option<(u64, u64)>,
    /// Defaults to `[max(10, d_cut/10), d_cut]`.
    pub degree_fit_window: Option<(u64, u64)>,
    pub fit_method: FitMethod,
    /// When present, echoed into the report and used for the `V_n` drift.
    pub params: Option<ModelParams>,
}

impl CompareSettings {
    pub fn new(w_cut: u64, d_cut: u64) -> Self {
        CompareSettings {
            w_cut,
            d_cut,
            eps: DEFAULT_EPS,
            tail_tol: 1e-10,
            weight_fit_window: None,
            degree_fit_window: None,
            fit_method: FitMethod::LogLogLS,
            params: None,
        }
    }

    fn default_window(cut: u64) -> (u64, u64) {
        ((cut / 10).max(10), cut)
    }
}

/// Result of an optional fit: skipped fits keep the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    Fitted(PowerLawFit),
    Skipped {
        k_min: u64,
        k_max: u64,
        reason: String,
    },
}

impl FitOutcome {
    pub fn fit(&self) -> Option<&PowerLawFit> {
        match self {
            FitOutcome::Fitted(f) => Some(f),
            FitOutcome::Skipped { .. } => None,
        }
    }
}

/// Discrepancy between empirical ratios and the limit laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub params: Option<ModelParams>,
    #[serde(rename = "N")]
    pub clique_size: usize,
    pub constants: DerivedConstants,
    pub n: u64,
    pub vertex_count: u64,
    pub w_cut: u64,
    pub d_cut: u64,
    /// `max |X(n,d,w)/V_n - x_{d,w}|` over `w <= w_cut`.
    pub max_cell_deviation: f64,
    pub max_cell: Option<(u64, u64)>,
    /// Total variation on `w <= w_cut` after renormalizing both sides.
    pub tv_weights: f64,
    /// Total variation on `N-1 <= d <= d_cut` after renormalizing both sides.
    pub tv_degrees: f64,
    pub empirical_weight_truncation: f64,
    pub theoretical_weight_truncation: f64,
    pub empirical_degree_truncation: f64,
    pub theoretical_degree_truncation: f64,
    /// Whether `u_d` came with certified tail bounds (`alpha2 > 0`) rather
    /// than from finite table columns.
    pub degree_marginals_certified: bool,
    pub eps: f64,
    pub tail_tol: f64,
    /// `-(1 + 1/alpha)`, absent when `alpha = 0`.
    pub theoretical_slope: Option<f64>,
    pub weight_fit: FitOutcome,
    pub degree_fit: FitOutcome,
    /// `|V_n/n - p|`, present when params were supplied and `n > 0`.
    pub vn_drift: Option<f64>,
}

fn total_variation(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let sa: f64 = a.iter().sum();
    let sb: f64 = b.iter().sum();
    let tv = if sa > 0.0 && sb > 0.0 {
        0.5 * a
            .iter()
            .zip(b)
            .map(|(x, y)| (x / sa - y / sb).abs())
            .sum::<f64>()
    } else {
        1.0
    };
    (tv.min(1.0), (1.0 - sa).max(0.0), (1.0 - sb).max(0.0))
}

fn run_fit(dist: &[(u64, f64)], window: (u64, u64), method: FitMethod) -> FitOutcome {
    match fit_power_law_exponent(dist, window.0, window.1, method) {
        Ok(f) => FitOutcome::Fitted(f),
        Err(e) => FitOutcome::Skipped {
            k_min: window.0,
            k_max: window.1,
            reason: e.to_string(),
        },
    }
}

/// Compares `emp` against `table`.
///
/// Requires `w_cut <= table.w_max()`. Degree marginals are computed with
/// the certified tail bound when `alpha2 > 0`.
pub fn compare(
    emp: &EmpiricalRatios,
    table: &LimitTable,
    settings: &CompareSettings,
) -> Result<ComparisonReport> {
    let (w_cut, d_cut) = (settings.w_cut, settings.d_cut);
    if w_cut == 0 || w_cut as usize > table.w_max() {
        return Err(Error::Config(format!(
            "w_cut = {w_cut} must lie in [1, {}]",
            table.w_max()
        )));
    }
    if emp.clique_size != table.clique_size() {
        return Err(Error::Config(format!(
            "snapshot has N = {} but the table has N = {}",
            emp.clique_size,
            table.clique_size()
        )));
    }
    let d_min = table.d_min();
    if d_cut < d_min {
        return Err(Error::Config(format!(
            "d_cut = {d_cut} is below N-1 = {d_min}"
        )));
    }

    let mut max_dev = 0.0f64;
    let mut max_cell = None;
    for w in 1..=w_cut {
        let row = table.row(w as usize);
        for (j, &x) in row.iter().enumerate() {
            let d = d_min + j as u64;
            let dev = (emp.get(d, w) - x).abs();
            if dev > max_dev {
                max_dev = dev;
                max_cell = Some((d, w));
            }
        }
    }
    // Empirical cells outside the theoretical support.
    for (&(d, w), &m) in &emp.joint {
        if w <= w_cut && (d < d_min || d > d_min * w) && m > max_dev {
            max_dev = m;
            max_cell = Some((d, w));
        }
    }

    let emp_w: Vec<f64> = (1..=w_cut)
        .map(|w| emp.weights.get(&w).copied().unwrap_or(0.0))
        .collect();
    let th_w: Vec<f64> = (1..=w_cut).map(|w| table.weight_marginal(w)).collect();
    let (tv_weights, emp_wt, th_wt) = total_variation(&emp_w, &th_w);

    let (ud, certified) =
        theoretical_degree_marginals(table, d_cut, settings.eps, settings.tail_tol)?;
    let emp_d: Vec<f64> = (d_min..=d_cut)
        .map(|d| emp.degrees.get(&d).copied().unwrap_or(0.0))
        .collect();
    let th_d: Vec<f64> = ud.iter().map(|&(_, v)| v).collect();
    let (tv_degrees, emp_dt, th_dt) = total_variation(&emp_d, &th_d);

    // Counts for the likelihood fit, ratios otherwise.
    let scale = match settings.fit_method {
        FitMethod::DiscreteMLE if emp.vertex_count > 0 => emp.vertex_count as f64,
        _ => 1.0,
    };
    let weight_fit = run_fit(
        &EmpiricalRatios::scaled(&emp.weights, scale),
        settings
            .weight_fit_window
            .unwrap_or_else(|| CompareSettings::default_window(w_cut)),
        settings.fit_method,
    );
    let degree_fit = run_fit(
        &EmpiricalRatios::scaled(&emp.degrees, scale),
        settings
            .degree_fit_window
            .unwrap_or_else(|| CompareSettings::default_window(d_cut)),
        settings.fit_method,
    );

    let c = *table.constants();
    let vn_drift = match settings.params {
        Some(p) if emp.n > 0 => Some(drift(emp.vertex_count, emp.n, p.p)),
        _ => None,
    };
    Ok(ComparisonReport {
        params: settings.params,
        clique_size: table.clique_size(),
        constants: c,
        n: emp.n,
        vertex_count: emp.vertex_count,
        w_cut,
        d_cut,
        max_cell_deviation: max_dev,
        max_cell,
        tv_weights,
        tv_degrees,
        empirical_weight_truncation: emp_wt,
        theoretical_weight_truncation: th_wt,
        empirical_degree_truncation: emp_dt,
        theoretical_degree_truncation: th_dt,
        degree_marginals_certified: certified,
        eps: settings.eps,
        tail_tol: settings.tail_tol,
        theoretical_slope: c.gamma_exponent.map(|g| -g),
        weight_fit,
        degree_fit,
        vn_drift,
    })
}

fn drift(vertex_count: u64, n: u64, p: f64) -> f64 {
    (vertex_count as f64 / n as f64 - p).abs()
}

/// One point of the `V_n` drift series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftPoint {
    pub n: u64,
    pub vertex_count: u64,
    pub drift: f64,
}

/// `|V_n/n - p|` for each snapshot; snapshots at `n = 0` are skipped.
pub fn vn_drift(snapshots: &[Snapshot], p: f64) -> Vec<DriftPoint> {
    snapshots
        .iter()
        .filter(|s| s.n() > 0)
        .map(|s| DriftPoint {
            n: s.n(),
            vertex_count: s.vertex_count(),
            drift: drift(s.vertex_count(), s.n(), p),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::xdw_table;
    use crate::simulator::GraphState;

    fn reference() -> (ModelParams, LimitTable) {
        let p = ModelParams::new(4, 0.5, 0.5, 0.5).unwrap();
        let t = xdw_table(&p.derive_constants().unwrap(), 4, 120);
        (p, t)
    }

    #[test]
    fn initial_state_is_a_point_mass() {
        let p = ModelParams::new(4, 0.5, 0.5, 0.5).unwrap();
        let g = GraphState::init(p, 1).unwrap();
        let e = empirical_ratios(&g.snapshot()).unwrap();
        assert_eq!(e.joint.len(), 1);
        assert_eq!(e.get(3, 1), 1.0);
        assert_eq!(e.weights[&1], 1.0);
        assert_eq!(e.degrees[&3], 1.0);
    }

    #[test]
    fn ratios_sum_to_one() {
        let p = ModelParams::new(3, 0.7, 0.4, 0.6).unwrap();
        let mut g = GraphState::init(p, 9).unwrap();
        let snaps = g.run(2000, &[10, 500, 2000]).unwrap();
        for s in &snaps {
            let e = empirical_ratios(s).unwrap();
            for fam in [
                e.joint.values().sum::<f64>(),
                e.weights.values().sum::<f64>(),
                e.degrees.values().sum::<f64>(),
            ] {
                assert!((fam - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn self_comparison_is_zero() {
        let (p, t) = reference();
        let mut s = CompareSettings::new(100, 40);
        s.params = Some(p);
        let e = EmpiricalRatios::from_table(&t, 40, s.eps, s.tail_tol).unwrap();
        let r = compare(&e, &t, &s).unwrap();
        assert_eq!(r.max_cell_deviation, 0.0);
        assert_eq!(r.max_cell, None);
        assert_eq!(r.tv_weights, 0.0);
        assert_eq!(r.tv_degrees, 0.0);
        assert!(r.degree_marginals_certified);
        assert_eq!(r.vn_drift, None);
        assert!((r.theoretical_slope.unwrap() + 1.0 + 1.0 / 0.4375).abs() < 1e-12);
        let f = r.weight_fit.fit().unwrap();
        assert_eq!((f.k_min, f.k_max), (10, 100));
    }

    #[test]
    fn rejects_cut_beyond_table() {
        let (_, t) = reference();
        let e = EmpiricalRatios::from_table(&t, 10, 0.1, 1e-8).unwrap();
        assert!(compare(&e, &t, &CompareSettings::new(121, 10)).is_err());
        assert!(compare(&e, &t, &CompareSettings::new(10, 2)).is_err());
    }

    #[test]
    fn short_run_reports_skipped_fits_and_bounded_metrics() {
        let (p, t) = reference();
        let mut g = GraphState::init(p, 3).unwrap();
        let snap = g.run(300, &[300]).unwrap().pop().unwrap();
        let mut s = CompareSettings::new(100, 60);
        s.params = Some(p);
        // Total vertex weight is 4 * 301, so at most six vertices reach 200.
        s.weight_fit_window = Some((200, 300));
        let r = compare(&empirical_ratios(&snap).unwrap(), &t, &s).unwrap();
        assert!(r.tv_weights > 0.0 && r.tv_weights <= 1.0);
        assert!(r.tv_degrees > 0.0 && r.tv_degrees <= 1.0);
        assert!(r.max_cell_deviation > 0.0);
        assert!(matches!(r.weight_fit, FitOutcome::Skipped { .. }));
        assert_eq!(
            r.vn_drift,
            Some((snap.vertex_count() as f64 / 300.0 - 0.5).abs())
        );
        let json = serde_json::to_string(&r).unwrap();
        let back: ComparisonReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn drift_with_p_one_is_n_over_steps() {
        let p = ModelParams::new(3, 1.0, 0.0, 1.0).unwrap();
        let mut g = GraphState::init(p, 0).unwrap();
        let snaps = g.run(100, &[0, 10, 100]).unwrap();
        let series = vn_drift(&snaps, 1.0);
        assert_eq!(series.len(), 2);
        for pt in series {
            assert!((pt.drift - 3.0 / pt.n as f64).abs() < 1e-15);
        }
    }
}
