use super::compensated_sum;
use crate::params::DerivedConstants;

/// Jagged table of `x_{d,w}` for `w = 1..=w_max`; row `w` is dense over
/// `d = N-1 ..= (N-1)w`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTable {
    clique_size: usize,
    constants: DerivedConstants,
    rows: Vec<Vec<f64>>,
    xw: Vec<f64>,
    normalization_deficit: f64,
}

/// Fills the table with the two-dimensional recurrence
///
/// ```text
/// x_{N-1,1} = 1/(alpha+beta+1)
/// x_{d,w} = [alpha1 (w-1) x_{d,w-1} + alpha2 (w-1) x_{d-1,w-1} + beta x_{d-(N-1),w-1}]
///           / (alpha w + beta + 1)
/// ```
///
/// with out-of-range entries read as 0. `x_w` are the row sums.
pub fn xdw_table(constants: &DerivedConstants, clique_size: usize, w_max: usize) -> LimitTable {
    let c = *constants;
    let span = clique_size - 1;
    let w_max = w_max.max(1);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(w_max);
    rows.push(vec![1.0 / (c.alpha + c.beta + 1.0)]);

    for w in 2..=w_max {
        let prev = &rows[w - 2];
        let wm1 = (w - 1) as f64;
        let stay = c.alpha1 * wm1;
        let step = c.alpha2 * wm1;
        let jump = c.beta;
        let denom = c.alpha * w as f64 + c.beta + 1.0;
        let len = span * (w - 1) + 1;
        let mut row = vec![0.0; len];
        for (j, &x) in prev.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            row[j] += stay * x;
            row[j + 1] += step * x;
            row[j + span] += jump * x;
        }
        for v in row.iter_mut() {
            *v /= denom;
        }
        rows.push(row);
    }

    let xw: Vec<f64> = rows
        .iter()
        .map(|r| compensated_sum(r.iter().copied()))
        .collect();
    let normalization_deficit = 1.0 - compensated_sum(xw.iter().copied());
    LimitTable {
        clique_size,
        constants: c,
        rows,
        xw,
        normalization_deficit,
    }
}

impl LimitTable {
    pub fn clique_size(&self) -> usize {
        self.clique_size
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.constants
    }

    pub fn w_max(&self) -> usize {
        self.rows.len()
    }

    /// Smallest degree in row `w`, always `N-1`.
    pub fn d_min(&self) -> u64 {
        self.clique_size as u64 - 1
    }

    /// Row `w` over `d = N-1 ..= (N-1)w`.
    pub fn row(&self, w: usize) -> &[f64] {
        &self.rows[w - 1]
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &[f64])> + '_ {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i + 1, r.as_slice()))
    }

    /// `x_{d,w}`; zero outside the support or beyond `w_max`.
    pub fn get(&self, d: u64, w: u64) -> f64 {
        if w == 0 || w as usize > self.rows.len() {
            return 0.0;
        }
        let row = &self.rows[w as usize - 1];
        d.checked_sub(self.d_min())
            .and_then(|j| row.get(j as usize))
            .copied()
            .unwrap_or(0.0)
    }

    /// `x_w` for `w = 1..=w_max` (index `w - 1`).
    pub fn xw(&self) -> &[f64] {
        &self.xw
    }

    pub fn weight_marginal(&self, w: u64) -> f64 {
        if w == 0 {
            return 0.0;
        }
        self.xw.get(w as usize - 1).copied().unwrap_or(0.0)
    }

    /// `1 - sum_{w <= w_max} x_w`.
    pub fn normalization_deficit(&self) -> f64 {
        self.normalization_deficit
    }
}
