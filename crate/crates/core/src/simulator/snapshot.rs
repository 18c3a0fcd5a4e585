use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Counting statistics of a graph at step `n`: `X(n,d,w)` keyed by
/// `(degree, weight)`, its marginals `X(n,w)` and `U(n,d)`, and `V_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    n: u64,
    clique_size: usize,
    vertex_count: u64,
    joint: BTreeMap<(u64, u64), u64>,
    weights: BTreeMap<u64, u64>,
    degrees: BTreeMap<u64, u64>,
}

impl Snapshot {
    pub(crate) fn from_vertices(
        n: u64,
        clique_size: usize,
        degree_weight: impl Iterator<Item = (u64, u64)>,
    ) -> Self {
        let mut joint = BTreeMap::new();
        for key in degree_weight {
            *joint.entry(key).or_insert(0) += 1;
        }
        Self::build(n, clique_size, joint)
    }

    /// Rebuilds a snapshot from `(d, w) -> count` cells, e.g. parsed back
    /// from CSV. Fails on cells outside `1 <= w <= n+1`,
    /// `N-1 <= d <= (N-1)w`.
    pub fn from_joint(
        n: u64,
        clique_size: usize,
        joint: BTreeMap<(u64, u64), u64>,
    ) -> Result<Self> {
        let snap = Self::build(n, clique_size, joint);
        snap.check_support()?;
        Ok(snap)
    }

    fn build(n: u64, clique_size: usize, mut joint: BTreeMap<(u64, u64), u64>) -> Self {
        joint.retain(|_, c| *c > 0);
        let mut weights = BTreeMap::new();
        let mut degrees = BTreeMap::new();
        let mut vertex_count = 0;
        for (&(d, w), &c) in &joint {
            *weights.entry(w).or_insert(0) += c;
            *degrees.entry(d).or_insert(0) += c;
            vertex_count += c;
        }
        Snapshot {
            n,
            clique_size,
            vertex_count,
            joint,
            weights,
            degrees,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn clique_size(&self) -> usize {
        self.clique_size
    }

    /// `V_n`.
    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    /// `X(n,d,w)`.
    pub fn count(&self, d: u64, w: u64) -> u64 {
        self.joint.get(&(d, w)).copied().unwrap_or(0)
    }

    /// `X(n,w)`.
    pub fn weight_count(&self, w: u64) -> u64 {
        self.weights.get(&w).copied().unwrap_or(0)
    }

    /// `U(n,d)`.
    pub fn degree_count(&self, d: u64) -> u64 {
        self.degrees.get(&d).copied().unwrap_or(0)
    }

    /// Nonzero cells keyed by `(d, w)`.
    pub fn joint(&self) -> &BTreeMap<(u64, u64), u64> {
        &self.joint
    }

    pub fn weights(&self) -> &BTreeMap<u64, u64> {
        &self.weights
    }

    pub fn degrees(&self) -> &BTreeMap<u64, u64> {
        &self.degrees
    }

    pub fn check_support(&self) -> Result<()> {
        let span = self.clique_size as u64 - 1;
        for &(d, w) in self.joint.keys() {
            if w < 1 || w > self.n + 1 || d < span || d > span * w {
                return Err(Error::Invariant {
                    step: self.n,
                    detail: format!("cell (d={d}, w={w}) outside the reachable support"),
                });
            }
        }
        Ok(())
    }
}
