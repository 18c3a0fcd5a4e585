use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};

pub type CliqueId = u32;

/// Weighted set of equal-size cliques, identified by their sorted vertex ids.
///
/// `sample` holds one entry per unit of weight, so a uniform index into it
/// selects a clique with probability `weight / total_weight`.
#[derive(Debug, Clone)]
pub struct CliqueRegistry {
    clique_size: usize,
    by_key: HashMap<Box<[u32]>, CliqueId>,
    /// Flattened members, `clique_size` ids per clique.
    members: Vec<u32>,
    weights: Vec<u64>,
    sample: Vec<CliqueId>,
}

impl CliqueRegistry {
    pub fn new(clique_size: usize) -> Self {
        CliqueRegistry {
            clique_size,
            by_key: HashMap::new(),
            members: Vec::new(),
            weights: Vec::new(),
            sample: Vec::new(),
        }
    }

    pub fn clique_size(&self) -> usize {
        self.clique_size
    }

    /// Number of distinct cliques.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.sample.len() as u64
    }

    pub fn members(&self, id: CliqueId) -> &[u32] {
        let k = self.clique_size;
        let start = id as usize * k;
        &self.members[start..start + k]
    }

    pub fn weight(&self, id: CliqueId) -> u64 {
        self.weights[id as usize]
    }

    pub fn lookup(&self, sorted_members: &[u32]) -> Option<CliqueId> {
        self.by_key.get(sorted_members).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        self.members
            .chunks_exact(self.clique_size)
            .zip(self.weights.iter().copied())
    }

    /// Adds one unit of weight to the clique on `sorted_members`, registering
    /// it with weight 1 if it is new.
    pub fn increment(&mut self, sorted_members: &[u32]) -> CliqueId {
        debug_assert_eq!(sorted_members.len(), self.clique_size);
        debug_assert!(sorted_members.windows(2).all(|w| w[0] < w[1]));
        let id = match self.by_key.get(sorted_members) {
            Some(&id) => {
                self.weights[id as usize] += 1;
                id
            }
            None => {
                let id = self.weights.len() as CliqueId;
                self.by_key.insert(sorted_members.into(), id);
                self.members.extend_from_slice(sorted_members);
                self.weights.push(1);
                id
            }
        };
        self.sample.push(id);
        id
    }

    /// Weight-proportional draw; consumes one uniform index from `rng`.
    pub fn sample_weighted<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CliqueId> {
        if self.sample.is_empty() {
            return Err(Error::EmptyRegistry);
        }
        Ok(self.sample[rng.gen_range(0..self.sample.len())])
    }
}

/// Free-function form of [`CliqueRegistry::sample_weighted`].
pub fn sample_weighted_clique<R: Rng + ?Sized>(
    registry: &CliqueRegistry,
    rng: &mut R,
) -> Result<CliqueId> {
    registry.sample_weighted(rng)
}
