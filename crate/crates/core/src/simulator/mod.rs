//! Step-by-step evolution of the N-interactions graph.
//!
//! Every step selects `N` participating vertices, draws all missing edges
//! among them and adds one unit of weight to each participant, to the
//! participant N-clique and to each of its N (N-1)-subcliques. Selection:
//!
//! * with probability `p` a new vertex joins `N - 1` old vertices, chosen as
//!   a weight-proportional (N-1)-clique with probability `r`, otherwise as a
//!   uniform (N-1)-subset;
//! * otherwise `N` old vertices interact, chosen as a weight-proportional
//!   N-clique with probability `q`, otherwise as a uniform N-subset.
//!
//! # Random variate order
//!
//! Each step consumes, in this order: one `f64` for the `p` branch, one
//! `f64` for the `r` or `q` branch, then the selection itself (one
//! `gen_range` index into the weighted sample array, or `k` `gen_range`
//! calls for Floyd's subset algorithm). The generator is [`GENERATOR_NAME`].

mod export;
mod kernel;
mod registry;
mod sampling;
mod snapshot;

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelParams, ValidationTier};

pub use export::{write_edge_list, EdgeListMeta};
pub use kernel::{transition_kernel, TransitionKernel};
pub use registry::{sample_weighted_clique, CliqueId, CliqueRegistry};
pub use sampling::sample_uniform_subset;
pub use snapshot::Snapshot;

/// Name of the pseudo-random generator, recorded in every output artifact.
pub const GENERATOR_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Also track weights of m-cliques for 2 <= m <= N-2. These never
    /// influence the dynamics and cost O(2^N) per step.
    #[serde(default)]
    pub track_all_cliques: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    NewVertexWeighted,
    NewVertexUniform,
    OldWeighted,
    OldUniform,
}

impl Branch {
    pub fn adds_vertex(self) -> bool {
        matches!(self, Branch::NewVertexWeighted | Branch::NewVertexUniform)
    }
}

/// The outcome of the selection phase of a step, before the graph is touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    pub branch: Branch,
    /// Sorted ids of all `N` participants. A new vertex carries the id it
    /// will receive, i.e. the current vertex count.
    pub participants: Vec<u32>,
    pub new_vertex: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionRecord {
    /// Index of this step (the step counter after applying it).
    pub step: u64,
    pub new_vertex: Option<u32>,
    pub participants: Vec<u32>,
    pub branch: Branch,
    pub edges_added: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Vertex {
    weight: u64,
    adjacency: Vec<u32>,
}

impl Vertex {
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn degree(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self) -> &[u32] {
        &self.adjacency
    }
}

#[derive(Debug, Clone)]
pub struct GraphState {
    params: ModelParams,
    config: SimConfig,
    seed: u64,
    rng: ChaCha8Rng,
    steps: u64,
    vertices: Vec<Vertex>,
    edges: HashSet<u64>,
    nclique: CliqueRegistry,
    n1clique: CliqueRegistry,
    /// Weights of m-cliques for m = 2..=N-2 (index m-2), when tracked.
    lower: Option<Vec<HashMap<Box<[u32]>, u64>>>,
}

fn edge_key(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (u64::from(lo) << 32) | u64::from(hi)
}

impl GraphState {
    /// The initial `K_N`: N vertices of weight 1, the N-clique and its
    /// (N-1)-subcliques each registered with weight 1.
    pub fn init(params: ModelParams, seed: u64) -> Result<Self> {
        Self::init_with(params, seed, SimConfig::default())
    }

    pub fn init_with(params: ModelParams, seed: u64, config: SimConfig) -> Result<Self> {
        params.ensure(ValidationTier::Simulable)?;
        let n = params.clique_size;
        let mut state = GraphState {
            params,
            config,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            steps: 0,
            vertices: vec![Vertex::default(); n],
            edges: HashSet::new(),
            nclique: CliqueRegistry::new(n),
            n1clique: CliqueRegistry::new(n - 1),
            lower: config
                .track_all_cliques
                .then(|| vec![HashMap::new(); n.saturating_sub(3)]),
        };
        let all: Vec<u32> = (0..n as u32).collect();
        state.connect_and_register(&all);
        Ok(state)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn config(&self) -> SimConfig {
        self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of completed steps.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, id: u32) -> &Vertex {
        &self.vertices[id as usize]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&edge_key(a, b))
    }

    pub fn nclique_registry(&self) -> &CliqueRegistry {
        &self.nclique
    }

    pub fn n1clique_registry(&self) -> &CliqueRegistry {
        &self.n1clique
    }

    /// Weight of the m-clique on `sorted_members`, for any 1 <= m <= N.
    /// Returns `None` for 2 <= m <= N-2 unless `track_all_cliques` is set.
    pub fn clique_weight(&self, sorted_members: &[u32]) -> Option<u64> {
        let n = self.params.clique_size;
        match sorted_members.len() {
            1 => self
                .vertices
                .get(sorted_members[0] as usize)
                .map(|v| v.weight),
            m if m == n => Some(
                self.nclique
                    .lookup(sorted_members)
                    .map_or(0, |id| self.nclique.weight(id)),
            ),
            m if m == n - 1 => Some(
                self.n1clique
                    .lookup(sorted_members)
                    .map_or(0, |id| self.n1clique.weight(id)),
            ),
            m if m >= 2 && m < n - 1 => self
                .lower
                .as_ref()
                .map(|lower| lower[m - 2].get(sorted_members).copied().unwrap_or(0)),
            _ => None,
        }
    }

    /// Total weight over all tracked m-cliques, when available.
    pub fn total_clique_weight(&self, m: usize) -> Option<u64> {
        let n = self.params.clique_size;
        match m {
            1 => Some(self.vertices.iter().map(|v| v.weight).sum()),
            m if m == n => Some(self.nclique.total_weight()),
            m if m == n - 1 => Some(self.n1clique.total_weight()),
            m if m >= 2 && m < n - 1 => {
                self.lower.as_ref().map(|lower| lower[m - 2].values().sum())
            }
            _ => None,
        }
    }

    /// Runs the selection phase with an external generator, leaving the
    /// graph untouched.
    pub fn draw_interaction<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Interaction> {
        select(
            &self.params,
            self.vertices.len(),
            &self.nclique,
            &self.n1clique,
            rng,
        )
    }

    /// One evolution step using the state's own generator.
    pub fn step(&mut self) -> Result<InteractionRecord> {
        let interaction = select(
            &self.params,
            self.vertices.len(),
            &self.nclique,
            &self.n1clique,
            &mut self.rng,
        )?;
        Ok(self.apply(&interaction))
    }

    /// Applies a selected interaction: adds the new vertex if any, draws the
    /// missing edges and updates every weight.
    pub fn apply(&mut self, interaction: &Interaction) -> InteractionRecord {
        if let Some(id) = interaction.new_vertex {
            debug_assert_eq!(id as usize, self.vertices.len());
            self.vertices.push(Vertex::default());
        }
        let edges_added = self.connect_and_register(&interaction.participants);
        self.steps += 1;
        InteractionRecord {
            step: self.steps,
            new_vertex: interaction.new_vertex,
            participants: interaction.participants.clone(),
            branch: interaction.branch,
            edges_added,
        }
    }

    fn connect_and_register(&mut self, sorted: &[u32]) -> usize {
        let mut added = 0;
        for (i, &a) in sorted.iter().enumerate() {
            for &b in &sorted[i + 1..] {
                if self.edges.insert(edge_key(a, b)) {
                    self.vertices[a as usize].adjacency.push(b);
                    self.vertices[b as usize].adjacency.push(a);
                    added += 1;
                }
            }
        }
        for &v in sorted {
            self.vertices[v as usize].weight += 1;
        }

        self.nclique.increment(sorted);
        let mut facet = Vec::with_capacity(sorted.len() - 1);
        for skip in 0..sorted.len() {
            facet.clear();
            facet.extend(
                sorted
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v),
            );
            self.n1clique.increment(&facet);
        }

        if let Some(lower) = self.lower.as_mut() {
            for (idx, map) in lower.iter_mut().enumerate() {
                for_each_combination(sorted, idx + 2, |subset| {
                    *map.entry(subset.into()).or_insert(0) += 1;
                });
            }
        }
        added
    }

    /// Degree increase `vertex` would receive from an interaction among
    /// `participants`: the number of other participants not yet adjacent
    /// to it. Ids at or beyond the vertex count are unborn and never adjacent.
    pub fn degree_gain(&self, vertex: u32, participants: &[u32]) -> usize {
        if !participants.contains(&vertex) {
            return 0;
        }
        participants
            .iter()
            .filter(|&&u| u != vertex)
            .filter(|&&u| (u as usize) >= self.vertices.len() || !self.has_edge(vertex, u))
            .count()
    }

    /// Applies `steps` more steps. Snapshots are taken when the step counter
    /// equals an entry of `snapshot_at` (absolute step indices, sorted, in
    /// `[self.steps(), self.steps() + steps]`). Registry and weight totals
    /// are checked at every snapshot.
    pub fn run(&mut self, steps: u64, snapshot_at: &[u64]) -> Result<Vec<Snapshot>> {
        let start = self.steps;
        let end = start + steps;
        if !snapshot_at.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::Config("snapshot_at must be sorted".into()));
        }
        if let Some(&bad) = snapshot_at.iter().find(|&&s| s < start || s > end) {
            return Err(Error::Config(format!(
                "snapshot index {bad} outside [{start}, {end}]"
            )));
        }
        let mut out = Vec::with_capacity(snapshot_at.len());
        let mut pending = snapshot_at.iter().peekable();
        loop {
            while pending.next_if(|&&s| s == self.steps).is_some() {
                self.check_totals()?;
                out.push(self.snapshot());
            }
            if self.steps == end {
                break;
            }
            self.step()?;
        }
        Ok(out)
    }

    /// Counting statistics `X(n,d,w)`, `X(n,w)`, `U(n,d)` and `V_n`.
    pub fn snapshot(&self) -> Snapshot {
        Snapshot::from_vertices(
            self.steps,
            self.params.clique_size,
            self.vertices.iter().map(|v| (v.degree() as u64, v.weight)),
        )
    }

    fn check_totals(&self) -> Result<()> {
        let n = self.params.clique_size as u64;
        let t = self.steps + 1;
        let fail = |detail: String| Error::Invariant {
            step: self.steps,
            detail,
        };
        if self.nclique.total_weight() != t {
            return Err(fail(format!(
                "N-clique weight {} != {t}",
                self.nclique.total_weight()
            )));
        }
        if self.n1clique.total_weight() != n * t {
            return Err(fail(format!(
                "(N-1)-clique weight {} != {}",
                self.n1clique.total_weight(),
                n * t
            )));
        }
        let weight_sum: u64 = self.vertices.iter().map(|v| v.weight).sum();
        if weight_sum != n * t {
            return Err(fail(format!("vertex weight sum {weight_sum} != {}", n * t)));
        }
        Ok(())
    }

    /// Full structural check: totals, per-vertex bounds, adjacency/edge-set
    /// agreement and clique completeness. O(V + E + registry size).
    pub fn check_invariants(&self) -> Result<()> {
        self.check_totals()?;
        let n = self.params.clique_size;
        let fail = |detail: String| Error::Invariant {
            step: self.steps,
            detail,
        };
        let v_count = self.vertices.len() as u64;
        if v_count < n as u64 || v_count > n as u64 + self.steps {
            return Err(fail(format!("vertex count {v_count} out of range")));
        }
        let mut adjacency_total = 0usize;
        for (id, v) in self.vertices.iter().enumerate() {
            let d = v.degree() as u64;
            if v.weight < 1 || v.weight > self.steps + 1 {
                return Err(fail(format!("vertex {id} weight {}", v.weight)));
            }
            if d < n as u64 - 1 || d > (n as u64 - 1) * v.weight {
                return Err(fail(format!(
                    "vertex {id} degree {d} with weight {}",
                    v.weight
                )));
            }
            for &u in &v.adjacency {
                if u as usize == id || !self.has_edge(id as u32, u) {
                    return Err(fail(format!("adjacency of {id} lists {u}")));
                }
            }
            adjacency_total += v.adjacency.len();
        }
        if adjacency_total != 2 * self.edges.len() {
            return Err(fail("adjacency lists disagree with edge set".into()));
        }
        for reg in [&self.nclique, &self.n1clique] {
            for (members, _) in reg.iter() {
                for (i, &a) in members.iter().enumerate() {
                    if members[i + 1..].iter().any(|&b| !self.has_edge(a, b)) {
                        return Err(fail(format!("clique {members:?} not complete")));
                    }
                }
            }
        }
        Ok(())
    }

    /// FNV-1a digest of the full graph (weights, adjacency in insertion
    /// order, registry totals). Equal digests mean equal trajectories.
    pub fn digest(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        };
        feed(self.steps);
        feed(self.vertices.len() as u64);
        for v in &self.vertices {
            feed(v.weight);
            feed(v.adjacency.len() as u64);
            for &u in &v.adjacency {
                feed(u64::from(u));
            }
        }
        feed(self.nclique.len() as u64);
        feed(self.n1clique.len() as u64);
        h
    }
}

fn select<R: Rng + ?Sized>(
    params: &ModelParams,
    vertex_count: usize,
    nclique: &CliqueRegistry,
    n1clique: &CliqueRegistry,
    rng: &mut R,
) -> Result<Interaction> {
    let n = params.clique_size;
    let new_vertex_step = rng.gen::<f64>() < params.p;
    let weighted_draw = rng.gen::<f64>();

    if new_vertex_step {
        let new_id = vertex_count as u32;
        let (branch, mut participants) = if weighted_draw < params.r {
            let id = n1clique.sample_weighted(rng)?;
            (Branch::NewVertexWeighted, n1clique.members(id).to_vec())
        } else {
            (
                Branch::NewVertexUniform,
                sample_uniform_subset(vertex_count, n - 1, rng)?,
            )
        };
        // The new id exceeds every old id, so the list stays sorted.
        participants.push(new_id);
        Ok(Interaction {
            branch,
            participants,
            new_vertex: Some(new_id),
        })
    } else {
        if vertex_count < n {
            return Err(Error::IllegalState(format!(
                "{vertex_count} vertices cannot supply an N-subset of size {n}"
            )));
        }
        let (branch, participants) = if weighted_draw < params.q {
            let id = nclique.sample_weighted(rng)?;
            (Branch::OldWeighted, nclique.members(id).to_vec())
        } else {
            (
                Branch::OldUniform,
                sample_uniform_subset(vertex_count, n, rng)?,
            )
        };
        Ok(Interaction {
            branch,
            participants,
            new_vertex: None,
        })
    }
}

/// Calls `f` with every `m`-subset of `items`, in lexicographic order.
fn for_each_combination(items: &[u32], m: usize, mut f: impl FnMut(&[u32])) {
    let k = items.len();
    if m > k {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    let mut buf = vec![0u32; m];
    loop {
        for (slot, &i) in buf.iter_mut().zip(&idx) {
            *slot = items[i];
        }
        f(&buf);
        let Some(pos) = (0..m).rev().find(|&i| idx[i] != i + k - m) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: f64, q: f64, r: f64) -> ModelParams {
        ModelParams::new(n, p, q, r).unwrap()
    }

    #[test]
    fn init_triangle() {
        let s = GraphState::init(params(3, 0.5, 0.5, 0.5), 1).unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.edge_count(), 3);
        assert_eq!(s.nclique_registry().total_weight(), 1);
        assert_eq!(s.n1clique_registry().total_weight(), 3);
        assert_eq!(s.n1clique_registry().len(), 3);
        s.check_invariants().unwrap();
    }

    #[test]
    fn init_k4() {
        let s = GraphState::init(params(4, 0.5, 0.5, 0.5), 1).unwrap();
        for v in s.vertices() {
            assert_eq!(v.degree(), 3);
            assert_eq!(v.weight(), 1);
        }
        let snap = s.snapshot();
        assert_eq!(snap.count(3, 1), 4);
        assert_eq!(snap.joint().len(), 1);
    }

    #[test]
    fn init_rejects_invalid() {
        let bad = ModelParams {
            clique_size: 2,
            p: 0.5,
            q: 0.5,
            r: 0.5,
        };
        assert!(GraphState::init(bad, 0).is_err());
    }

    #[test]
    fn one_step_from_triangle() {
        let mut s = GraphState::init(params(3, 0.5, 0.5, 0.5), 7).unwrap();
        s.step().unwrap();
        assert_eq!(s.nclique_registry().total_weight(), 2);
        assert_eq!(s.n1clique_registry().total_weight(), 6);
        s.check_invariants().unwrap();
    }

    #[test]
    fn new_vertex_weighted_step() {
        let mut s = GraphState::init(params(4, 1.0, 0.0, 1.0), 3).unwrap();
        for _ in 0..20 {
            let rec = s.step().unwrap();
            assert_eq!(rec.branch, Branch::NewVertexWeighted);
            let id = rec.new_vertex.unwrap();
            assert_eq!(s.vertex(id).weight(), 1);
            assert_eq!(s.vertex(id).degree(), 3);
            assert_eq!(rec.edges_added, 3);
        }
        s.check_invariants().unwrap();
    }

    #[test]
    fn old_weighted_redraw_adds_no_edges() {
        let mut s = GraphState::init(params(4, 0.5, 1.0, 0.5), 11).unwrap();
        // From the initial state the only N-clique is the seed K_4.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let interaction = loop {
            let i = s.draw_interaction(&mut rng).unwrap();
            if i.branch == Branch::OldWeighted {
                break i;
            }
        };
        let id = s
            .nclique_registry()
            .lookup(&interaction.participants)
            .unwrap();
        let before = s.nclique_registry().weight(id);
        let rec = s.apply(&interaction);
        assert_eq!(rec.edges_added, 0);
        assert_eq!(s.nclique_registry().weight(id), before + 1);
    }

    #[test]
    fn p_one_adds_vertex_every_step() {
        let mut s = GraphState::init(params(3, 1.0, 0.5, 0.5), 5).unwrap();
        let snaps = s.run(10, &[10]).unwrap();
        assert_eq!(snaps[0].vertex_count(), 13);
        assert_eq!(snaps[0].n(), 10);
    }

    #[test]
    fn uniform_with_exactly_n_vertices_takes_all() {
        let s = GraphState::init(params(4, 0.5, 0.0, 0.5), 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let i = s.draw_interaction(&mut rng).unwrap();
            if i.branch == Branch::OldUniform {
                assert_eq!(i.participants, vec![0, 1, 2, 3]);
            }
        }
    }

    #[test]
    fn snapshots_at_requested_steps() {
        let mut s = GraphState::init(params(4, 0.5, 0.5, 0.5), 5).unwrap();
        let snaps = s.run(100, &[0, 10, 10, 100]).unwrap();
        let ns: Vec<u64> = snaps.iter().map(|x| x.n()).collect();
        assert_eq!(ns, vec![0, 10, 10, 100]);
        assert!(s.run(5, &[3]).is_err());
        assert!(s.run(5, &[104, 102]).is_err());
    }

    #[test]
    fn determinism_same_seed() {
        let run = |seed| {
            let mut s = GraphState::init(params(5, 0.4, 0.6, 0.3), seed).unwrap();
            s.run(2000, &[]).unwrap();
            s.digest()
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }

    #[test]
    fn full_clique_tracking() {
        let cfg = SimConfig {
            track_all_cliques: true,
        };
        let mut s = GraphState::init_with(params(5, 0.5, 0.5, 0.5), 9, cfg).unwrap();
        s.run(300, &[]).unwrap();
        let t = s.steps() + 1;
        // Every step touches C(N, m) m-cliques, the seed contributes the same.
        assert_eq!(s.total_clique_weight(2), Some(10 * t));
        assert_eq!(s.total_clique_weight(3), Some(10 * t));
        assert_eq!(s.total_clique_weight(4), Some(5 * t));
        assert_eq!(s.total_clique_weight(5), Some(t));
        // Edge weights of the seed K_5 are at least 1.
        assert!(s.clique_weight(&[0, 1]).unwrap() >= 1);
        // Without tracking, lower cliques are unavailable.
        let plain = GraphState::init(params(5, 0.5, 0.5, 0.5), 9).unwrap();
        assert_eq!(plain.clique_weight(&[0, 1]), None);
        assert_eq!(plain.clique_weight(&[0, 1, 2, 3, 4]), Some(1));
    }

    #[test]
    fn combinations_enumerated() {
        let mut seen = Vec::new();
        for_each_combination(&[1, 2, 3, 4], 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn degree_gain_counts_missing_neighbors() {
        let s = GraphState::init(params(3, 0.5, 0.5, 0.5), 1).unwrap();
        // Vertex 0 with a new vertex 3 and an existing neighbor 1.
        assert_eq!(s.degree_gain(0, &[0, 1, 3]), 1);
        assert_eq!(s.degree_gain(0, &[0, 1, 2]), 0);
        assert_eq!(s.degree_gain(2, &[0, 1, 3]), 0);
    }
}
