use super::GraphState;

/// Exact one-step outcome law of a fixed vertex, conditional on the current
/// state.
///
/// `probabilities[0]` is the chance that the vertex does not take part in
/// the next step. `probabilities[1 + g]` is the chance that it takes part
/// and its degree grows by `g`, for `g = 0..=N-1`; its weight grows by one
/// in all of these.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    pub probabilities: Vec<f64>,
}

impl TransitionKernel {
    pub fn untouched(&self) -> f64 {
        self.probabilities[0]
    }

    pub fn degree_gain(&self, g: usize) -> f64 {
        self.probabilities[1 + g]
    }
}

fn binom(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Transition probabilities of `vertex` in the next step, from the
/// closed-form counting argument: a vertex of weight `w` lies in N-cliques
/// of total weight `w` (out of `n + 1`) and in (N-1)-cliques of total
/// weight `(N-1)w` (out of `N(n + 1)`); uniform subsets are counted by
/// binomial coefficients over its `d` neighbors and `V - 1 - d`
/// non-neighbors.
pub fn transition_kernel(state: &GraphState, vertex: u32) -> TransitionKernel {
    let params = state.params();
    let n = params.clique_size as u64;
    let (p, q, r) = (params.p, params.q, params.r);
    let v = state.vertex(vertex);
    let w = v.weight() as f64;
    let d = v.degree() as u64;
    let v_count = state.vertex_count() as u64;
    let total = (state.steps() + 1) as f64;
    let others = v_count - 1 - d;

    let mut probs = vec![0.0; n as usize + 1];
    // New vertex joins a weighted (N-1)-clique containing this vertex.
    probs[1 + 1] += p * r * (n - 1) as f64 * w / (n as f64 * total);
    // N-clique redraw: all edges already exist.
    probs[1] += (1.0 - p) * q * w / total;

    let new_uniform = binom(v_count, n - 1);
    let old_uniform = binom(v_count, n);
    for g in 0..n {
        let gain_slot = 1 + g as usize;
        if g >= 1 {
            // The new vertex is always a fresh neighbor; g - 1 of the other
            // N - 2 picks are non-neighbors.
            probs[gain_slot] +=
                p * (1.0 - r) * binom(d, n - 1 - g) * binom(others, g - 1) / new_uniform;
        }
        probs[gain_slot] +=
            (1.0 - p) * (1.0 - q) * binom(d, n - 1 - g) * binom(others, g) / old_uniform;
    }
    probs[0] = 1.0 - probs[1..].iter().sum::<f64>();
    TransitionKernel {
        probabilities: probs,
    }
}
