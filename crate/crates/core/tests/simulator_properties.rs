//! Structural invariants of the evolving graph over random parameters,
//! seeds and run lengths.

use std::collections::HashSet;

use ncg::simulator::{sample_uniform_subset, GraphState, SimConfig};
use ncg::ModelParams;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Anything the mechanism accepts, including the boundary values of p, q, r.
fn simulable() -> impl Strategy<Value = ModelParams> {
    let unit = prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0];
    let p = prop_oneof![Just(1.0), 0.01f64..=1.0];
    (3usize..=6, p, unit.clone(), unit)
        .prop_map(|(n, p, q, r)| ModelParams::new(n, p, q, r).unwrap())
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariants_hold_along_the_run(m in simulable(), seed in any::<u64>(), steps in 0u64..400) {
        let mut g = GraphState::init(m, seed).unwrap();
        let n = m.clique_size as u64;
        for _ in 0..steps {
            let rec = g.step().unwrap();
            prop_assert_eq!(rec.participants.len(), m.clique_size);
            let distinct: HashSet<_> = rec.participants.iter().collect();
            prop_assert_eq!(distinct.len(), m.clique_size);
            prop_assert_eq!(rec.new_vertex.is_some(), rec.branch.adds_vertex());
            if let Some(v) = rec.new_vertex {
                prop_assert!(rec.participants.contains(&v));
                prop_assert_eq!(g.vertex(v).weight(), 1);
                prop_assert_eq!(g.vertex(v).degree() as u64, n - 1);
            }
        }
        g.check_invariants().unwrap();
        let t = steps + 1;
        prop_assert_eq!(g.nclique_registry().total_weight(), t);
        prop_assert_eq!(g.n1clique_registry().total_weight(), n * t);
        let weight_sum: u64 = g.vertices().iter().map(|v| v.weight()).sum();
        prop_assert_eq!(weight_sum, n * t);

        let s = g.snapshot();
        prop_assert_eq!(s.vertex_count(), g.vertex_count() as u64);
        prop_assert_eq!(s.weights().values().sum::<u64>(), s.vertex_count());
        prop_assert_eq!(s.degrees().values().sum::<u64>(), s.vertex_count());
        s.check_support().unwrap();
    }

    #[test]
    fn same_seed_same_trajectory(m in simulable(), seed in any::<u64>(), steps in 1u64..300) {
        let mut a = GraphState::init(m, seed).unwrap();
        let mut b = GraphState::init(m, seed).unwrap();
        let sa = a.run(steps, &[steps / 2, steps]).unwrap();
        let sb = b.run(steps, &[steps / 2, steps]).unwrap();
        prop_assert_eq!(sa, sb);
        prop_assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn full_tracking_totals(m in simulable(), seed in any::<u64>(), steps in 0u64..150) {
        prop_assume!(m.clique_size <= 5);
        let mut g = GraphState::init_with(m, seed, SimConfig { track_all_cliques: true }).unwrap();
        g.run(steps, &[]).unwrap();
        let n = m.clique_size as u64;
        for k in 2..=n {
            prop_assert_eq!(g.total_clique_weight(k as usize), Some(binom(n, k) * (steps + 1)));
        }
        // Tracking is bookkeeping only; the trajectory is unchanged.
        let mut plain = GraphState::init(m, seed).unwrap();
        plain.run(steps, &[]).unwrap();
        prop_assert_eq!(plain.digest(), g.digest());
    }

    #[test]
    fn uniform_subsets_are_sorted_and_distinct(v in 1usize..200, k in 0usize..10, seed in any::<u64>()) {
        prop_assume!(k <= v);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample_uniform_subset(v, k, &mut rng).unwrap();
        prop_assert_eq!(s.len(), k);
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(s.iter().all(|&x| (x as usize) < v));
    }
}

#[test]
fn p_one_grows_by_one_vertex_per_step() {
    let m = ModelParams::new(3, 1.0, 0.3, 0.7).unwrap();
    let mut g = GraphState::init(m, 17).unwrap();
    let snaps = g.run(10, &[10]).unwrap();
    assert_eq!(snaps[0].vertex_count(), 13);
}
