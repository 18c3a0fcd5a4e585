//! Grow a graph and print its counting statistics.
//!
//! cargo run --release --example simulate -- [steps] [seed]

use ncg::simulator::GraphState;
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    let mut args = std::env::args().skip(1);
    let steps: u64 = args.next().map_or(100_000, |s| s.parse().expect("steps"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let params = ModelParams::new(4, 0.5, 0.5, 0.5)?;
    let mut graph = GraphState::init(params, seed)?;
    let checkpoints: Vec<u64> = (1..=4).map(|k| k * steps / 4).collect();
    for snap in graph.run(steps, &checkpoints)? {
        let v = snap.vertex_count() as f64;
        println!(
            "n={:>8}  V_n={:>7}  V_n/n={:.4}  X(n,3,1)/V_n={:.4}  X(n,5,2)/V_n={:.5}",
            snap.n(),
            snap.vertex_count(),
            v / snap.n() as f64,
            snap.count(3, 1) as f64 / v,
            snap.count(5, 2) as f64 / v,
        );
    }
    graph.check_invariants()?;
    println!(
        "edges={}  N-cliques={}  (N-1)-cliques={}  digest={:016x}",
        graph.edge_count(),
        graph.nclique_registry().len(),
        graph.n1clique_registry().len(),
        graph.digest()
    );
    Ok(())
}
