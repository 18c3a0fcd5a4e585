//! One-step outcome law of a vertex: exact kernel against replayed draws.

use ncg::simulator::{transition_kernel, GraphState};
use ncg::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncg::Result<()> {
    let params = ModelParams::new(4, 0.5, 0.5, 0.5)?;
    let mut graph = GraphState::init(params, 3)?;
    graph.run(2000, &[])?;
    let hub = (0..graph.vertex_count() as u32)
        .max_by_key(|&v| graph.vertex(v).weight())
        .unwrap();
    let kernel = transition_kernel(&graph, hub);

    let replays = 100_000u64;
    let mut counts = vec![0u64; kernel.probabilities.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..replays {
        let step = graph.draw_interaction(&mut rng)?;
        let slot = if step.participants.contains(&hub) {
            1 + graph.degree_gain(hub, &step.participants)
        } else {
            0
        };
        counts[slot] += 1;
    }
    let v = graph.vertex(hub);
    println!("vertex {hub}: weight {}, degree {}", v.weight(), v.degree());
    for (slot, &p) in kernel.probabilities.iter().enumerate() {
        let label = if slot == 0 {
            "untouched".to_string()
        } else {
            format!("degree +{}", slot - 1)
        };
        println!(
            "{label:>10}  exact {p:.5}  observed {:.5}",
            counts[slot] as f64 / replays as f64
        );
    }
    Ok(())
}
