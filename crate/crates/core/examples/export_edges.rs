//! Write a simulated graph as an edge list with a JSON sidecar.
//!
//! cargo run --example export_edges -- out/edges.txt

use std::path::PathBuf;

use ncg::simulator::{write_edge_list, GraphState};
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    let path = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "edges.txt".into()),
    );
    let mut graph = GraphState::init(ModelParams::new(3, 0.8, 0.5, 0.7)?, 5)?;
    graph.run(1000, &[])?;
    let meta = write_edge_list(&graph, &path)?;
    println!(
        "{} edges on {} vertices -> {} (+ {})",
        graph.edge_count(),
        graph.vertex_count(),
        path.display(),
        path.with_extension("json").display()
    );
    println!("{}", serde_json::to_string(&meta)?);
    Ok(())
}
