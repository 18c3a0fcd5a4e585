//! Simulate and compare against the limit laws, printing the report.

use ncg::limits::xdw_table;
use ncg::simulator::GraphState;
use ncg::stats::{compare, empirical_ratios, CompareSettings};
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    let params = ModelParams::new(4, 0.5, 0.5, 0.5)?;
    let table = xdw_table(&params.derive_constants()?, 4, 200);
    let mut settings = CompareSettings::new(100, 60);
    settings.params = Some(params);

    let mut graph = GraphState::init(params, 42)?;
    for snap in graph.run(200_000, &[2_000, 20_000, 200_000])? {
        let report = compare(&empirical_ratios(&snap)?, &table, &settings)?;
        println!(
            "n={:>7}  max cell dev={:.4} at {:?}  TV(w)={:.4}  TV(d)={:.4}  drift={:.2e}",
            report.n,
            report.max_cell_deviation,
            report.max_cell,
            report.tv_weights,
            report.tv_degrees,
            report.vn_drift.unwrap_or(f64::NAN)
        );
        if snap.n() == 200_000 {
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}
