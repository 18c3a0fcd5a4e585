//! The limiting joint law x_{d,w} for small weights, with its zero band.

use ncg::limits::xdw_table;
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    for n in [3, 4, 5] {
        let params = ModelParams::new(n, 0.5, 0.5, 0.5)?;
        let c = params.derive_constants()?;
        let table = xdw_table(&c, n, 4);
        println!("N={n}  alpha={:.4}  beta={:.4}", c.alpha, c.beta);
        for (w, row) in table.rows() {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, x)| format!("{}:{:.5}", table.d_min() + j as u64, x))
                .collect();
            println!("  w={w}  x_w={:.6}  {}", table.xw()[w - 1], cells.join(" "));
        }
    }
    Ok(())
}
