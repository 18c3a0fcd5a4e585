//! Gaussian local approximation of x_{d,w} for large w.

use ncg::limits::{clt_approx_xdw, local_clt_error, sw_moments, xdw_table};
use ncg::ModelParams;

fn main() -> ncg::Result<()> {
    let c = ModelParams::new(4, 0.5, 0.5, 0.5)?.derive_constants()?;
    let table = xdw_table(&c, 4, 2000);
    for w in [250u64, 500, 1000, 2000] {
        let m = sw_moments(&c, 4, w)?;
        let peak = m.mean.round() as u64;
        println!(
            "w={w:>5}  E S_w={:>9.3}  Var S_w={:>9.3}  x_(peak,w)={:.4e}  approx={:.4e}  normalized sup error={:.4}",
            m.mean,
            m.variance,
            table.get(peak, w),
            clt_approx_xdw(&c, 4, peak, w)?,
            local_clt_error(&table, w)?
        );
    }
    Ok(())
}
