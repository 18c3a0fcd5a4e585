//! Draw (S_W, W) from the increment representation and compare with the
//! recurrence table.

use ncg::limits::{sample_representation, xdw_table};
use ncg::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncg::Result<()> {
    let c = ModelParams::new(4, 0.5, 0.5, 0.5)?.derive_constants()?;
    let table = xdw_table(&c, 4, 30);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let count = 200_000;
    let sample = sample_representation(&c, 4, &mut rng, count, 2000)?;
    println!("P(W > cap) = {:.2e}", sample.truncated_mass);
    println!("{:>4} {:>4} {:>10} {:>10}", "d", "w", "sampled", "x_{d,w}");
    for (d, w) in [(3, 1), (3, 2), (4, 2), (5, 2), (6, 2), (6, 3), (9, 3)] {
        println!(
            "{d:>4} {w:>4} {:>10.5} {:>10.5}",
            sample.get(d, w) as f64 / count as f64,
            table.get(d, w)
        );
    }
    Ok(())
}
