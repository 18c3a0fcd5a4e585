use rand::Rng;

use crate::error::{Error, Result};

/// Uniform random `k`-subset of `0..vertex_count`, returned sorted.
///
/// Floyd's algorithm: exactly `k` calls to `gen_range`, every subset equally
/// likely, no rejection loop.
pub fn sample_uniform_subset<R: Rng + ?Sized>(
    vertex_count: usize,
    k: usize,
    rng: &mut R,
) -> Result<Vec<u32>> {
    if k > vertex_count {
        return Err(Error::SubsetTooLarge { k, n: vertex_count });
    }
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    for j in (vertex_count - k)..vertex_count {
        let t = rng.gen_range(0..=j) as u32;
        if chosen.contains(&t) {
            chosen.push(j as u32);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}
