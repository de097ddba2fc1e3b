//! Shared helpers for the query benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chromaspan::scss::MinimalSquare;

/// Synthetic five-tuple candidate squares, uniform in a 1000x1000 box.
pub fn synthetic_squares(n: usize, seed: u64) -> Vec<MinimalSquare> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let lambda = rng.gen_range(0.5..5.0);
            let l = rng.gen_range(0.0..1000.0);
            let b = rng.gen_range(0.0..1000.0);
            MinimalSquare {
                l,
                r: l + lambda,
                b,
                t: b + lambda,
                lambda,
            }
        })
        .collect()
}
