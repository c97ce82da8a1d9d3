//! Input generators shared by the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slope_core::ModelScore;

/// `m` scores shaped like a nested collection: `g` grows with the index and
/// `f` decreases on average, with noise so that many models leave the path.
pub fn random_scores(m: usize, seed: u64) -> Vec<ModelScore> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|i| {
            let t = (i + 1) as f64;
            let f = 1.0 / t + 0.05 * rng.random::<f64>();
            let g = t / m as f64;
            ModelScore::new(format!("m{i}"), f, g, i + 1).expect("finite score")
        })
        .collect()
}
