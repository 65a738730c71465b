use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All sampling in the crate flows through this generator so that a seed
/// fixes every sample set across platforms and releases of `rand`.
pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn vector(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect()
}

/// Nonzero scalar with magnitude in `[0.05, radius]`.
pub(crate) fn nonzero_scalar(rng: &mut ChaCha8Rng, radius: f64) -> f64 {
    let mag = rng.gen_range(0.05..=radius);
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}
