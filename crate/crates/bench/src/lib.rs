//! Shared inputs for the benchmarks.

use amforge_core::dataset::{random_design, random_spec};
use amforge_core::{CircuitDesign, Spec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `count` valid designs with `devices` devices each, fixed by `seed`.
pub fn corpus(devices: usize, count: usize, seed: u64) -> Vec<(CircuitDesign, Spec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_design(&mut rng, devices), random_spec(&mut rng)))
        .collect()
}
