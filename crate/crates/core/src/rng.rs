//! Deterministic seeding utilities.
//!
//! All randomness in the crate flows through `ChaCha8Rng` seeded from a
//! `u64`, and derived seeds are produced by a fixed splitmix64 chain so that
//! results are reproducible bit-for-bit across runs and platforms and do not
//! depend on `std` hasher internals.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::Mat;

/// RNG for a given 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable combination of a base seed with context words (indices, parameter
/// bit patterns). Used to derive independent per-component and per-trial
/// streams from one experiment seed.
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix64(base);
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

/// Matrix with i.i.d. `N(0, std^2)` entries, filled in column-major order.
pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, std: f64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        let z: f64 = rng.sample(StandardNormal);
        std * z
    })
}

/// Vector with i.i.d. standard normal entries.
pub fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.sample(StandardNormal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_seed_is_stable() {
        // Frozen values: the derivation scheme is part of the on-disk and
        // experiment reproducibility contract.
        assert_eq!(mix_seed(0, &[]), 16294208416658607535);
        assert_eq!(mix_seed(7, &[1, 2]), mix_seed(7, &[1, 2]));
        assert_ne!(mix_seed(7, &[1, 2]), mix_seed(7, &[2, 1]));
        assert_ne!(mix_seed(7, &[1]), mix_seed(8, &[1]));
    }

    #[test]
    fn gaussian_matrix_is_deterministic_per_seed() {
        let a = gaussian_matrix(&mut rng_from_seed(42), 5, 3, 1.0);
        let b = gaussian_matrix(&mut rng_from_seed(42), 5, 3, 1.0);
        assert_eq!(a, b);
        let c = gaussian_matrix(&mut rng_from_seed(43), 5, 3, 1.0);
        assert_ne!(a, c);
    }
}
