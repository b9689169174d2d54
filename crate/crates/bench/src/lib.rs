//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use nskd_core::boxcore::{make_isotropic_box, tensor_boxes};
use nskd_core::protocol::BitMatrix;
use nskd_core::scalar::frac;
use nskd_core::ConditionalBox;

/// n isotropic pairs with CHSH error 1/10.
pub fn isotropic_marginal(n: usize) -> ConditionalBox {
    let b = make_isotropic_box(frac(1, 10)).expect("valid error");
    tensor_boxes(&vec![b; n]).expect("small n")
}

pub fn random_bits(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n).map(|_| u8::from(rng.random::<bool>())).collect()
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..rows).map(|_| (0..cols).map(|_| u8::from(rng.random::<bool>())).collect()).collect()
}

/// `x` with each bit flipped with probability `p`.
pub fn noisy_copy(x: &[u8], p: f64, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    x.iter().map(|&b| b ^ u8::from(rng.random_bool(p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        assert_eq!(random_bits(32, 3), random_bits(32, 3));
        assert_eq!(random_matrix(2, 5, 1).len(), 2);
        assert_eq!(isotropic_marginal(2).probs().len(), 256);
        assert_eq!(noisy_copy(&[0, 1, 1], 0.0, 9), vec![0, 1, 1]);
    }
}
