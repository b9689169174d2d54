//! Symmetrization of each pair by uniformly chosen local relabelings that
//! preserve CHSH success.

use super::cbox::ConditionalBox;
use super::make::relabel_pair;
use crate::scalar::Prob;

/// Relabeling of one nibble `8u + 4x + 2v + y`. Index bit 0 flips both
/// outputs; index bits 1-2 pick one of four input relabelings.
pub fn relabeling(k: usize, cell: usize) -> usize {
    let (mut u, mut x, mut v, mut y) = ((cell >> 3) & 1, (cell >> 2) & 1, (cell >> 1) & 1, cell & 1);
    if k & 1 == 1 {
        x ^= 1;
        y ^= 1;
    }
    match k >> 1 {
        0 => {}
        1 => {
            x ^= u;
            v ^= 1;
        }
        2 => {
            y ^= v;
            u ^= 1;
        }
        _ => {
            x ^= u ^ 1;
            y ^= v;
            u ^= 1;
            v ^= 1;
        }
    }
    (u << 3) | (x << 2) | (v << 1) | y
}

/// Average over the eight relabelings, independently on each pair. The
/// result has uniform marginals and the same CHSH error at every input.
pub fn depolarize<T: Prob>(b: &ConditionalBox<T>) -> ConditionalBox<T> {
    let eighth = T::one() / T::from_usize(8);
    let mut cur = b.clone();
    for pair in 0..b.n_pairs() {
        let mut acc = vec![T::zero(); cur.probs().len()];
        for k in 0..8 {
            let moved = relabel_pair(&cur, pair, |c| relabeling(k, c));
            for (a, m) in acc.iter_mut().zip(moved) {
                *a = a.clone() + m;
            }
        }
        let probs = acc.into_iter().map(|a| a * eighth.clone()).collect();
        cur = ConditionalBox::new(b.n_pairs(), probs).expect("same size");
    }
    cur
}
