//! Locality of a single pair: is the box a mixture of deterministic strategies?

use num_traits::{One, Zero};

use super::cbox::ConditionalBox;
use super::make::deterministic_box;
use crate::error::{dim, Result};
use crate::lpcert::simplex::{minimize, StandardForm};
use crate::scalar::{Prob, Rational};

/// The 16 deterministic strategies `(a0, a1, b0, b1)` with x = a_u, y = b_v.
pub fn deterministic_strategies() -> Vec<([u8; 2], [u8; 2])> {
    (0..16u8)
        .map(|k| ([(k >> 3) & 1, (k >> 2) & 1], [(k >> 1) & 1, k & 1]))
        .collect()
}

/// Smallest L1 distance from the box to the convex hull of deterministic
/// strategies, computed exactly on the box's rational value.
pub fn local_residual<T: Prob>(b: &ConditionalBox<T>) -> Result<Rational> {
    if b.n_pairs() != 1 {
        return Err(dim(format!("locality is checked per pair, got {} pairs", b.n_pairs())));
    }
    let strategies: Vec<ConditionalBox<Rational>> = deterministic_strategies()
        .into_iter()
        .map(|(a, c)| deterministic_box(a, c))
        .collect();
    // columns: 16 weights, 16 positive slacks, 16 negative slacks
    let mut rows: Vec<Vec<(usize, Rational)>> = (0..16)
        .map(|cell| {
            let mut r: Vec<(usize, Rational)> = strategies
                .iter()
                .enumerate()
                .filter(|(_, d)| !d.get(cell).is_zero())
                .map(|(k, _)| (k, Rational::one()))
                .collect();
            r.push((16 + cell, Rational::one()));
            r.push((32 + cell, -Rational::one()));
            r
        })
        .collect();
    let mut rhs: Vec<Rational> = b.probs().iter().map(|p| p.to_rational()).collect();
    rows.push((0..16).map(|k| (k, Rational::one())).collect());
    rhs.push(Rational::one());
    let cost = (0..48)
        .map(|j| if j < 16 { Rational::zero() } else { Rational::one() })
        .collect();
    Ok(minimize(&StandardForm { cols: 48, rows, rhs, cost })?.value)
}

/// Exact for rational boxes when `tol == 0`; otherwise allows an L1 residual up to `tol`.
pub fn is_local<T: Prob>(b: &ConditionalBox<T>, tol: f64) -> Result<bool> {
    let r = local_residual(b)?;
    Ok(r.within(tol))
}
