//! Box constructors, CHSH statistics and tensor products.

use super::cbox::ConditionalBox;
use super::layout::{cell_count, repeated_mask, with_nibble, nibble, MAX_PAIRS, X_BIT, Y_BIT};
use crate::error::{dim, domain, Result};
use crate::scalar::Prob;

/// `true` when the single-pair cell satisfies x ⊕ y = u·v.
pub fn satisfies_chsh(cell: usize) -> bool {
    let (u, x, v, y) = ((cell >> 3) & 1, (cell >> 2) & 1, (cell >> 1) & 1, cell & 1);
    (x ^ y) == (u & v)
}

fn in_unit_interval<T: Prob>(name: &str, t: &T) -> Result<()> {
    if *t < T::zero() || *t > T::one() {
        return Err(domain(format!("{name} = {t:?} is outside [0, 1]")));
    }
    Ok(())
}

pub fn make_pr_box<T: Prob>() -> ConditionalBox<T> {
    ConditionalBox::from_fn(1, |c| if satisfies_chsh(c) { T::half() } else { T::zero() })
        .expect("16 entries")
}

/// The PR box with violating weight ε spread evenly over the violating cells.
pub fn make_isotropic_box<T: Prob>(epsilon: T) -> Result<ConditionalBox<T>> {
    in_unit_interval("epsilon", &epsilon)?;
    let hi = (T::one() - epsilon.clone()) * T::half();
    let lo = epsilon * T::half();
    ConditionalBox::from_fn(1, |c| if satisfies_chsh(c) { hi.clone() } else { lo.clone() })
}

/// Error δ at input (0,0) and noise `noise` at the other three inputs.
pub fn make_quantum_box<T: Prob>(delta: T, noise: T) -> Result<ConditionalBox<T>> {
    in_unit_interval("delta", &delta)?;
    let three_quarters = T::from_usize(3) / T::from_usize(4);
    if noise < T::zero() || noise > three_quarters {
        return Err(domain(format!("noise = {noise:?} is outside [0, 3/4]")));
    }
    let eighth = T::one() / T::from_usize(8);
    let sat = T::from_usize(3) * eighth.clone() - noise.clone() * T::half();
    let vio = eighth + noise * T::half();
    let agree = (T::one() - delta.clone()) * T::half();
    let disagree = delta * T::half();
    ConditionalBox::from_fn(1, |c| {
        let first_input = (c & 0b1010) == 0;
        match (first_input, satisfies_chsh(c)) {
            (true, true) => agree.clone(),
            (true, false) => disagree.clone(),
            (false, true) => sat.clone(),
            (false, false) => vio.clone(),
        }
    })
}

/// Statistics of measurements on a maximally entangled pair with Alice's
/// angles `(a0, a1)` and Bob's `(b0, b1)`, in degrees. Outcomes agree with
/// probability sin²(α_u − β_v).
pub fn make_singlet_box(angles: [f64; 4]) -> ConditionalBox<f64> {
    let [a0, a1, b0, b1] = angles;
    ConditionalBox::from_fn(1, |c| {
        let (u, x, v, y) = ((c >> 3) & 1, (c >> 2) & 1, (c >> 1) & 1, c & 1);
        let a = if u == 0 { a0 } else { a1 };
        let b = if v == 0 { b0 } else { b1 };
        let s = (a - b).to_radians().sin();
        let same = s * s;
        if x == y {
            same / 2.0
        } else {
            (1.0 - same) / 2.0
        }
    })
    .expect("16 entries")
}

/// Flip every output bit independently with probability `p`.
pub fn apply_output_noise<T: Prob>(b: &ConditionalBox<T>, p: T) -> Result<ConditionalBox<T>> {
    in_unit_interval("flip probability", &p)?;
    let n = b.n_pairs();
    let keep = T::one() - p.clone();
    let mut cur = b.probs().to_vec();
    for pair in 0..n {
        for bit in [X_BIT, Y_BIT] {
            let m = bit << (4 * (n - 1 - pair));
            cur = (0..cur.len())
                .map(|q| keep.clone() * cur[q].clone() + p.clone() * cur[q ^ m].clone())
                .collect();
        }
    }
    ConditionalBox::new(n, cur)
}

fn require_single<T: Prob>(b: &ConditionalBox<T>) -> Result<()> {
    if b.n_pairs() != 1 {
        return Err(dim(format!("expected one pair, got {}", b.n_pairs())));
    }
    Ok(())
}

/// P(x ⊕ y ≠ u·v | u, v) for the inputs (0,0), (0,1), (1,0), (1,1).
pub fn chsh_errors_by_input<T: Prob>(b: &ConditionalBox<T>) -> Result<[T; 4]> {
    require_single(b)?;
    let mut out = [T::zero(), T::zero(), T::zero(), T::zero()];
    for c in 0..16 {
        if !satisfies_chsh(c) {
            let k = ((c >> 3) & 1) * 2 + ((c >> 1) & 1);
            out[k] = out[k].clone() + b.get(c).clone();
        }
    }
    Ok(out)
}

/// Average CHSH failure probability over uniformly chosen inputs.
pub fn chsh_error<T: Prob>(b: &ConditionalBox<T>) -> Result<T> {
    let e = chsh_errors_by_input(b)?;
    let total = e.into_iter().fold(T::zero(), |a, b| a + b);
    Ok(total / T::from_usize(4))
}

/// P(x_0 = 1 | u, v) and P(y_0 = 1 | u, v) for the four inputs, in the order above.
pub fn output_biases<T: Prob>(b: &ConditionalBox<T>) -> Result<([T; 4], [T; 4])> {
    require_single(b)?;
    let mut alice = [T::zero(), T::zero(), T::zero(), T::zero()];
    let mut bob = alice.clone();
    for c in 0..16 {
        let k = ((c >> 3) & 1) * 2 + ((c >> 1) & 1);
        if c & X_BIT != 0 {
            alice[k] = alice[k].clone() + b.get(c).clone();
        }
        if c & Y_BIT != 0 {
            bob[k] = bob[k].clone() + b.get(c).clone();
        }
    }
    Ok((alice, bob))
}

/// Both parties' marginal outputs are uniform for every input.
pub fn is_unbiased<T: Prob>(b: &ConditionalBox<T>, tol: f64) -> Result<bool> {
    let (a, bb) = output_biases(b)?;
    let half = T::half();
    Ok(a.iter().chain(bb.iter()).all(|m| (m.clone() - half.clone()).within(tol)))
}

/// Joint box of independent pairs, first argument in the most significant position.
pub fn tensor_boxes<T: Prob>(boxes: &[ConditionalBox<T>]) -> Result<ConditionalBox<T>> {
    let n: usize = boxes.iter().map(|b| b.n_pairs()).sum();
    if boxes.is_empty() || n > MAX_PAIRS {
        return Err(dim(format!("tensor product of {n} pairs is outside 1..={MAX_PAIRS}")));
    }
    let mut probs = vec![T::one()];
    let mut pairs = 0;
    for b in boxes {
        let width = b.probs().len();
        let mut next = Vec::with_capacity(probs.len() * width);
        for a in &probs {
            for q in b.probs() {
                next.push(a.clone() * q.clone());
            }
        }
        probs = next;
        pairs += b.n_pairs();
    }
    debug_assert_eq!(probs.len(), cell_count(pairs));
    ConditionalBox::new(pairs, probs)
}

/// Deterministic single-pair box with x = a[u] and y = b[v].
pub fn deterministic_box<T: Prob>(a: [u8; 2], b: [u8; 2]) -> ConditionalBox<T> {
    ConditionalBox::from_fn(1, |c| {
        let (u, x, v, y) = ((c >> 3) & 1, (c >> 2) & 1, (c >> 1) & 1, c & 1);
        if usize::from(a[u]) == x && usize::from(b[v]) == y {
            T::one()
        } else {
            T::zero()
        }
    })
    .expect("16 entries")
}

/// Relabel outputs within each pair: flip x when `flip_x`, y when `flip_y`.
pub fn flip_outputs<T: Prob>(b: &ConditionalBox<T>, flip_x: bool, flip_y: bool) -> ConditionalBox<T> {
    let n = b.n_pairs();
    let mut m = 0;
    if flip_x {
        m |= repeated_mask(n, X_BIT);
    }
    if flip_y {
        m |= repeated_mask(n, Y_BIT);
    }
    ConditionalBox::from_fn(n, |p| b.get(p ^ m).clone()).expect("same size")
}

/// Total mass on cells where every pair violates its CHSH condition.
pub fn all_violating_mass<T: Prob>(b: &ConditionalBox<T>) -> T {
    let n = b.n_pairs();
    (0..b.probs().len())
        .filter(|&p| (0..n).all(|i| !satisfies_chsh(nibble(p, n, i))))
        .fold(T::zero(), |acc, p| acc + b.get(p).clone())
}

/// Replace pair `pair`'s nibble according to `f` (a bijection on 0..16).
pub(crate) fn relabel_pair<T: Prob>(
    b: &ConditionalBox<T>,
    pair: usize,
    f: impl Fn(usize) -> usize,
) -> Vec<T> {
    let n = b.n_pairs();
    let mut out = vec![T::zero(); b.probs().len()];
    for (p, w) in b.probs().iter().enumerate() {
        let q = with_nibble(p, n, pair, f(nibble(p, n, pair)));
        out[q] = out[q].clone() + w.clone();
    }
    out
}
