#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;

use nskd_core::boxcore::{deterministic_box, ConditionalBox};
use nskd_core::scalar::frac;
use nskd_core::Rational;

/// The 24 vertices of the one-pair non-signaling polytope: 16 deterministic
/// boxes, then the 8 PR boxes x⊕y = uv ⊕ αu ⊕ βv ⊕ γ.
pub fn vertices() -> Vec<ConditionalBox> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            out.push(deterministic_box([a >> 1, a & 1], [b >> 1, b & 1]));
        }
    }
    for k in 0..8usize {
        let (al, be, ga) = (k >> 2 & 1, k >> 1 & 1, k & 1);
        out.push(
            ConditionalBox::from_fn(1, |p| {
                let (u, x, v, y) = (p >> 3 & 1, p >> 2 & 1, p >> 1 & 1, p & 1);
                if x ^ y == (u & v) ^ (al & u) ^ (be & v) ^ ga {
                    frac(1, 2)
                } else {
                    Rational::zero()
                }
            })
            .unwrap(),
        );
    }
    out
}

pub fn mixture(weights: &[u32]) -> ConditionalBox {
    let total: u32 = weights.iter().sum();
    let mut probs = vec![Rational::zero(); 16];
    for (w, v) in weights.iter().zip(vertices()) {
        if *w == 0 {
            continue;
        }
        let w = frac(i64::from(*w), i64::from(total));
        for (p, q) in probs.iter_mut().zip(v.probs()) {
            *p += q * &w;
        }
    }
    ConditionalBox::new(1, probs).unwrap()
}

/// Random exact non-signaling box on one pair.
pub fn ns_box() -> impl Strategy<Value = ConditionalBox> {
    prop::collection::vec(prop_oneof![3 => Just(0u32), 2 => 1u32..40], 24)
        .prop_filter("some weight", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| mixture(&w))
}

/// Per-input distributions drawn independently; almost always signaling.
pub fn any_distribution_box() -> impl Strategy<Value = ConditionalBox> {
    prop::collection::vec(prop::collection::vec(1u32..20, 4), 4).prop_map(|rows| {
        let mut probs = vec![Rational::zero(); 16];
        for (k, row) in rows.iter().enumerate() {
            let total: u32 = row.iter().sum();
            let (u, v) = (k >> 1, k & 1);
            for (o, w) in row.iter().enumerate() {
                let (x, y) = (o >> 1, o & 1);
                probs[u << 3 | x << 2 | v << 1 | y] = frac(i64::from(*w), i64::from(total));
            }
        }
        ConditionalBox::new(1, probs).unwrap()
    })
}

pub fn error_value() -> impl Strategy<Value = Rational> {
    (0i64..=25).prop_map(|k| frac(k, 100))
}

/// Random box with enough PR weight to keep its CHSH error at most 1/4.
pub fn nonlocal_box() -> impl Strategy<Value = ConditionalBox> {
    (prop::collection::vec(prop_oneof![3 => Just(0u32), 1 => 1u32..10], 24), 30u32..80).prop_map(|(mut w, pr)| {
        w[16] += pr;
        mixture(&w)
    })
}
