//! Canonical flattening of (x, y, u, v) tuples.
//!
//! A single pair occupies a nibble `8u + 4x + 2v + y`. For `n` pairs the
//! nibbles are concatenated with pair 0 in the most significant position.

use crate::error::{dim, Error, Result};

pub const U_BIT: usize = 8;
pub const X_BIT: usize = 4;
pub const V_BIT: usize = 2;
pub const Y_BIT: usize = 1;

/// Largest number of pairs any dense box may hold.
pub const MAX_PAIRS: usize = 6;

pub fn cell_count(n_pairs: usize) -> usize {
    1usize << (4 * n_pairs)
}

pub fn shift(n_pairs: usize, pair: usize) -> usize {
    4 * (n_pairs - 1 - pair)
}

/// The nibble of `pair` inside position `p`.
pub fn nibble(p: usize, n_pairs: usize, pair: usize) -> usize {
    (p >> shift(n_pairs, pair)) & 0xF
}

pub fn with_nibble(p: usize, n_pairs: usize, pair: usize, value: usize) -> usize {
    let s = shift(n_pairs, pair);
    (p & !(0xF << s)) | (value << s)
}

/// `bit` (one of the `*_BIT` constants) replicated for every pair.
pub fn repeated_mask(n_pairs: usize, bit: usize) -> usize {
    (0..n_pairs).fold(0, |acc, i| acc | (bit << shift(n_pairs, i)))
}

pub fn input_mask(n_pairs: usize) -> usize {
    repeated_mask(n_pairs, U_BIT | V_BIT)
}

pub fn output_mask(n_pairs: usize) -> usize {
    repeated_mask(n_pairs, X_BIT | Y_BIT)
}

/// All submasks of `mask`, ascending.
pub fn submasks(mask: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(1 << mask.count_ones());
    let mut s = 0usize;
    loop {
        out.push(s);
        if s == mask {
            break;
        }
        s = ((s | !mask).wrapping_add(1)) & mask;
    }
    out
}

/// Parity of Alice's outputs at position `p`.
pub fn alice_parity(p: usize, n_pairs: usize) -> u8 {
    ((p & repeated_mask(n_pairs, X_BIT)).count_ones() & 1) as u8
}

/// Alice's output string as an integer with pair 0 as the most significant bit.
pub fn alice_word(p: usize, n_pairs: usize) -> usize {
    (0..n_pairs).fold(0, |acc, i| (acc << 1) | ((nibble(p, n_pairs, i) >> 2) & 1))
}

pub fn bob_word(p: usize, n_pairs: usize) -> usize {
    (0..n_pairs).fold(0, |acc, i| (acc << 1) | (nibble(p, n_pairs, i) & 1))
}

/// One tuple of per-pair bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub x: Vec<u8>,
    pub y: Vec<u8>,
    pub u: Vec<u8>,
    pub v: Vec<u8>,
}

pub fn decode(p: usize, n_pairs: usize) -> Cell {
    let mut c = Cell {
        x: Vec::with_capacity(n_pairs),
        y: Vec::with_capacity(n_pairs),
        u: Vec::with_capacity(n_pairs),
        v: Vec::with_capacity(n_pairs),
    };
    for i in 0..n_pairs {
        let q = nibble(p, n_pairs, i);
        c.u.push(((q >> 3) & 1) as u8);
        c.x.push(((q >> 2) & 1) as u8);
        c.v.push(((q >> 1) & 1) as u8);
        c.y.push((q & 1) as u8);
    }
    c
}

fn check_bits(name: &str, bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(i) => Err(Error::Domain(format!("{name}[{i}] = {} is not a bit", bits[i]))),
        None => Ok(()),
    }
}

/// Position of `(x, y, u, v)` in the flattened probability vector.
pub fn canonical_index(x: &[u8], y: &[u8], u: &[u8], v: &[u8]) -> Result<usize> {
    let n = x.len();
    if y.len() != n || u.len() != n || v.len() != n {
        return Err(dim(format!(
            "bit strings have lengths x={}, y={}, u={}, v={}",
            x.len(),
            y.len(),
            u.len(),
            v.len()
        )));
    }
    if n == 0 || n > MAX_PAIRS {
        return Err(dim(format!("{n} pairs is outside 1..={MAX_PAIRS}")));
    }
    for (name, bits) in [("x", x), ("y", y), ("u", u), ("v", v)] {
        check_bits(name, bits)?;
    }
    Ok((0..n).fold(0, |acc, i| {
        (acc << 4)
            | (usize::from(u[i]) << 3)
            | (usize::from(x[i]) << 2)
            | (usize::from(v[i]) << 1)
            | usize::from(y[i])
    }))
}

/// Position with the given inputs and all outputs zero.
pub fn input_position(u: &[u8], v: &[u8]) -> Result<usize> {
    let zeros = vec![0u8; u.len()];
    canonical_index(&zeros, &zeros, u, v)
}
