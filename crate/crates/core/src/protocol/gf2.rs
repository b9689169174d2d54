//! Linear hashing over GF(2): syndromes, exhaustive syndrome decoding, and
//! privacy amplification.

use crate::error::{dim, domain, Result};

pub type BitMatrix = Vec<Vec<u8>>;

/// Largest raw key that exhaustive decoding will search.
pub const MAX_DECODE_BITS: usize = 24;

fn check(x: &[u8], rows: &[Vec<u8>]) -> Result<()> {
    if let Some(i) = rows.iter().position(|r| r.len() != x.len()) {
        return Err(dim(format!("row {i} has {} columns, vector has {}", rows[i].len(), x.len())));
    }
    if x.iter().chain(rows.iter().flatten()).any(|&b| b > 1) {
        return Err(domain("entries must be bits"));
    }
    Ok(())
}

/// A ⊙ x: each output bit is the parity of x over one row's support.
pub fn privacy_amplify(x: &[u8], a: &[Vec<u8>]) -> Result<Vec<u8>> {
    check(x, a)?;
    Ok(a.iter()
        .map(|row| row.iter().zip(x).fold(0, |acc, (r, b)| acc ^ (r & b)))
        .collect())
}

pub fn syndrome(x: &[u8], rows: &[Vec<u8>]) -> Result<Vec<u8>> {
    privacy_amplify(x, rows)
}

/// Bit i of the vector sits at mask bit n−1−i, so integer order is lexicographic order.
fn to_mask(x: &[u8]) -> u32 {
    x.iter().fold(0, |acc, &b| (acc << 1) | u32::from(b))
}

fn from_mask(mut m: u32, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for i in (0..n).rev() {
        out[i] = (m & 1) as u8;
        m >>= 1;
    }
    out
}

/// The string closest to `y` in Hamming distance among those with the given
/// syndrome; ties go to the lexicographically smallest.
pub fn decode(target: &[u8], y: &[u8], rows: &[Vec<u8>]) -> Result<Vec<u8>> {
    check(y, rows)?;
    if target.len() != rows.len() {
        return Err(dim(format!("{} syndrome bits for {} rows", target.len(), rows.len())));
    }
    if rows.is_empty() {
        return Ok(y.to_vec());
    }
    let n = y.len();
    if n > MAX_DECODE_BITS {
        return Err(domain(format!("exhaustive decoding supports at most {MAX_DECODE_BITS} bits, got {n}")));
    }
    if rows.len() > n {
        return Err(domain(format!("{} syndrome rows exceed {n} bits", rows.len())));
    }
    let masks: Vec<u32> = rows.iter().map(|r| to_mask(r)).collect();
    let want = to_mask(target);
    let ym = to_mask(y);
    let mut best: Option<(u32, u32)> = None;
    for r in 0..(1u32 << n) {
        let dist = (r ^ ym).count_ones();
        if best.is_some_and(|(d, _)| dist >= d) {
            continue;
        }
        let s = masks.iter().fold(0u32, |acc, &a| (acc << 1) | ((a & r).count_ones() & 1));
        if s == want {
            best = Some((dist, r));
        }
    }
    let (_, r) = best.ok_or_else(|| domain("no string has this syndrome"))?;
    Ok(from_mask(r, n))
}

/// Bob's correction: decode against Alice's syndrome of x.
pub fn reconcile(x: &[u8], y: &[u8], rows: &[Vec<u8>]) -> Result<Vec<u8>> {
    if x.len() != y.len() {
        return Err(dim(format!("x has {} bits, y has {}", x.len(), y.len())));
    }
    decode(&syndrome(x, rows)?, y, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn random_bits(rng: &mut ChaCha20Rng, n: usize) -> Vec<u8> {
        (0..n).map(|_| u8::from(rng.random::<bool>())).collect()
    }

    #[test]
    fn amplification_examples() {
        assert_eq!(privacy_amplify(&[1, 0, 1], &[vec![0, 0, 0], vec![0, 0, 0]]).unwrap(), vec![0, 0]);
        assert_eq!(privacy_amplify(&[1, 1, 1], &[vec![1, 1, 1]]).unwrap(), vec![1]);
        assert_eq!(privacy_amplify(&[1, 0, 1], &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap(), vec![1, 1]);
        assert!(privacy_amplify(&[1, 0], &[vec![1, 1, 0]]).is_err());
    }

    #[test]
    fn equal_strings_decode_to_themselves() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let x = random_bits(&mut rng, 12);
        let rows: Vec<_> = (0..4).map(|_| random_bits(&mut rng, 12)).collect();
        assert_eq!(reconcile(&x, &x, &rows).unwrap(), x);
    }

    #[test]
    fn full_syndrome_recovers_x() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = random_bits(&mut rng, 10);
            let mut y = x.clone();
            y[rng.random_range(0..10)] ^= 1;
            let rows: Vec<Vec<u8>> = (0..10).map(|i| (0..10).map(|j| u8::from(i == j)).collect()).collect();
            assert_eq!(reconcile(&x, &y, &rows).unwrap(), x);
        }
    }

    #[test]
    fn ties_prefer_lexicographic_minimum() {
        // syndrome fixes x0 ^ x1; from y = 00 with target 1 both 01 and 10 are at distance 1
        let out = decode(&[1], &[0, 0], &[vec![1, 1]]).unwrap();
        assert_eq!(out, vec![0, 1]);
    }

    #[test]
    fn no_rows_means_no_correction() {
        let y = vec![1u8; 40];
        assert_eq!(decode(&[], &y, &[]).unwrap(), y);
    }
}
