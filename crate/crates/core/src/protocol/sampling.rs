//! Drawing measurement rounds from a single-pair box.

use std::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boxcore::ConditionalBox;
use crate::error::{dim, precondition, Error, Result};
use crate::scalar::Prob;

/// One use of the box: inputs (u, v) and outputs (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Round {
    pub u: u8,
    pub v: u8,
    pub x: u8,
    pub y: u8,
}

impl Round {
    pub fn violates_chsh(&self) -> bool {
        (self.x ^ self.y) != (self.u & self.v)
    }

    pub fn is_key_round(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

/// Serialized as the four digits `uvxy`.
impl fmt::Display for Round {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.u, self.v, self.x, self.y)
    }
}

impl Serialize for Round {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Round {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let b = s.as_bytes();
        if b.len() != 4 || b.iter().any(|c| !matches!(c, b'0' | b'1')) {
            return Err(serde::de::Error::custom(format!("bad round {s:?}")));
        }
        Ok(Round { u: b[0] - b'0', v: b[1] - b'0', x: b[2] - b'0', y: b[3] - b'0' })
    }
}

/// Cumulative output distribution per input, outputs in the order 00, 01, 10, 11.
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: [[f64; 4]; 4],
}

impl Sampler {
    pub fn new<T: Prob>(b: &ConditionalBox<T>) -> Result<Self> {
        if b.n_pairs() != 1 {
            return Err(dim(format!("sampling needs one pair, got {}", b.n_pairs())));
        }
        if !b.normalization_defect().within(1e-9) || b.min_entry().to_f64() < -1e-12 {
            return Err(precondition("box is not a normalized distribution"));
        }
        let mut cdf = [[0.0; 4]; 4];
        for (k, row) in cdf.iter_mut().enumerate() {
            let (u, v) = (k >> 1, k & 1);
            let mut acc = 0.0;
            for (o, slot) in row.iter_mut().enumerate() {
                let (x, y) = (o >> 1, o & 1);
                acc += b.get((u << 3) | (x << 2) | (v << 1) | y).to_f64().max(0.0);
                *slot = acc;
            }
        }
        Ok(Self { cdf })
    }

    /// Inputs from the low two bits of one 32-bit draw, then one uniform f64 for the outputs.
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> Round {
        let bits = rng.next_u32();
        let (u, v) = ((bits & 1) as usize, ((bits >> 1) & 1) as usize);
        let row = &self.cdf[2 * u + v];
        let r: f64 = rng.random::<f64>() * row[3];
        let o = row.iter().position(|&c| r < c).unwrap_or(3);
        Round { u: u as u8, v: v as u8, x: (o >> 1) as u8, y: (o & 1) as u8 }
    }
}

pub fn sample_rounds<T: Prob, R: RngCore + ?Sized>(b: &ConditionalBox<T>, rounds: usize, rng: &mut R) -> Result<Vec<Round>> {
    let s = Sampler::new(b)?;
    Ok((0..rounds).map(|_| s.draw(rng)).collect())
}

impl std::str::FromStr for Round {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|e| Error::Parse(e.to_string()))
    }
}
