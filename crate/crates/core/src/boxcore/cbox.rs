use serde::{Deserialize, Serialize};

use super::layout::{self, cell_count, input_mask, output_mask, submasks, MAX_PAIRS};
use crate::error::{dim, Error, Result};
use crate::scalar::{format_rational, value_to_rational, Arithmetic, Prob, Rational};

/// Joint conditional distribution P(x y | u v) over `n_pairs` pairs, stored in
/// canonical order (see [`layout`]).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalBox<T = Rational> {
    n_pairs: usize,
    probs: Vec<T>,
}

impl<T: Prob> ConditionalBox<T> {
    pub fn new(n_pairs: usize, probs: Vec<T>) -> Result<Self> {
        if n_pairs == 0 || n_pairs > MAX_PAIRS {
            return Err(dim(format!("{n_pairs} pairs is outside 1..={MAX_PAIRS}")));
        }
        if probs.len() != cell_count(n_pairs) {
            return Err(dim(format!(
                "{} entries for {n_pairs} pairs, expected {}",
                probs.len(),
                cell_count(n_pairs)
            )));
        }
        Ok(Self { n_pairs, probs })
    }

    pub fn from_fn(n_pairs: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::new(n_pairs, (0..cell_count(n_pairs)).map(f).collect())
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    pub fn get(&self, p: usize) -> &T {
        &self.probs[p]
    }

    pub fn prob(&self, x: &[u8], y: &[u8], u: &[u8], v: &[u8]) -> Result<&T> {
        if x.len() != self.n_pairs {
            return Err(dim(format!(
                "{} bits for a box with {} pairs",
                x.len(),
                self.n_pairs
            )));
        }
        Ok(&self.probs[layout::canonical_index(x, y, u, v)?])
    }

    pub fn map<U: Prob>(&self, f: impl Fn(&T) -> U) -> ConditionalBox<U> {
        ConditionalBox {
            n_pairs: self.n_pairs,
            probs: self.probs.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> ConditionalBox<f64> {
        self.map(|p| p.to_f64())
    }

    pub fn to_rational(&self) -> ConditionalBox<Rational> {
        self.map(|p| p.to_rational())
    }

    /// Positions with all outputs zero, one per input combination.
    pub fn input_positions(&self) -> Vec<usize> {
        submasks(input_mask(self.n_pairs))
    }

    /// Positions sharing the inputs of `input_pos`.
    pub fn output_positions(&self, input_pos: usize) -> impl Iterator<Item = usize> {
        submasks(output_mask(self.n_pairs))
            .into_iter()
            .map(move |o| input_pos | o)
    }

    /// Sum of P(· | inputs of `input_pos`).
    pub fn input_total(&self, input_pos: usize) -> T {
        self.output_positions(input_pos)
            .fold(T::zero(), |acc, p| acc + self.probs[p].clone())
    }

    /// Largest |Σ_outputs P − 1| over all inputs.
    pub fn normalization_defect(&self) -> T {
        self.input_positions()
            .into_iter()
            .map(|q| (self.input_total(q) - T::one()).abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn min_entry(&self) -> T {
        self.probs
            .iter()
            .cloned()
            .fold(T::one(), |a, b| if b < a { b } else { a })
    }

    /// `w·self + (1 − w)·other`.
    pub fn mix(&self, other: &Self, w: &T) -> Result<Self> {
        if other.n_pairs != self.n_pairs {
            return Err(dim("mixing boxes of different sizes"));
        }
        let rest = T::one() - w.clone();
        Ok(Self {
            n_pairs: self.n_pairs,
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| w.clone() * a.clone() + rest.clone() * b.clone())
                .collect(),
        })
    }

    /// Entry-wise difference `self − other`, largest magnitude.
    pub fn max_difference(&self, other: &Self) -> Result<T> {
        if other.n_pairs != self.n_pairs {
            return Err(dim("comparing boxes of different sizes"));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a }))
    }
}

/// On-disk representation shared by every command that reads or writes a box.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxFile {
    pub n_pairs: usize,
    pub arithmetic: Arithmetic,
    pub probs: Vec<serde_json::Value>,
}

/// A box in whichever arithmetic it was stored with.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyBox {
    Rational(ConditionalBox<Rational>),
    Float(ConditionalBox<f64>),
}

impl AnyBox {
    pub fn n_pairs(&self) -> usize {
        match self {
            AnyBox::Rational(b) => b.n_pairs(),
            AnyBox::Float(b) => b.n_pairs(),
        }
    }

    pub fn to_rational(&self) -> ConditionalBox<Rational> {
        match self {
            AnyBox::Rational(b) => b.clone(),
            AnyBox::Float(b) => b.to_rational(),
        }
    }

    pub fn to_float(&self) -> ConditionalBox<f64> {
        match self {
            AnyBox::Rational(b) => b.to_float(),
            AnyBox::Float(b) => b.clone(),
        }
    }

    pub fn to_file(&self) -> BoxFile {
        match self {
            AnyBox::Rational(b) => BoxFile {
                n_pairs: b.n_pairs(),
                arithmetic: Arithmetic::Rational,
                probs: b
                    .probs()
                    .iter()
                    .map(|p| serde_json::Value::String(format_rational(p)))
                    .collect(),
            },
            AnyBox::Float(b) => BoxFile {
                n_pairs: b.n_pairs(),
                arithmetic: Arithmetic::Float,
                probs: b.probs().iter().map(|&p| serde_json::json!(p)).collect(),
            },
        }
    }

    pub fn from_file(file: &BoxFile) -> Result<Self> {
        match file.arithmetic {
            Arithmetic::Rational => {
                let probs = file
                    .probs
                    .iter()
                    .map(value_to_rational)
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyBox::Rational(ConditionalBox::new(file.n_pairs, probs)?))
            }
            Arithmetic::Float => {
                let probs = file
                    .probs
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::Number(n) => n
                            .as_f64()
                            .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                        other => Ok(value_to_rational(other)?.to_f64()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyBox::Float(ConditionalBox::new(file.n_pairs, probs)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("box serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: BoxFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("box file: {e}")))?;
        Self::from_file(&file)
    }
}

impl From<ConditionalBox<Rational>> for AnyBox {
    fn from(b: ConditionalBox<Rational>) -> Self {
        AnyBox::Rational(b)
    }
}

impl From<ConditionalBox<f64>> for AnyBox {
    fn from(b: ConditionalBox<f64>) -> Self {
        AnyBox::Float(b)
    }
}

impl Serialize for ConditionalBox<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AnyBox::Rational(self.clone()).to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConditionalBox<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = BoxFile::deserialize(d)?;
        AnyBox::from_file(&file)
            .map(|b| b.to_rational())
            .map_err(serde::de::Error::custom)
    }
}
