//! Published single-box program data, transcribed entry by entry.
//!
//! The published objective vectors for inputs (1,0) and (1,1) disagree with
//! the objective the program actually has at those inputs; both versions are
//! exposed so the disagreement can be reported. The published dual vectors
//! are optimal for the correct objective at every input.

use num_traits::Zero;

use super::program::{xor_objective, SINGLE_ROWS};
use crate::error::{domain, Result};
use crate::scalar::{parse_rational, Rational};

const LAMBDA: [&str; 4] = [
    "0.5 0 0.5 0 0.5 0 0.5 0 0 0.5 0 0.5 0 0.5 0 0.5 0 1 0 1 0 0 0 0 0 0 1 0 1 0 0 0 0 0 0 0 1 0 1 0 0 1 0 0 0 0 0 1",
    "0 0.5 0.5 0 0.5 0 0.5 0 0.5 0 0 0.5 0 0.5 0 0.5 0 1 0 1 0 0 0 0 0 0 1 0 1 0 0 0 0 0 0 0 1 0 1 0 0 1 0 0 0 0 0 1",
    "0.5 0 0.5 0 0 0.5 0.5 0 0 0.5 0 0.5 0.5 0 0 0.5 0 0 0 1 1 0 0 0 0 1 1 0 0 0 0 0 0 1 0 0 0 0 1 0 0 0 0 0 1 0 0 1",
    "0.5 0 0 0.5 0 0.5 0.5 0 0 0.5 0.5 0 0.5 0 0 0.5 0 0 0 1 1 0 0 0 0 1 1 0 0 0 0 0 0 1 0 0 0 0 1 0 0 0 0 0 1 0 0 1",
];

const PRINTED_B: [[i8; 16]; 4] = [
    [1, 1, 0, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, -1, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0],
];

/// Labels of the 16 probability cells in variable order, as `P(xy|uv)`.
pub const CELL_LABELS: [&str; 16] = [
    "P(00|00)", "P(01|00)", "P(00|01)", "P(01|01)",
    "P(10|00)", "P(11|00)", "P(10|01)", "P(11|01)",
    "P(00|10)", "P(01|10)", "P(00|11)", "P(01|11)",
    "P(10|10)", "P(11|10)", "P(10|11)", "P(11|11)",
];

#[derive(Debug, Clone)]
pub struct ReferenceData {
    pub inputs: (u8, u8),
    /// Objective as published.
    pub printed_b: Vec<Rational>,
    /// Objective of the single-box program at these inputs.
    pub derived_b: Vec<Rational>,
    /// Published dual solution, 48 entries.
    pub lambda: Vec<Rational>,
}

impl ReferenceData {
    pub fn printed_matches_derived(&self) -> bool {
        self.printed_b == self.derived_b
    }

    /// Positions where the published objective differs from the derived one.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..16).filter(|&j| self.printed_b[j] != self.derived_b[j]).collect()
    }
}

pub fn reference_single_box(u: u8, v: u8) -> Result<ReferenceData> {
    if u > 1 || v > 1 {
        return Err(domain(format!("inputs ({u}, {v}) must be bits")));
    }
    let k = usize::from(2 * u + v);
    let lambda: Vec<Rational> = LAMBDA[k]
        .split_whitespace()
        .map(|t| parse_rational(t).expect("transcribed constant"))
        .collect();
    debug_assert_eq!(lambda.len(), SINGLE_ROWS);
    let mut derived_b = vec![Rational::zero(); 16];
    for (j, b) in xor_objective(1, &[u], &[v])? {
        derived_b[j] = b;
    }
    Ok(ReferenceData {
        inputs: (u, v),
        printed_b: PRINTED_B[k].iter().map(|&b| Rational::from_integer(b.into())).collect(),
        derived_b,
        lambda,
    })
}
