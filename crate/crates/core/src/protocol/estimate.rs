//! Parameter estimation from the public test sample.

use serde::{Deserialize, Serialize};

use super::keyrate::sampling_bound;
use super::sampling::Round;
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub k: usize,
    /// Fraction of test rounds violating CHSH.
    pub epsilon_hat: f64,
    /// Disagreement among test rounds with inputs (0,0); `None` if there were none.
    pub delta_hat: Option<f64>,
    pub key_input_rounds: usize,
    pub slack: f64,
    pub confidence_bound: f64,
    /// Fraction of ones among Alice's and Bob's test outputs.
    pub alice_ones: f64,
    pub bob_ones: f64,
}

pub fn estimate_parameters(test: &[Round], slack: f64) -> Result<Estimates> {
    if test.is_empty() {
        return Err(domain("the test sample is empty"));
    }
    if !(0.0..=1.0).contains(&slack) {
        return Err(domain(format!("slack = {slack} is outside [0, 1]")));
    }
    let k = test.len();
    let violations = test.iter().filter(|r| r.violates_chsh()).count();
    let key: Vec<&Round> = test.iter().filter(|r| r.is_key_round()).collect();
    let disagree = key.iter().filter(|r| r.x != r.y).count();
    let ones = |f: fn(&Round) -> u8| test.iter().map(|r| usize::from(f(r))).sum::<usize>() as f64 / k as f64;
    Ok(Estimates {
        k,
        epsilon_hat: violations as f64 / k as f64,
        delta_hat: (!key.is_empty()).then(|| disagree as f64 / key.len() as f64),
        key_input_rounds: key.len(),
        slack,
        confidence_bound: sampling_bound(k, slack),
        alice_ones: ones(|r| r.x),
        bob_ones: ones(|r| r.y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(u: u8, v: u8, x: u8, y: u8) -> Round {
        Round { u, v, x, y }
    }

    #[test]
    fn counts() {
        let t = [r(0, 0, 0, 0), r(0, 0, 1, 0), r(1, 1, 1, 0), r(1, 1, 1, 1)];
        let e = estimate_parameters(&t, 0.05).unwrap();
        assert_eq!(e.epsilon_hat, 0.5);
        assert_eq!(e.delta_hat, Some(0.5));
        assert_eq!(e.alice_ones, 0.75);
        assert_eq!(e.bob_ones, 0.25);
    }

    #[test]
    fn no_key_inputs() {
        let e = estimate_parameters(&[r(1, 0, 0, 0)], 0.0).unwrap();
        assert_eq!(e.delta_hat, None);
        assert_eq!(e.epsilon_hat, 0.0);
        assert!(estimate_parameters(&[], 0.1).is_err());
    }

    #[test]
    fn bound_at_ten_thousand() {
        let t = vec![r(0, 0, 0, 0); 10_000];
        let e = estimate_parameters(&t, 0.05).unwrap();
        assert!((e.confidence_bound - 0.4192).abs() < 1e-4);
    }
}
