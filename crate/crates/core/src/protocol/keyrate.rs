//! Asymptotic key rate, the feasible region, and finite-size security bounds.

use serde::Serialize;

use crate::boxcore::{apply_output_noise, chsh_error, make_singlet_box};
use crate::error::{domain, Result};
use crate::scalar::{binary_entropy, format_decimal};

/// Measurement bases whose statistics saturate the quantum CHSH value, in
/// degrees: Alice's (u=0, u=1) then Bob's (v=0, v=1).
pub const IDEAL_ANGLES: [f64; 4] = [90.0, 60.0, 0.0, 30.0];

fn probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// q = 1 − h(δ) − log₂(1 + 4ε).
pub fn key_rate(epsilon: f64, delta: f64) -> Result<f64> {
    probability("epsilon", epsilon)?;
    probability("delta", delta)?;
    Ok(1.0 - binary_entropy(delta) - (1.0 + 4.0 * epsilon).log2())
}

/// Largest CHSH error with a positive rate at correlation error δ.
pub fn epsilon_max(delta: f64) -> Result<f64> {
    probability("delta", delta)?;
    Ok((-binary_entropy(delta) - 1.0).exp2() - 0.25)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyRateReport {
    pub delta: f64,
    pub epsilon: f64,
    pub rate: f64,
    pub feasible: bool,
    pub epsilon_max: f64,
}

pub fn key_rate_report(epsilon: f64, delta: f64) -> Result<KeyRateReport> {
    let rate = key_rate(epsilon, delta)?;
    Ok(KeyRateReport { delta, epsilon, rate, feasible: rate > 0.0, epsilon_max: epsilon_max(delta)? })
}

/// Every (δ, ε) combination, δ outer.
pub fn region_table(deltas: &[f64], epsilons: &[f64]) -> Result<Vec<KeyRateReport>> {
    let mut out = Vec::with_capacity(deltas.len() * epsilons.len());
    for &d in deltas {
        for &e in epsilons {
            out.push(key_rate_report(e, d)?);
        }
    }
    Ok(out)
}

pub const REGION_HEADER: &str = "delta,epsilon,rate,feasible,epsilon_max";

pub fn region_csv(rows: &[KeyRateReport]) -> String {
    let mut s = String::from(REGION_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            format_decimal(r.delta),
            format_decimal(r.epsilon),
            format_decimal(r.rate),
            r.feasible,
            format_decimal(r.epsilon_max)
        ));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub p_noise: f64,
    pub delta: f64,
    pub epsilon: f64,
}

/// (δ, ε) reached by the ideal entangled source when every output bit is
/// flipped independently with probability p.
pub fn quantum_curve(noises: &[f64]) -> Result<Vec<CurvePoint>> {
    let ideal = make_singlet_box(IDEAL_ANGLES);
    noises
        .iter()
        .map(|&p| {
            let b = apply_output_noise(&ideal, p)?;
            // x ≠ y at inputs (0,0): cells 1 and 4
            let delta = b.get(1) + b.get(4);
            Ok(CurvePoint { p_noise: p, delta, epsilon: chsh_error(&b)? })
        })
        .collect()
}

pub const CURVE_HEADER: &str = "p_noise,delta,epsilon";

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    for p in points {
        s.push_str(&format!(
            "{},{},{}\n",
            format_decimal(p.p_noise),
            format_decimal(p.delta),
            format_decimal(p.epsilon)
        ));
    }
    s
}

/// ½·2^{s+m}·((1+4ε)/2)^n, evaluated in the log domain.
pub fn key_distance_bound(s: usize, m: usize, n: usize, epsilon: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&epsilon) {
        return Err(domain(format!("epsilon = {epsilon} is outside [0, 1/4]")));
    }
    let exponent = (s + m) as f64 - 1.0 + n as f64 * ((1.0 + 4.0 * epsilon) / 2.0).log2();
    Ok(exponent.exp2())
}

/// 2·e^{−k·slack²/16}: probability that the test sample misestimates by more than `slack`.
pub fn sampling_bound(k: usize, slack: f64) -> f64 {
    2.0 * (-(k as f64) * slack * slack / 16.0).exp()
}
