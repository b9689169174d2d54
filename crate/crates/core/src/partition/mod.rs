//! Box partitions: decompositions of a marginal box into non-signaling
//! components, one per outcome of an eavesdropper's measurement.

pub mod attack;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boxcore::layout::{alice_parity, alice_word, input_position, nibble};
use crate::boxcore::{check_interfaces, ConditionalBox};
use crate::error::{dim, precondition, Error, Result};
use crate::scalar::{format_rational, serde_rational, Prob, Rational};

pub use attack::{collective_attack, collective_threshold, known_fraction, local_weight, product_attack, single_box_attack};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionElement {
    #[serde(with = "serde_rational")]
    pub weight: Rational,
    pub label: String,
    #[serde(rename = "box")]
    pub cbox: ConditionalBox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxPartition {
    pub marginal: ConditionalBox,
    pub elements: Vec<PartitionElement>,
}

impl BoxPartition {
    pub fn trivial(marginal: &ConditionalBox) -> Self {
        Self {
            marginal: marginal.clone(),
            elements: vec![PartitionElement {
                weight: Rational::one(),
                label: "z".into(),
                cbox: marginal.clone(),
            }],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("partition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("partition file: {e}")))
    }
}

/// Function from Alice's output string to the key bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeyMap {
    /// Parity of all of Alice's bits.
    Xor,
    /// Alice's bit at one pair.
    Bit(usize),
    /// Lookup indexed by Alice's string read as a binary number, pair 0 most significant.
    Table(Vec<u8>),
}

impl KeyMap {
    fn check(&self, n_pairs: usize) -> Result<()> {
        match self {
            KeyMap::Xor => Ok(()),
            KeyMap::Bit(i) if *i < n_pairs => Ok(()),
            KeyMap::Bit(i) => Err(dim(format!("bit {i} of a {n_pairs}-pair box"))),
            KeyMap::Table(t) if t.len() == 1 << n_pairs && t.iter().all(|&b| b <= 1) => Ok(()),
            KeyMap::Table(t) => Err(dim(format!(
                "table has {} entries, expected {} bits",
                t.len(),
                1 << n_pairs
            ))),
        }
    }

    /// Key bit at canonical position `p`.
    pub fn eval(&self, p: usize, n_pairs: usize) -> u8 {
        match self {
            KeyMap::Xor => alice_parity(p, n_pairs),
            KeyMap::Bit(i) => ((nibble(p, n_pairs, *i) >> 2) & 1) as u8,
            KeyMap::Table(t) => t[alice_word(p, n_pairs)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub valid: bool,
    pub weight_sum: String,
    pub first_violation: Option<String>,
}

fn report(sum: &Rational, violation: Option<String>) -> PartitionReport {
    PartitionReport {
        valid: violation.is_none(),
        weight_sum: format_rational(sum),
        first_violation: violation,
    }
}

/// Checks weights, each element's validity, that the mixture reproduces the
/// marginal, and that every element is dominated by the marginal. `tol == 0`
/// is exact.
pub fn validate_partition(marginal: &ConditionalBox, partition: &BoxPartition, tol: f64) -> PartitionReport {
    let sum: Rational = partition.elements.iter().map(|e| &e.weight).sum();
    let n = marginal.n_pairs();
    if partition.marginal != *marginal {
        return report(&sum, Some("partition marginal differs from the stated marginal".into()));
    }
    let m = check_interfaces(marginal, tol);
    if !m.pass {
        return report(&sum, Some("marginal is not a valid non-signaling box".into()));
    }
    if partition.elements.is_empty() {
        return report(&sum, Some("partition has no elements".into()));
    }
    for (k, e) in partition.elements.iter().enumerate() {
        if e.cbox.n_pairs() != n {
            return report(&sum, Some(format!("element {k} ({}) has {} pairs", e.label, e.cbox.n_pairs())));
        }
        if e.weight.is_negative() && !e.weight.within(tol) {
            return report(&sum, Some(format!("element {k} ({}) has negative weight", e.label)));
        }
        let r = check_interfaces(&e.cbox, tol);
        if !r.pass {
            let why = if !r.normalized {
                "is not normalized".to_string()
            } else if !r.nonnegative {
                "has a negative entry".to_string()
            } else {
                format!("signals at interface {}", r.violating_interface.unwrap_or_default())
            };
            return report(&sum, Some(format!("element {k} ({}) {why}", e.label)));
        }
    }
    if !(&sum - Rational::one()).within(tol) {
        return report(&sum, Some(format!("weights sum ≠ 1 (sum is {})", format_rational(&sum))));
    }
    for j in 0..marginal.probs().len() {
        let mix: Rational = partition.elements.iter().map(|e| &e.weight * e.cbox.get(j)).sum();
        if !(&mix - marginal.get(j)).within(tol) {
            return report(&sum, Some(format!("mixture differs from the marginal at cell {j}")));
        }
    }
    for (k, e) in partition.elements.iter().enumerate() {
        let exceeds = |j: usize| {
            let excess = &e.weight * e.cbox.get(j) - marginal.get(j);
            excess.is_positive() && !excess.within(tol)
        };
        if let Some(j) = (0..marginal.probs().len()).find(|&j| exceeds(j)) {
            return report(&sum, Some(format!("element {k} ({}) exceeds the marginal at cell {j}", e.label)));
        }
    }
    report(&sum, None)
}

/// P^z(f(X) = 0 | u, v) for one element box.
fn prob_key_zero(b: &ConditionalBox, f: &KeyMap, base: usize) -> Rational {
    let n = b.n_pairs();
    b.output_positions(base)
        .filter(|&p| f.eval(p, n) == 0)
        .map(|p| b.get(p).clone())
        .sum()
}

fn prepare(partition: &BoxPartition, f: &KeyMap, u: &[u8], v: &[u8]) -> Result<usize> {
    let n = partition.marginal.n_pairs();
    if u.len() != n || v.len() != n {
        return Err(dim(format!("inputs of length {}/{} for {n} pairs", u.len(), v.len())));
    }
    f.check(n)?;
    let r = validate_partition(&partition.marginal, partition, 0.0);
    if !r.valid {
        return Err(precondition(format!("invalid partition: {}", r.first_violation.unwrap_or_default())));
    }
    input_position(u, v)
}

/// Σ_z p^z·|P^z(f(X)=0 | u, v) − ½|.
pub fn distance_from_uniform(partition: &BoxPartition, f: &KeyMap, u: &[u8], v: &[u8]) -> Result<Rational> {
    let base = prepare(partition, f, u, v)?;
    let half = Rational::half();
    Ok(partition
        .elements
        .iter()
        .map(|e| &e.weight * (prob_key_zero(&e.cbox, f, base) - &half).abs())
        .sum())
}

/// Merges elements into two groups by whether P^z(f=0) exceeds ½. Ties go
/// to the second group. An empty group keeps weight zero and the marginal
/// as its box.
pub fn binary_reduce(partition: &BoxPartition, f: &KeyMap, u: &[u8], v: &[u8]) -> Result<BoxPartition> {
    let base = prepare(partition, f, u, v)?;
    let half = Rational::half();
    let marginal = &partition.marginal;
    let size = marginal.probs().len();
    let mut weights = [Rational::zero(), Rational::zero()];
    let mut sums = [vec![Rational::zero(); size], vec![Rational::zero(); size]];
    for e in &partition.elements {
        let g = usize::from(prob_key_zero(&e.cbox, f, base) <= half);
        weights[g] += &e.weight;
        for (s, p) in sums[g].iter_mut().zip(e.cbox.probs()) {
            *s += &e.weight * p;
        }
    }
    let mut elements = Vec::with_capacity(2);
    for g in 0..2 {
        let cbox = if weights[g].is_zero() {
            marginal.clone()
        } else {
            let w = weights[g].clone();
            ConditionalBox::new(marginal.n_pairs(), sums[g].iter().map(|s| s / &w).collect())?
        };
        elements.push(PartitionElement { weight: weights[g].clone(), label: format!("z={g}"), cbox });
    }
    Ok(BoxPartition { marginal: marginal.clone(), elements })
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackReport {
    #[serde(with = "serde_rational")]
    pub distance: Rational,
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    pub key_map: KeyMap,
    pub partition: BoxPartition,
}

pub fn attack_report(partition: BoxPartition, f: KeyMap, u: &[u8], v: &[u8]) -> Result<AttackReport> {
    let distance = distance_from_uniform(&partition, &f, u, v)?;
    Ok(AttackReport { distance, u: u.to_vec(), v: v.to_vec(), key_map: f, partition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcore::{make_isotropic_box, make_pr_box};
    use crate::scalar::frac;

    #[test]
    fn trivial_partition() {
        let b = make_isotropic_box(frac(1, 10)).unwrap();
        let t = BoxPartition::trivial(&b);
        assert!(validate_partition(&b, &t, 0.0).valid);
        assert_eq!(distance_from_uniform(&t, &KeyMap::Bit(0), &[0], &[0]).unwrap(), frac(0, 1));
    }

    #[test]
    fn bad_weights() {
        let b = make_pr_box::<Rational>();
        let p = BoxPartition {
            marginal: b.clone(),
            elements: vec![
                PartitionElement { weight: frac(1, 2), label: "a".into(), cbox: b.clone() },
                PartitionElement { weight: frac(2, 5), label: "b".into(), cbox: b.clone() },
            ],
        };
        let r = validate_partition(&b, &p, 0.0);
        assert!(!r.valid);
        assert!(r.first_violation.unwrap().contains("weights sum ≠ 1"));
        assert!(matches!(
            distance_from_uniform(&p, &KeyMap::Xor, &[0], &[0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mixture_mismatch() {
        let b = make_isotropic_box(frac(1, 10)).unwrap();
        let p = BoxPartition { marginal: b.clone(), elements: vec![PartitionElement { weight: frac(1, 1), label: "pr".into(), cbox: make_pr_box() }] };
        let r = validate_partition(&b, &p, 0.0);
        assert!(r.first_violation.unwrap().contains("mixture differs"));
    }

    #[test]
    fn reduce_trivial_gives_two_elements() {
        let b = make_isotropic_box(frac(1, 10)).unwrap();
        let r = binary_reduce(&BoxPartition::trivial(&b), &KeyMap::Xor, &[0], &[0]).unwrap();
        assert_eq!(r.elements.len(), 2);
        assert_eq!(r.elements[0].weight, frac(0, 1));
        assert!(validate_partition(&b, &r, 0.0).valid);
        assert_eq!(distance_from_uniform(&r, &KeyMap::Xor, &[0], &[0]).unwrap(), frac(0, 1));
    }

    #[test]
    fn json_round_trip() {
        let b = make_isotropic_box(frac(1, 10)).unwrap();
        let t = BoxPartition::trivial(&b);
        let s = t.to_json();
        assert!(s.contains("\"box\""));
        assert_eq!(BoxPartition::from_json(&s).unwrap(), t);
    }

    #[test]
    fn key_map_table() {
        let f = KeyMap::Table(vec![0, 1, 1, 0]);
        assert!(f.check(2).is_ok());
        assert!(f.check(1).is_err());
        for p in 0..256 {
            assert_eq!(f.eval(p, 2), KeyMap::Xor.eval(p, 2));
        }
    }
}
