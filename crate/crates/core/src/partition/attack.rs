//! Explicit partitions: the optimal single-pair attack, its product over
//! independent pairs, and a collective attack on isotropic pairs.

use num_traits::{One, Zero};

use super::{validate_partition, BoxPartition, PartitionElement};
use crate::boxcore::{
    chsh_errors_by_input, deterministic_box, flip_outputs, is_unbiased, make_isotropic_box,
    make_pr_box, tensor_boxes, check_interfaces, ConditionalBox,
};
use crate::error::{dim, domain, precondition, Result};
use crate::scalar::{frac, int, Rational};

/// Deterministic leaves of the single-pair attack: name, violating cell
/// whose entry is the weight, Alice's outputs for u = 0, 1, Bob's for v = 0, 1.
const LEAVES: [(&str, usize, [u8; 2], [u8; 2]); 8] = [
    ("a2", 0b0100, [1, 0], [0, 1]),
    ("a3", 0b0001, [0, 1], [1, 0]),
    ("b2", 0b1100, [0, 1], [0, 0]),
    ("b3", 0b1001, [1, 0], [1, 1]),
    ("c2", 0b0110, [1, 1], [1, 0]),
    ("c3", 0b0011, [0, 0], [0, 1]),
    ("d1", 0b1010, [0, 0], [0, 0]),
    ("d4", 0b1111, [1, 1], [1, 1]),
];

fn leaf_label(name: &str, a: [u8; 2], b: [u8; 2]) -> String {
    format!("{name}[x={}{},y={}{}]", a[0], a[1], b[0], b[1])
}

/// Decomposes an unbiased box with equal error ε ≤ 1/4 at every input into
/// eight deterministic boxes, weighted by the violating entries, and a PR box
/// of weight 1 − 4ε. Elements of weight zero are omitted.
pub fn single_box_attack(b: &ConditionalBox) -> Result<BoxPartition> {
    if b.n_pairs() != 1 {
        return Err(dim(format!("single-pair attack on {} pairs", b.n_pairs())));
    }
    if !check_interfaces(b, 0.0).pass {
        return Err(precondition("box is not a valid non-signaling box"));
    }
    let errs = chsh_errors_by_input(b)?;
    if errs.iter().any(|e| *e != errs[0]) {
        return Err(precondition("CHSH error differs between inputs"));
    }
    if errs[0] > frac(1, 4) {
        return Err(domain("epsilon exceeds 1/4: box is local"));
    }
    if !is_unbiased(b, 0.0)? {
        return Err(precondition("box has biased outputs"));
    }
    let mut elements = Vec::with_capacity(9);
    for (name, cell, a, c) in LEAVES {
        let w = b.get(cell).clone();
        if !w.is_zero() {
            elements.push(PartitionElement { weight: w, label: leaf_label(name, a, c), cbox: deterministic_box(a, c) });
        }
    }
    let pr_weight = Rational::one() - int(4) * &errs[0];
    if !pr_weight.is_zero() {
        elements.push(PartitionElement { weight: pr_weight, label: "pr".into(), cbox: make_pr_box() });
    }
    let part = BoxPartition { marginal: b.clone(), elements };
    let r = validate_partition(b, &part, 0.0);
    if !r.valid {
        return Err(precondition(format!(
            "decomposition does not reproduce the box: {}",
            r.first_violation.unwrap_or_default()
        )));
    }
    Ok(part)
}

fn product_of(parts: &[Vec<PartitionElement>], marginal: ConditionalBox) -> Result<BoxPartition> {
    let mut acc: Vec<(Rational, Vec<usize>)> = vec![(Rational::one(), vec![])];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (w, idx) in &acc {
            for (k, e) in part.iter().enumerate() {
                let mut i = idx.clone();
                i.push(k);
                next.push((w * &e.weight, i));
            }
        }
        acc = next;
    }
    let elements = acc
        .into_iter()
        .filter(|(w, _)| !w.is_zero())
        .map(|(weight, idx)| {
            let boxes: Vec<ConditionalBox> = idx.iter().zip(parts).map(|(&k, p)| p[k].cbox.clone()).collect();
            let label = idx.iter().zip(parts).map(|(&k, p)| p[k].label.as_str()).collect::<Vec<_>>().join("*");
            Ok(PartitionElement { weight, label, cbox: tensor_boxes(&boxes)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxPartition { marginal, elements })
}

/// Tensor product of single-pair attacks on independent boxes.
pub fn product_attack(boxes: &[ConditionalBox]) -> Result<BoxPartition> {
    let parts = boxes
        .iter()
        .map(|b| Ok(single_box_attack(b)?.elements))
        .collect::<Result<Vec<_>>>()?;
    product_of(&parts, tensor_boxes(boxes)?)
}

/// ε at which the all-PR outcome of the collective attack on `n` pairs has weight zero.
pub fn collective_threshold(n: usize) -> Rational {
    frac(3, 8 * n as i64 + 4)
}

fn binomial(n: usize, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |a, i| a * int((n - i) as i64) / int(i as i64 + 1))
}

/// Weight of a single outcome with `l` local symbols among `n`.
fn outcome_weight(eps: &Rational, n: usize, l: usize) -> Rational {
    let a = int(4) * eps / int(3);
    let rest = Rational::one() - &a;
    match l {
        0 => {
            let others: Rational = (1..=n).map(|i| binomial(n, i) * outcome_weight(eps, n, i)).sum();
            Rational::one() - others
        }
        1 => int(4) * eps * num_traits::pow(rest, n - 1),
        _ => num_traits::pow(a, l) * num_traits::pow(rest, n - l),
    }
}

/// Total weight of outcomes that leave at least one pair fully local.
pub fn local_weight(eps: &Rational, n: usize) -> Rational {
    Rational::one() - outcome_weight(eps, n, 0)
}

/// Collective attack on n isotropic pairs. Eve's outcome marks a subset of
/// pairs local; one marked pair carries error 1/4, two or more carry 3/4
/// each, and unmarked pairs are PR boxes. Local pairs are further split into
/// deterministic strategies.
pub fn collective_attack(eps: &Rational, n: usize) -> Result<BoxPartition> {
    if n == 0 {
        return Err(dim("no pairs"));
    }
    if *eps < Rational::zero() || *eps > frac(1, 4) {
        return Err(domain(format!("epsilon {eps} is outside [0, 1/4]")));
    }
    let all_pr = outcome_weight(eps, n, 0);
    if all_pr < Rational::zero() {
        return Err(domain(format!(
            "weight of the outcome with no local pair (#l = 0 row) would be {all_pr}; epsilon exceeds 3/(8n+4) = {}",
            collective_threshold(n)
        )));
    }
    let eighth = frac(1, 8);
    let quarter: Vec<PartitionElement> = LEAVES
        .iter()
        .map(|&(name, _, a, c)| PartitionElement { weight: eighth.clone(), label: leaf_label(name, a, c), cbox: deterministic_box(a, c) })
        .collect();
    let three_quarter: Vec<PartitionElement> = LEAVES
        .iter()
        .map(|&(name, _, a, c)| PartitionElement {
            weight: eighth.clone(),
            label: leaf_label(&format!("{name}'"), a, [c[0] ^ 1, c[1] ^ 1]),
            cbox: flip_outputs(&deterministic_box(a, c), false, true),
        })
        .collect();
    let pr = vec![PartitionElement { weight: Rational::one(), label: "pr".into(), cbox: make_pr_box() }];

    let iso = make_isotropic_box(eps.clone())?;
    let marginal = tensor_boxes(&vec![iso; n])?;
    let mut elements = Vec::new();
    for z in 0usize..(1 << n) {
        let l = z.count_ones() as usize;
        let w = outcome_weight(eps, n, l);
        if w.is_zero() {
            continue;
        }
        let local = if l == 1 { &quarter } else { &three_quarter };
        let parts: Vec<Vec<PartitionElement>> = (0..n)
            .map(|i| if z >> (n - 1 - i) & 1 == 1 { local.clone() } else { pr.clone() })
            .collect();
        let sub = product_of(&parts, marginal.clone())?;
        elements.extend(sub.elements.into_iter().map(|mut e| {
            e.weight *= &w;
            e
        }));
    }
    Ok(BoxPartition { marginal, elements })
}

/// Fraction of the bits Eve learns with certainty: 1/n for the smallest n
/// whose threshold 3/(8n+4) is at most ε.
pub fn known_fraction(eps: &Rational) -> Result<Rational> {
    if *eps < Rational::zero() || *eps > frac(1, 4) {
        return Err(domain(format!("epsilon {eps} is outside [0, 1/4]")));
    }
    if eps.is_zero() {
        return Ok(Rational::zero());
    }
    // 3/(8n+4) ≤ ε  ⇔  n ≥ (3/ε − 4)/8
    let bound = (int(3) / eps - int(4)) / int(8);
    let n = bound.ceil().to_integer();
    let n = if n < num_bigint::BigInt::one() { num_bigint::BigInt::one() } else { n };
    Ok(Rational::new(num_bigint::BigInt::one(), n))
}
