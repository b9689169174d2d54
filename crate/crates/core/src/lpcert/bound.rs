//! Closed-form bounds implied by the product certificates, and the map
//! between primal points Δ and two-outcome partitions.

use num_traits::{One, Zero};

use crate::boxcore::nonsignaling::{signaling_violation, Interface};
use crate::boxcore::{all_violating_mass, depolarize, check_interfaces, ConditionalBox};
use crate::error::{dim, domain, precondition, Result};
use crate::partition::{BoxPartition, PartitionElement};
use crate::scalar::{frac, int, Rational};

fn check_error(e: &Rational) -> Result<()> {
    if *e < Rational::zero() || *e > frac(1, 4) {
        return Err(domain(format!("error {e} is outside [0, 1/4]")));
    }
    Ok(())
}

/// ½·Π(4εᵢ): the distance of ⊕X from uniform for independent pairs with
/// CHSH errors εᵢ.
pub fn certified_xor_bound(errors: &[Rational]) -> Result<Rational> {
    if errors.is_empty() {
        return Err(dim("no pairs"));
    }
    let mut acc = frac(1, 2);
    for e in errors {
        check_error(e)?;
        acc *= int(4) * e;
    }
    Ok(acc)
}

/// Σⱼ pⱼ·½·Π(4εᵢʲ) for a marginal that is a mixture of products.
pub fn certified_mixture_bound(components: &[(Rational, Vec<Rational>)]) -> Result<Rational> {
    let mut total = Rational::zero();
    let mut weight = Rational::zero();
    for (w, errs) in components {
        if *w < Rational::zero() {
            return Err(domain(format!("mixture weight {w} is negative")));
        }
        weight += w;
        total += w * certified_xor_bound(errs)?;
    }
    if !weight.is_one() {
        return Err(domain(format!("mixture weights sum to {weight}")));
    }
    Ok(total)
}

/// Bound for an arbitrary, possibly correlated, box: depolarize it, then
/// take half the mass on cells where every pair violates CHSH.
pub fn certified_box_bound(b: &ConditionalBox) -> Result<Rational> {
    if !check_interfaces(b, 0.0).pass {
        return Err(precondition("box is not a valid non-signaling box"));
    }
    Ok(all_violating_mass(&depolarize(b)) / int(2))
}

/// Σ over subsets K of Π_{i∈K} εᵢ, which equals Π(1 + εᵢ).
pub fn subset_product_sum(errors: &[Rational]) -> Rational {
    errors.iter().fold(Rational::one(), |a, e| a * (Rational::one() + e))
}

/// Weight p and box P^{Z=0} of the partition outcome encoded by Δ.
pub fn delta_to_element(marginal: &ConditionalBox, delta: &[Rational]) -> Result<(Rational, ConditionalBox)> {
    let n = marginal.n_pairs();
    if delta.len() != marginal.probs().len() {
        return Err(dim(format!("{} entries for {} cells", delta.len(), marginal.probs().len())));
    }
    for (j, (d, p)) in delta.iter().zip(marginal.probs()).enumerate() {
        if d > p || -d > *p {
            return Err(precondition(format!("|delta[{j}]| exceeds the marginal")));
        }
    }
    let dbox = ConditionalBox::new(n, delta.to_vec())?;
    for s in Interface::all(n) {
        if !signaling_violation(&dbox, &[s]).is_zero() {
            return Err(precondition(format!("delta signals at interface {s}")));
        }
    }
    let p = (Rational::one() + dbox.input_total(0)) / int(2);
    if p.is_zero() {
        return Err(precondition("delta = -P gives an outcome of weight zero"));
    }
    let twice = int(2) * &p;
    let p0 = ConditionalBox::from_fn(n, |j| (&delta[j] + marginal.get(j)) / &twice)?;
    Ok((p, p0))
}

/// Δ = 2p·P^{Z=0} − P.
pub fn element_to_delta(marginal: &ConditionalBox, p: &Rational, p0: &ConditionalBox) -> Result<Vec<Rational>> {
    if p0.n_pairs() != marginal.n_pairs() {
        return Err(dim("element and marginal differ in size"));
    }
    if *p < Rational::zero() || *p > Rational::one() {
        return Err(domain(format!("weight {p} is outside [0, 1]")));
    }
    if !check_interfaces(p0, 0.0).pass {
        return Err(precondition("element is not a valid non-signaling box"));
    }
    if let Some(j) = (0..p0.probs().len()).find(|&j| p * p0.get(j) > *marginal.get(j)) {
        return Err(precondition(format!("p·P^(Z=0) exceeds the marginal at cell {j}")));
    }
    Ok((0..p0.probs().len())
        .map(|j| int(2) * p * p0.get(j) - marginal.get(j))
        .collect())
}

/// Two-outcome partition {(p, P^{Z=0}), (1−p, P^{Z=1})} of `marginal`.
pub fn element_partition(marginal: &ConditionalBox, p: &Rational, p0: &ConditionalBox) -> Result<BoxPartition> {
    element_to_delta(marginal, p, p0)?;
    let mut elements = vec![PartitionElement { weight: p.clone(), label: "z=0".into(), cbox: p0.clone() }];
    let rest = Rational::one() - p;
    if !rest.is_zero() {
        let p1 = ConditionalBox::from_fn(marginal.n_pairs(), |j| (marginal.get(j) - p * p0.get(j)) / &rest)?;
        elements.push(PartitionElement { weight: rest, label: "z=1".into(), cbox: p1 });
    }
    Ok(BoxPartition { marginal: marginal.clone(), elements })
}
