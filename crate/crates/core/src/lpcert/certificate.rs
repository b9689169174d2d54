//! Dual certificates: weak duality turns any λ ≥ 0 with Aᵀλ = b into an
//! upper bound cᵀλ on the primal optimum.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::program::{ConstraintSystem, TensorProgram, SINGLE_ROWS};
use super::reference::reference_single_box;
use crate::boxcore::layout::nibble;
use crate::boxcore::ConditionalBox;
use crate::error::{dim, Error, Result};
use crate::scalar::{serde_rational, Rational};

/// Largest tensor power for which certificates are stored densely.
pub const MAX_DENSE_PAIRS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(with = "serde_rational::vec")]
    pub lambda: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub claimed_bound: Rational,
}

impl DualCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate file: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateCheck {
    pub nonnegative: bool,
    /// Aᵀλ = b.
    pub feasible: bool,
    pub computed_bound: Rational,
    pub bound_matches: bool,
    pub first_failure: Option<String>,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.feasible && self.bound_matches
    }
}

pub fn check_certificate<S: ConstraintSystem + ?Sized>(lp: &S, cert: &DualCertificate) -> Result<CertificateCheck> {
    if cert.lambda.len() != lp.row_count() {
        return Err(dim(format!(
            "certificate has {} entries for {} rows",
            cert.lambda.len(),
            lp.row_count()
        )));
    }
    let mut failure = None;
    let negative = cert.lambda.iter().position(|l| *l < Rational::zero());
    if let Some(r) = negative {
        failure = Some(format!("lambda[{r}] is negative"));
    }
    let mut aty = vec![Rational::zero(); lp.vars()];
    let mut bound = Rational::zero();
    let lambda = &cert.lambda;
    let skip = |r: usize| lambda[r].is_zero();
    lp.visit_rows(Some(&skip), &mut |r, coeffs, rhs| {
        let l = &lambda[r];
        if l.is_zero() {
            return;
        }
        for (j, a) in coeffs {
            aty[*j] += a * l;
        }
        bound += rhs * l;
    });
    let b = lp.objective_dense();
    let infeasible = (0..lp.vars()).find(|&j| aty[j] != b[j]);
    if let (None, Some(j)) = (&failure, infeasible) {
        failure = Some(format!("(A^T lambda)[{j}] differs from the objective"));
    }
    let bound_matches = bound == cert.claimed_bound;
    if failure.is_none() && !bound_matches {
        failure = Some("c^T lambda differs from the claimed bound".to_string());
    }
    Ok(CertificateCheck {
        nonnegative: negative.is_none(),
        feasible: infeasible.is_none(),
        computed_bound: bound,
        bound_matches,
        first_failure: failure,
    })
}

/// True iff λ ≥ 0, Aᵀλ = b and cᵀλ equals the claimed bound, all exactly.
pub fn verify_certificate<S: ConstraintSystem + ?Sized>(lp: &S, cert: &DualCertificate) -> Result<bool> {
    Ok(check_certificate(lp, cert)?.passed())
}

/// Published dual solution for one pair, with its bound against `marginal`.
pub fn reference_certificate(u: u8, v: u8, marginal: &ConditionalBox) -> Result<DualCertificate> {
    tensor_certificate(&[(u, v)], marginal)
}

fn pair_weights(lambdas: &[Vec<Rational>], cell: &[usize]) -> Rational {
    lambdas
        .iter()
        .zip(cell)
        .map(|(l, &c)| &l[16 + c] + &l[32 + c])
        .fold(Rational::one(), |a, b| a * b)
}

/// λ = ⊗ λ_i over the published per-pair duals, against the tensor-form program
/// for `marginal` at the given per-pair inputs.
pub fn tensor_certificate(inputs: &[(u8, u8)], marginal: &ConditionalBox) -> Result<DualCertificate> {
    let n = inputs.len();
    if n == 0 || n != marginal.n_pairs() {
        return Err(dim(format!("{n} input pairs for a {}-pair marginal", marginal.n_pairs())));
    }
    if n > MAX_DENSE_PAIRS {
        return Err(dim(format!(
            "dense certificates stop at {MAX_DENSE_PAIRS} pairs; use factored_certificate"
        )));
    }
    let lambdas = inputs
        .iter()
        .map(|&(u, v)| Ok(reference_single_box(u, v)?.lambda))
        .collect::<Result<Vec<_>>>()?;
    let mut lambda = vec![Rational::one()];
    for l in &lambdas {
        let mut next = Vec::with_capacity(lambda.len() * SINGLE_ROWS);
        for a in &lambda {
            for b in l {
                next.push(a * b);
            }
        }
        lambda = next;
    }
    // Only rows made purely of cell bounds carry a nonzero rhs.
    let claimed = (0..marginal.probs().len())
        .map(|p| {
            let cells: Vec<usize> = (0..n).map(|i| nibble(p, n, i)).collect();
            marginal.get(p) * pair_weights(&lambdas, &cells)
        })
        .sum();
    Ok(DualCertificate { lambda, claimed_bound: claimed })
}

/// Per-pair duals for a product marginal; the tensor product of the factors
/// is the certificate. Verification is factor by factor, so any n works.
#[derive(Debug, Clone)]
pub struct FactoredCertificate {
    pub inputs: Vec<(u8, u8)>,
    pub factors: Vec<DualCertificate>,
    pub claimed_bound: Rational,
}

pub fn factored_certificate(inputs: &[(u8, u8)], boxes: &[ConditionalBox]) -> Result<FactoredCertificate> {
    if inputs.is_empty() || inputs.len() != boxes.len() {
        return Err(dim(format!("{} input pairs for {} boxes", inputs.len(), boxes.len())));
    }
    let factors = inputs
        .iter()
        .zip(boxes)
        .map(|(&(u, v), b)| reference_certificate(u, v, b))
        .collect::<Result<Vec<_>>>()?;
    let claimed_bound = factors.iter().fold(Rational::one(), |a, f| a * &f.claimed_bound);
    Ok(FactoredCertificate { inputs: inputs.to_vec(), factors, claimed_bound })
}

impl FactoredCertificate {
    /// Each factor is dual feasible for its own pair, and the claimed bound is their product.
    pub fn verify(&self, boxes: &[ConditionalBox]) -> Result<bool> {
        if boxes.len() != self.factors.len() {
            return Err(dim("factor count differs from box count"));
        }
        let mut product = Rational::one();
        for ((&(u, v), f), b) in self.inputs.iter().zip(&self.factors).zip(boxes) {
            let lp = TensorProgram::new(b, &[(u, v)])?;
            if !verify_certificate(&lp, f)? {
                return Ok(false);
            }
            product *= &f.claimed_bound;
        }
        Ok(product == self.claimed_bound)
    }
}
