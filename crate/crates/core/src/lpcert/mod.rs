//! Exact linear programs bounding how far a parity of Alice's outputs can
//! be from uniform given Eve's information, and dual certificates for them.

pub mod bound;
pub mod certificate;
pub mod program;
pub mod reference;
pub mod simplex;

use num_traits::Zero;

pub use bound::{
    certified_box_bound, certified_mixture_bound, certified_xor_bound, delta_to_element,
    element_partition, element_to_delta, subset_product_sum,
};
pub use certificate::{
    check_certificate, factored_certificate, reference_certificate, tensor_certificate,
    verify_certificate, CertificateCheck, DualCertificate, FactoredCertificate, MAX_DENSE_PAIRS,
};
pub use program::{build_xor_primal, Constraint, ConstraintSystem, LinearProgram, TensorProgram};
pub use reference::{reference_single_box, ReferenceData, CELL_LABELS};

use crate::error::Result;
use crate::scalar::Rational;
use simplex::{minimize, StandardForm};

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rational,
    /// Optimal primal point; satisfies every row exactly.
    pub delta: Vec<Rational>,
    /// Optimal dual point, itself a certificate for `value`.
    pub certificate: DualCertificate,
    pub pivots: usize,
}

/// Solves `max bᵀΔ s.t. AΔ ≤ c` exactly by running the simplex method on the
/// dual `min cᵀλ s.t. Aᵀλ = b, λ ≥ 0` and reading Δ off the dual prices.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); lp.vars];
    for (r, c) in lp.rows.iter().enumerate() {
        for (j, a) in &c.coeffs {
            rows[*j].push((r, a.clone()));
        }
    }
    let sf = StandardForm {
        cols: lp.rows.len(),
        rows,
        rhs: lp.objective_dense(),
        cost: lp.rows.iter().map(|c| c.rhs.clone()).collect(),
    };
    let sol = minimize(&sf)?;
    debug_assert!(sol.x.iter().all(|l| *l >= Rational::zero()));
    Ok(LpSolution {
        certificate: DualCertificate { lambda: sol.x, claimed_bound: sol.value.clone() },
        value: sol.value,
        delta: sol.duals,
        pivots: sol.pivots,
    })
}
