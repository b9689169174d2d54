//! Primal programs `max bᵀΔ  s.t.  AΔ ≤ c` for the distance of a parity from uniform.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::boxcore::layout::{
    alice_parity, input_position, shift, submasks, U_BIT, V_BIT, X_BIT, Y_BIT,
};
use crate::boxcore::{check_interfaces, ConditionalBox};
use crate::error::{dim, precondition, Error, Result};
use crate::scalar::{format_rational, int, value_to_rational, Rational};

/// One inequality `Σ coeffs·Δ ≤ rhs`, coefficients sparse and sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub vars: usize,
    pub rows: Vec<Constraint>,
    /// Sparse `b`, sorted by column.
    pub objective: Vec<(usize, Rational)>,
}

/// Anything that can enumerate its rows. Lets large tensor programs be
/// checked without materializing them.
/// Receives `(row index, coefficients, rhs)`.
pub type RowVisitor<'a> = dyn FnMut(usize, &[(usize, Rational)], &Rational) + 'a;

pub trait ConstraintSystem {
    fn vars(&self) -> usize;
    fn row_count(&self) -> usize;
    fn objective_dense(&self) -> Vec<Rational>;
    /// Calls `f(row index, coefficients, rhs)` for every row in order. When
    /// `skip` is given, rows for which it returns true may be passed with
    /// empty coefficients.
    fn visit_rows(&self, skip: Option<&dyn Fn(usize) -> bool>, f: &mut RowVisitor);
}

impl ConstraintSystem for LinearProgram {
    fn vars(&self) -> usize {
        self.vars
    }
    fn row_count(&self) -> usize {
        self.rows.len()
    }
    fn objective_dense(&self) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); self.vars];
        for (j, v) in &self.objective {
            b[*j] = v.clone();
        }
        b
    }
    fn visit_rows(&self, _skip: Option<&dyn Fn(usize) -> bool>, f: &mut RowVisitor) {
        for (i, r) in self.rows.iter().enumerate() {
            f(i, &r.coeffs, &r.rhs);
        }
    }
}

impl LinearProgram {
    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.coeffs.iter().any(|(j, _)| *j >= self.vars) {
                return Err(dim(format!("row {i} references a column beyond {}", self.vars)));
            }
            if r.coeffs.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(dim(format!("row {i} columns are not strictly increasing")));
            }
        }
        if self.objective.iter().any(|(j, _)| *j >= self.vars) {
            return Err(dim("objective references a missing column"));
        }
        Ok(())
    }

    pub fn evaluate(&self, delta: &[Rational]) -> Result<Rational> {
        if delta.len() != self.vars {
            return Err(dim(format!("{} values for {} variables", delta.len(), self.vars)));
        }
        Ok(self.objective.iter().map(|(j, b)| b * &delta[*j]).sum())
    }

    /// Index of the first row violated by `delta`, if any.
    pub fn first_violated_row(&self, delta: &[Rational]) -> Result<Option<usize>> {
        if delta.len() != self.vars {
            return Err(dim(format!("{} values for {} variables", delta.len(), self.vars)));
        }
        Ok(self.rows.iter().position(|r| {
            let lhs: Rational = r.coeffs.iter().map(|(j, a)| a * &delta[*j]).sum();
            lhs > r.rhs
        }))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&LpFile::from(self)).expect("lp serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: LpFile = serde_json::from_str(s).map_err(|e| Error::Parse(format!("lp file: {e}")))?;
        f.try_into()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct LpRowFile {
    coeffs: BTreeMap<usize, serde_json::Value>,
    rhs: serde_json::Value,
}

#[derive(Debug, Serialize, Deserialize)]
struct LpFile {
    vars: usize,
    rows: Vec<LpRowFile>,
    objective: BTreeMap<usize, serde_json::Value>,
}

fn sparse_to_file(v: &[(usize, Rational)]) -> BTreeMap<usize, serde_json::Value> {
    v.iter()
        .map(|(j, a)| (*j, serde_json::Value::String(format_rational(a))))
        .collect()
}

fn sparse_from_file(m: &BTreeMap<usize, serde_json::Value>) -> Result<Vec<(usize, Rational)>> {
    m.iter()
        .map(|(j, a)| Ok((*j, value_to_rational(a)?)))
        .filter(|r| !matches!(r, Ok((_, a)) if a.is_zero()))
        .collect()
}

impl From<&LinearProgram> for LpFile {
    fn from(lp: &LinearProgram) -> Self {
        LpFile {
            vars: lp.vars,
            rows: lp
                .rows
                .iter()
                .map(|r| LpRowFile {
                    coeffs: sparse_to_file(&r.coeffs),
                    rhs: serde_json::Value::String(format_rational(&r.rhs)),
                })
                .collect(),
            objective: sparse_to_file(&lp.objective),
        }
    }
}

impl TryFrom<LpFile> for LinearProgram {
    type Error = Error;
    fn try_from(f: LpFile) -> Result<Self> {
        let lp = LinearProgram {
            vars: f.vars,
            rows: f
                .rows
                .iter()
                .map(|r| {
                    Ok(Constraint {
                        coeffs: sparse_from_file(&r.coeffs)?,
                        rhs: value_to_rational(&r.rhs)?,
                    })
                })
                .collect::<Result<_>>()?,
            objective: sparse_from_file(&f.objective)?,
        };
        lp.validate()?;
        Ok(lp)
    }
}

/// No-signaling equalities for `n_pairs` pairs: first every Bob interface,
/// then every Alice interface, pairs in order. Each row compares the two
/// inputs of one interface after summing its output.
pub fn nonsignaling_rows(n_pairs: usize) -> Vec<Vec<(usize, Rational)>> {
    let size = 1usize << (4 * n_pairs);
    let mut rows = Vec::new();
    for (in_bit, out_bit) in [(V_BIT, Y_BIT), (U_BIT, X_BIT)] {
        for pair in 0..n_pairs {
            let s = shift(n_pairs, pair);
            let (i, o) = (in_bit << s, out_bit << s);
            for q in (0..size).filter(|q| q & (i | o) == 0) {
                let mut r = vec![(q, int(1)), (q | o, int(1)), (q | i, int(-1)), (q | i | o, int(-1))];
                r.sort_by_key(|e| e.0);
                rows.push(r);
            }
        }
    }
    rows
}

/// `Σ_{x: ⊕x = 0} Δ(·|u,v) − Σ_{x: ⊕x = 1} Δ(·|u,v)` as a sparse vector.
pub fn xor_objective(n_pairs: usize, u: &[u8], v: &[u8]) -> Result<Vec<(usize, Rational)>> {
    if u.len() != n_pairs || v.len() != n_pairs {
        return Err(dim(format!("inputs of length {}/{} for {n_pairs} pairs", u.len(), v.len())));
    }
    let base = input_position(u, v)?;
    let outs = crate::boxcore::layout::output_mask(n_pairs);
    Ok(submasks(outs)
        .into_iter()
        .map(|o| {
            let p = base | o;
            (p, if alice_parity(p, n_pairs) == 0 { int(1) } else { int(-1) })
        })
        .collect())
}

fn require_valid(marginal: &ConditionalBox) -> Result<()> {
    let r = check_interfaces(marginal, 0.0);
    if !r.pass {
        return Err(precondition(format!(
            "marginal is not a valid non-signaling box (normalized: {}, nonnegative: {}, signaling at {:?})",
            r.normalized, r.nonnegative, r.violating_interface
        )));
    }
    Ok(())
}

/// The program over 16^n variables whose optimum is twice the distance of
/// ⊕X from uniform given Eve's best binary partition, at inputs (u, v).
/// Rows: no-signaling equalities as ≤ and ≥ pairs, then Δ ≤ P, then −Δ ≤ P.
pub fn build_xor_primal(marginal: &ConditionalBox, u: &[u8], v: &[u8]) -> Result<LinearProgram> {
    require_valid(marginal)?;
    let n = marginal.n_pairs();
    let ns = nonsignaling_rows(n);
    let mut rows = Vec::with_capacity(2 * ns.len() + 2 * marginal.probs().len());
    for r in &ns {
        rows.push(Constraint { coeffs: r.clone(), rhs: Rational::zero() });
    }
    for r in &ns {
        rows.push(Constraint {
            coeffs: r.iter().map(|(j, a)| (*j, -a.clone())).collect(),
            rhs: Rational::zero(),
        });
    }
    for sign in [1, -1] {
        for (j, p) in marginal.probs().iter().enumerate() {
            rows.push(Constraint { coeffs: vec![(j, int(sign))], rhs: p.clone() });
        }
    }
    Ok(LinearProgram { vars: marginal.probs().len(), rows, objective: xor_objective(n, u, v)? })
}

/// Row count of the single-box program.
pub const SINGLE_ROWS: usize = 48;

/// Row `r` of the single-box constraint matrix as sparse coefficients.
pub fn single_row(r: usize) -> Vec<(usize, Rational)> {
    thread_local! {
        static NS: Vec<Vec<(usize, Rational)>> = nonsignaling_rows(1);
    }
    match r {
        0..=7 => NS.with(|ns| ns[r].clone()),
        8..=15 => NS.with(|ns| ns[r - 8].iter().map(|(j, a)| (*j, -a.clone())).collect()),
        16..=31 => vec![(r - 16, Rational::one())],
        _ => vec![(r - 32, -Rational::one())],
    }
}

/// Identity-type rows bound a single cell; their rhs is that cell's probability.
pub fn single_row_cell(r: usize) -> Option<usize> {
    match r {
        16..=31 => Some(r - 16),
        32..=47 => Some(r - 32),
        _ => None,
    }
}

/// Tensor-form program: rows are the n-fold tensor product of the
/// single-box rows in row-major order (redundant rows kept), objective the
/// product of per-box objectives, and rhs the marginal's probability of the
/// joint cell for all-identity rows and zero otherwise.
#[derive(Debug, Clone)]
pub struct TensorProgram {
    pub marginal: ConditionalBox,
    pub inputs: Vec<(u8, u8)>,
}

impl TensorProgram {
    pub fn new(marginal: &ConditionalBox, inputs: &[(u8, u8)]) -> Result<Self> {
        require_valid(marginal)?;
        if inputs.len() != marginal.n_pairs() {
            return Err(dim(format!(
                "{} input pairs for a {}-pair marginal",
                inputs.len(),
                marginal.n_pairs()
            )));
        }
        if inputs.iter().any(|&(u, v)| u > 1 || v > 1) {
            return Err(Error::Domain("inputs must be bits".into()));
        }
        Ok(Self { marginal: marginal.clone(), inputs: inputs.to_vec() })
    }

    pub fn n_pairs(&self) -> usize {
        self.inputs.len()
    }

    /// Per-factor row indices of tensor row `r`, first factor first.
    pub fn factor_rows(&self, mut r: usize) -> Vec<usize> {
        let n = self.n_pairs();
        let mut out = vec![0; n];
        for k in (0..n).rev() {
            out[k] = r % SINGLE_ROWS;
            r /= SINGLE_ROWS;
        }
        out
    }

    fn row(&self, factors: &[usize], singles: &[Vec<(usize, Rational)>]) -> (Vec<(usize, Rational)>, Rational) {
        let mut coeffs = vec![(0usize, Rational::one())];
        for &f in factors {
            let mut next = Vec::with_capacity(coeffs.len() * singles[f].len());
            for (p, a) in &coeffs {
                for (q, b) in &singles[f] {
                    next.push(((p << 4) | q, a * b));
                }
            }
            coeffs = next;
        }
        coeffs.sort_by_key(|e| e.0);
        let rhs = match factors.iter().map(|&f| single_row_cell(f)).collect::<Option<Vec<_>>>() {
            Some(cells) => {
                let p = cells.iter().fold(0usize, |acc, c| (acc << 4) | c);
                self.marginal.get(p).clone()
            }
            None => Rational::zero(),
        };
        (coeffs, rhs)
    }

    pub fn materialize(&self) -> LinearProgram {
        let singles: Vec<_> = (0..SINGLE_ROWS).map(single_row).collect();
        let rows = (0..self.row_count())
            .map(|r| {
                let (coeffs, rhs) = self.row(&self.factor_rows(r), &singles);
                Constraint { coeffs, rhs }
            })
            .collect();
        LinearProgram { vars: self.vars(), rows, objective: self.objective_sparse() }
    }

    fn objective_sparse(&self) -> Vec<(usize, Rational)> {
        let u: Vec<u8> = self.inputs.iter().map(|x| x.0).collect();
        let v: Vec<u8> = self.inputs.iter().map(|x| x.1).collect();
        xor_objective(self.n_pairs(), &u, &v).expect("lengths checked")
    }
}

impl ConstraintSystem for TensorProgram {
    fn vars(&self) -> usize {
        self.marginal.probs().len()
    }
    fn row_count(&self) -> usize {
        SINGLE_ROWS.pow(self.n_pairs() as u32)
    }
    fn objective_dense(&self) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); self.vars()];
        for (j, v) in self.objective_sparse() {
            b[j] = v;
        }
        b
    }
    fn visit_rows(&self, skip: Option<&dyn Fn(usize) -> bool>, f: &mut RowVisitor) {
        let singles: Vec<_> = (0..SINGLE_ROWS).map(single_row).collect();
        for r in 0..self.row_count() {
            if skip.is_some_and(|s| s(r)) {
                f(r, &[], &Rational::zero());
                continue;
            }
            let (coeffs, rhs) = self.row(&self.factor_rows(r), &singles);
            f(r, &coeffs, &rhs);
        }
    }
}
