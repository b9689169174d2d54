//! Exact two-phase primal simplex over sparse rational rows, Bland's rule.
//!
//! Solves `min cᵀx  s.t.  A x = b, x ≥ 0`. Each row owns an artificial
//! column that stays in the tableau so that its reduced cost yields the
//! row's dual value at the end. Rows that already contain a unit column
//! start with that column basic and need no phase-1 work.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

type SparseRow = Vec<(usize, Rational)>;

/// Equality-form program. Rows are sparse `(column, coefficient)` lists.
#[derive(Debug, Clone, Default)]
pub struct StandardForm {
    pub cols: usize,
    pub rows: Vec<SparseRow>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct StandardSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// y with `Aᵀy ≤ c` and `bᵀy = value`.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

struct Tableau {
    real: usize,
    rows: Vec<SparseRow>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    value: Rational,
    pivots: usize,
}

fn lookup(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// `a − f·b` for sorted sparse rows.
fn axpy(a: &SparseRow, f: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(usize::MAX, |e| e.0);
        let kb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Tableau {
    fn is_artificial(&self, col: usize) -> bool {
        col >= self.real
    }

    fn set_costs(&mut self, cost: impl Fn(usize) -> Rational) {
        let total = self.real + self.rows.len();
        self.reduced = (0..total).map(&cost).collect();
        self.value = Rational::zero();
        for i in 0..self.rows.len() {
            let cb = cost(self.basis[i]);
            if cb.is_zero() {
                continue;
            }
            for (j, a) in &self.rows[i] {
                self.reduced[*j] -= &cb * a;
            }
            self.value += &cb * &self.rhs[i];
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = lookup(&self.rows[r], e).expect("pivot entry").clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for entry in self.rows[r].iter_mut() {
                entry.1 *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let Some(f) = lookup(&self.rows[i], e).cloned() else {
                continue;
            };
            self.rows[i] = axpy(&self.rows[i], &f, &prow);
            self.rhs[i] -= &f * &prhs;
        }
        let d = self.reduced[e].clone();
        if !d.is_zero() {
            for (j, a) in &prow {
                self.reduced[*j] -= &d * a;
            }
            self.value += &d * &prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Runs Bland's rule to optimality. Artificial columns never enter.
    fn optimize(&mut self) -> Result<()> {
        loop {
            let Some(e) = (0..self.real).find(|&j| self.reduced[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let Some(a) = lookup(&self.rows[i], e) else {
                    continue;
                };
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*k]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(Error::Solver("objective is unbounded".into()));
            };
            self.pivot(r, e);
        }
    }
}

pub fn minimize(sf: &StandardForm) -> Result<StandardSolution> {
    let m = sf.rows.len();
    if sf.rhs.len() != m || sf.cost.len() != sf.cols {
        return Err(Error::Dimension(format!(
            "{} rows, {} rhs entries, {} columns, {} costs",
            m,
            sf.rhs.len(),
            sf.cols,
            sf.cost.len()
        )));
    }
    let real = sf.cols;
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut col_count = vec![0usize; real];
    for (i, row) in sf.rows.iter().enumerate() {
        let flip = sf.rhs[i].is_negative();
        signs.push(flip);
        let mut r: SparseRow = row
            .iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| (*j, if flip { -a.clone() } else { a.clone() }))
            .collect();
        r.sort_by_key(|e| e.0);
        if r.windows(2).any(|w| w[0].0 == w[1].0) || r.last().is_some_and(|e| e.0 >= real) {
            return Err(Error::Dimension(format!("row {i} has repeated or out-of-range columns")));
        }
        for (j, _) in &r {
            col_count[*j] += 1;
        }
        r.push((real + i, Rational::one()));
        rows.push(r);
        rhs.push(sf.rhs[i].abs());
    }

    let mut basis: Vec<usize> = (0..m).map(|i| real + i).collect();
    let mut taken = vec![false; real];
    for i in 0..m {
        if let Some((j, _)) = rows[i]
            .iter()
            .find(|(j, a)| *j < real && !taken[*j] && col_count[*j] == 1 && a.is_one())
        {
            basis[i] = *j;
            taken[*j] = true;
        }
    }

    let mut t = Tableau {
        real,
        rows,
        rhs,
        basis,
        reduced: Vec::new(),
        value: Rational::zero(),
        pivots: 0,
    };

    if t.basis.iter().any(|&b| t.is_artificial(b)) {
        t.set_costs(|j| if j >= real { Rational::one() } else { Rational::zero() });
        t.optimize()?;
        if t.value.is_positive() {
            return Err(Error::Solver("constraints are infeasible".into()));
        }
        for i in 0..m {
            if !t.is_artificial(t.basis[i]) {
                continue;
            }
            if let Some(&(j, _)) = t.rows[i].iter().find(|(j, _)| *j < real) {
                t.pivot(i, j);
            }
        }
    }

    t.set_costs(|j| if j < real { sf.cost[j].clone() } else { Rational::zero() });
    t.optimize()?;

    let mut x = vec![Rational::zero(); real];
    for i in 0..m {
        if t.basis[i] < real {
            x[t.basis[i]] = t.rhs[i].clone();
        }
    }
    let duals = (0..m)
        .map(|i| {
            let y = -t.reduced[real + i].clone();
            if signs[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    Ok(StandardSolution {
        value: t.value,
        x,
        duals,
        pivots: t.pivots,
    })
}
