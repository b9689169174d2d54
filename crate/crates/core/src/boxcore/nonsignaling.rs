//! Normalization, positivity and no-signaling checks.

use std::fmt;

use serde::Serialize;

use super::cbox::ConditionalBox;
use super::layout::{shift, submasks, U_BIT, V_BIT, X_BIT, Y_BIT};
use crate::scalar::Prob;

/// One party's end of one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interface {
    Alice(usize),
    Bob(usize),
}

impl Interface {
    fn bits(self, n_pairs: usize) -> (usize, usize) {
        match self {
            Interface::Alice(i) => (U_BIT << shift(n_pairs, i), X_BIT << shift(n_pairs, i)),
            Interface::Bob(i) => (V_BIT << shift(n_pairs, i), Y_BIT << shift(n_pairs, i)),
        }
    }

    pub fn all(n_pairs: usize) -> Vec<Interface> {
        (0..n_pairs)
            .map(Interface::Alice)
            .chain((0..n_pairs).map(Interface::Bob))
            .collect()
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interface::Alice(i) => write!(f, "A{i}"),
            Interface::Bob(i) => write!(f, "B{i}"),
        }
    }
}

/// Largest change in the distribution of everything outside `set` when the
/// inputs at `set` change, after summing out the outputs at `set`.
pub fn signaling_violation<T: Prob>(b: &ConditionalBox<T>, set: &[Interface]) -> T {
    let n = b.n_pairs();
    let (mut ins, mut outs) = (0usize, 0usize);
    for &s in set {
        let (i, o) = s.bits(n);
        ins |= i;
        outs |= o;
    }
    let mut marg = vec![T::zero(); b.probs().len()];
    for (p, w) in b.probs().iter().enumerate() {
        let q = p & !outs;
        marg[q] = marg[q].clone() + w.clone();
    }
    let patterns = submasks(ins);
    let mut worst = T::zero();
    for q in 0..marg.len() {
        if q & (ins | outs) != 0 {
            continue;
        }
        for &s in &patterns[1..] {
            let d = (marg[q | s].clone() - marg[q].clone()).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct NonSignalingReport {
    pub pass: bool,
    pub normalized: bool,
    pub nonnegative: bool,
    /// Largest single-interface violation.
    pub worst_violation: f64,
    pub violating_interface: Option<String>,
    /// Every subset of interfaces passes as well. Only evaluated up to three pairs.
    pub subset_conditions_hold: Option<bool>,
}

/// Checks normalization, positivity, and the one-interface conditions for
/// every pair and party. `tol == 0` demands exact equality for rational boxes.
pub fn validate_nonsignaling<T: Prob>(b: &ConditionalBox<T>, tol: f64) -> NonSignalingReport {
    let mut r = check_interfaces(b, tol);
    let n = b.n_pairs();
    r.subset_conditions_hold = (n <= 3).then(|| {
        let all = Interface::all(n);
        (1usize..(1 << all.len())).all(|m| {
            let set: Vec<_> = (0..all.len()).filter(|k| m >> k & 1 == 1).map(|k| all[k]).collect();
            signaling_violation(b, &set).within(tol)
        })
    });
    r
}

/// [`validate_nonsignaling`] without the subset conditions.
pub fn check_interfaces<T: Prob>(b: &ConditionalBox<T>, tol: f64) -> NonSignalingReport {
    let n = b.n_pairs();
    let normalized = b.normalization_defect().within(tol);
    let nonnegative = b.min_entry() >= T::zero() || b.min_entry().within(tol);

    let mut worst = T::zero();
    let mut violating = None;
    for s in Interface::all(n) {
        let d = signaling_violation(b, &[s]);
        if !d.within(tol) && violating.is_none() {
            violating = Some(s.to_string());
        }
        if d > worst {
            worst = d;
        }
    }

    NonSignalingReport {
        pass: normalized && nonnegative && violating.is_none(),
        normalized,
        nonnegative,
        worst_violation: worst.to_f64(),
        violating_interface: violating,
        subset_conditions_hold: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcore::make::{make_isotropic_box, make_pr_box, tensor_boxes};
    use crate::scalar::{frac, Rational};

    /// Bob's output copies Alice's input: normalized but signaling.
    fn signaling_box() -> ConditionalBox<Rational> {
        ConditionalBox::from_fn(1, |c| {
            let (u, y) = ((c >> 3) & 1, c & 1);
            if y == u {
                frac(1, 2)
            } else {
                frac(0, 1)
            }
        })
        .unwrap()
    }

    #[test]
    fn pr_box_passes() {
        let r = validate_nonsignaling(&make_pr_box::<Rational>(), 0.0);
        assert!(r.pass);
        assert_eq!(r.worst_violation, 0.0);
        assert_eq!(r.subset_conditions_hold, Some(true));
    }

    #[test]
    fn detects_signaling() {
        let r = validate_nonsignaling(&signaling_box(), 0.0);
        assert!(r.normalized);
        assert!(!r.pass);
        assert_eq!(r.violating_interface.as_deref(), Some("A0"));
        assert_eq!(r.worst_violation, 1.0);
    }

    #[test]
    fn detects_bad_normalization() {
        let mut p = make_pr_box::<Rational>().into_probs();
        p[0] = frac(1, 3);
        let r = validate_nonsignaling(&ConditionalBox::new(1, p).unwrap(), 0.0);
        assert!(!r.normalized);
        assert!(!r.pass);
    }

    #[test]
    fn products_pass_all_subsets() {
        let b = make_isotropic_box(frac(1, 7)).unwrap();
        let t = tensor_boxes(&[b.clone(), b.clone(), b]).unwrap();
        let r = validate_nonsignaling(&t, 0.0);
        assert!(r.pass);
        assert_eq!(r.subset_conditions_hold, Some(true));
    }

    #[test]
    fn float_tolerance() {
        let mut b = make_pr_box::<f64>().into_probs();
        b[0] += 1e-12;
        b[1] -= 1e-12;
        let b = ConditionalBox::new(1, b).unwrap();
        assert!(validate_nonsignaling(&b, 1e-9).pass);
        assert!(!validate_nonsignaling(&b, 1e-14).pass);
    }
}
