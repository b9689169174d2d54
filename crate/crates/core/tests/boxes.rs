mod common;

use num_traits::Zero;
use proptest::prelude::*;

use nskd_core::boxcore::layout::{canonical_index, cell_count, decode};
use nskd_core::boxcore::{
    chsh_error, depolarize, is_local, make_isotropic_box, make_pr_box, make_quantum_box,
    make_singlet_box, tensor_boxes, validate_nonsignaling,
};
use nskd_core::scalar::frac;
use nskd_core::{AnyBox, Rational};

#[test]
fn isotropic_locality_grid() {
    for k in 0..=10 {
        let eps = frac(k, 20);
        let b = make_isotropic_box(eps.clone()).unwrap();
        assert_eq!(is_local(&b, 0.0).unwrap(), eps >= frac(1, 4), "eps = {eps}");
    }
}

#[test]
fn index_round_trip() {
    for n in 1..=3 {
        for p in 0..cell_count(n) {
            let c = decode(p, n);
            assert_eq!(canonical_index(&c.x, &c.y, &c.u, &c.v).unwrap(), p);
        }
    }
}

#[test]
fn pr_box_json_round_trip() {
    let b = AnyBox::Rational(make_pr_box());
    let back = AnyBox::from_json(&b.to_json()).unwrap();
    assert_eq!(back.to_rational(), make_pr_box::<Rational>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructors_are_valid(eps in common::error_value(), d in 0i64..=50, noise in 0i64..=75) {
        let iso = make_isotropic_box(eps).unwrap();
        prop_assert!(validate_nonsignaling(&iso, 0.0).pass);
        let q = make_quantum_box(frac(d, 100), frac(noise, 100)).unwrap();
        prop_assert!(validate_nonsignaling(&q, 0.0).pass);
    }

    #[test]
    fn singlet_boxes_are_valid(angles in prop::array::uniform4(0.0f64..360.0)) {
        let b = make_singlet_box(angles);
        prop_assert!(validate_nonsignaling(&b, 1e-9).pass);
    }

    #[test]
    fn depolarize_keeps_chsh_error(b in common::ns_box()) {
        prop_assert_eq!(chsh_error(&depolarize(&b)).unwrap(), chsh_error(&b).unwrap());
    }

    #[test]
    fn tensor_powers_keep_validity(b in prop_oneof![common::ns_box(), common::any_distribution_box()]) {
        let single = validate_nonsignaling(&b, 0.0).pass;
        let two = tensor_boxes(&[b.clone(), b.clone()]).unwrap();
        let r2 = validate_nonsignaling(&two, 0.0);
        prop_assert_eq!(r2.pass, single);
        if single {
            prop_assert_eq!(r2.subset_conditions_hold, Some(true));
        }
    }

    #[test]
    fn mixtures_stay_valid(a in common::ns_box(), b in common::ns_box(), w in 0i64..=10) {
        let m = a.mix(&b, &frac(w, 10)).unwrap();
        prop_assert!(validate_nonsignaling(&m, 0.0).pass);
        prop_assert!(m.min_entry() >= Rational::zero());
    }
}

#[test]
fn third_tensor_power_keeps_validity() {
    let b = make_quantum_box(frac(1, 10), frac(1, 20)).unwrap();
    let three = tensor_boxes(&[b.clone(), b.clone(), b]).unwrap();
    let r = validate_nonsignaling(&three, 0.0);
    assert!(r.pass);
    assert_eq!(r.subset_conditions_hold, Some(true));
}
