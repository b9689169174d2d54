mod common;

use num_traits::Zero;
use proptest::prelude::*;

use nskd_core::boxcore::{make_isotropic_box, make_quantum_box, tensor_boxes};
use nskd_core::lpcert::{
    build_xor_primal, certified_xor_bound, factored_certificate, reference_certificate, solve_lp,
    subset_product_sum, tensor_certificate, verify_certificate, TensorProgram,
};
use nskd_core::scalar::{frac, int};
use nskd_core::{DualCertificate, LinearProgram, Rational};

#[test]
fn single_box_optimum_is_four_epsilon() {
    for eps in [frac(0, 1), frac(1, 20), frac(1, 10), frac(1, 5), frac(1, 4)] {
        let b = make_isotropic_box(eps.clone()).unwrap();
        let sol = solve_lp(&build_xor_primal(&b, &[0], &[0]).unwrap()).unwrap();
        assert_eq!(sol.value, int(4) * &eps);
    }
}

#[test]
fn tensor_form_has_the_same_optimum() {
    let iso = make_isotropic_box(frac(1, 10)).unwrap();
    let marginal = tensor_boxes(&[iso.clone(), iso]).unwrap();
    let direct = solve_lp(&build_xor_primal(&marginal, &[0, 0], &[0, 0]).unwrap()).unwrap();
    let tensor = TensorProgram::new(&marginal, &[(0, 0), (0, 0)]).unwrap().materialize();
    let via_tensor = solve_lp(&tensor).unwrap();
    assert_eq!(direct.value, frac(4, 25));
    assert_eq!(via_tensor.value, direct.value);
    assert!(verify_certificate(&tensor, &via_tensor.certificate).unwrap());
}

#[test]
fn solver_certificate_verifies() {
    let b = make_quantum_box(frac(1, 20), frac(1, 10)).unwrap();
    let lp = build_xor_primal(&b, &[1], &[0]).unwrap();
    let sol = solve_lp(&lp).unwrap();
    assert!(verify_certificate(&lp, &sol.certificate).unwrap());
    assert_eq!(lp.first_violated_row(&sol.delta).unwrap(), None);
    assert_eq!(lp.evaluate(&sol.delta).unwrap(), sol.value);
}

#[test]
fn factored_certificate_for_five_pairs() {
    let boxes: Vec<_> = (1..=5).map(|k| make_isotropic_box(frac(k, 25)).unwrap()).collect();
    let cert = factored_certificate(&[(0, 0); 5], &boxes).unwrap();
    assert!(cert.verify(&boxes).unwrap());
    let errs: Vec<Rational> = (1..=5).map(|k| frac(k, 25)).collect();
    assert_eq!(cert.claimed_bound, int(2) * certified_xor_bound(&errs).unwrap());
}

#[test]
fn program_and_certificate_json_round_trip() {
    let b = make_isotropic_box(frac(1, 10)).unwrap();
    let lp = build_xor_primal(&b, &[0], &[1]).unwrap();
    assert_eq!(LinearProgram::from_json(&lp.to_json()).unwrap(), lp);
    let cert = reference_certificate(0, 1, &b).unwrap();
    assert_eq!(DualCertificate::from_json(&cert.to_json()).unwrap(), cert);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weak_duality(b in common::ns_box(), u in 0u8..2, v in 0u8..2) {
        let lp = build_xor_primal(&b, &[u], &[v]).unwrap();
        let sol = solve_lp(&lp).unwrap();
        let cert = reference_certificate(u, v, &b).unwrap();
        prop_assert!(verify_certificate(&lp, &cert).unwrap());
        prop_assert!(sol.value <= cert.claimed_bound);
        prop_assert!(sol.value >= Rational::zero());
    }

    #[test]
    fn tensor_certificates_verify(
        a in common::ns_box(),
        b in common::ns_box(),
        inputs in prop::array::uniform2((0u8..2, 0u8..2)),
    ) {
        let marginal = tensor_boxes(&[a, b]).unwrap();
        let cert = tensor_certificate(&inputs, &marginal).unwrap();
        let lp = TensorProgram::new(&marginal, &inputs).unwrap();
        prop_assert!(verify_certificate(&lp, &cert).unwrap());
    }

    #[test]
    fn averaging(errs in prop::collection::vec(common::error_value(), 1..=8)) {
        let n = errs.len();
        let mean = errs.iter().sum::<Rational>() / int(n as i64);
        let flat = vec![mean; n];
        prop_assert!(subset_product_sum(&errs) <= subset_product_sum(&flat));
    }
}
