//! Acceptance checks. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits nonzero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use nskd_core::boxcore::layout::{input_mask, nibble, output_mask, submasks, X_BIT, Y_BIT};
use nskd_core::boxcore::{
    all_violating_mass, chsh_error, chsh_errors_by_input, depolarize, deterministic_box,
    is_unbiased, make_isotropic_box, make_pr_box, make_quantum_box, make_singlet_box,
    tensor_boxes, validate_nonsignaling, ConditionalBox,
};
use nskd_core::lpcert::{
    build_xor_primal, check_certificate, ConstraintSystem, reference_certificate, reference_single_box, solve_lp,
    tensor_certificate, TensorProgram,
};
use nskd_core::partition::{
    collective_attack, collective_threshold, distance_from_uniform, local_weight, product_attack,
    single_box_attack, validate_partition, KeyMap,
};
use nskd_core::protocol::{
    estimate_parameters, key_distance_bound, key_rate, epsilon_max, run_protocol, sample_rounds,
    ProtocolConfig, IDEAL_ANGLES,
};
use nskd_core::scalar::{frac, int};
use nskd_core::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn ac1() -> Outcome {
    let start = Instant::now();
    for eps in [frac(1, 20), frac(1, 10), frac(1, 5), frac(1, 4)] {
        let iso = make_isotropic_box(eps.clone()).map_err(|e| e.to_string())?;
        let four = int(4) * &eps;
        let lp = build_xor_primal(&iso, &[0], &[0]).map_err(|e| e.to_string())?;
        let sol = solve_lp(&lp).map_err(|e| e.to_string())?;
        ensure(sol.value == four, || format!("eps {eps}: optimum {} != {four}", sol.value))?;

        let part = single_box_attack(&iso).map_err(|e| e.to_string())?;
        let report = validate_partition(&iso, &part, 0.0);
        ensure(report.valid, || format!("eps {eps}: partition invalid: {:?}", report.first_violation))?;
        let d = distance_from_uniform(&part, &KeyMap::Xor, &[0], &[0]).map_err(|e| e.to_string())?;
        ensure(d == int(2) * &eps, || format!("eps {eps}: distance {d} != 2*eps"))?;

        for (u, v) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let lp = build_xor_primal(&iso, &[u], &[v]).map_err(|e| e.to_string())?;
            let cert = reference_certificate(u, v, &iso).map_err(|e| e.to_string())?;
            let check = check_certificate(&lp, &cert).map_err(|e| e.to_string())?;
            ensure(check.passed() && cert.claimed_bound == four, || {
                format!("eps {eps}, inputs ({u},{v}): certificate {:?}, bound {}", check.first_failure, cert.claimed_bound)
            })?;
        }
    }
    let t = within_time(start, Duration::from_secs(1))?;
    Ok(format!("optimum 4ε, distance 2ε, certificates verify, {t:.2?}"))
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let eps = frac(1, 10);
    let iso = make_isotropic_box(eps).map_err(|e| e.to_string())?;
    let pair = vec![iso.clone(), iso];
    let marginal = tensor_boxes(&pair).map_err(|e| e.to_string())?;
    let lp = build_xor_primal(&marginal, &[0, 0], &[0, 0]).map_err(|e| e.to_string())?;
    let sol = solve_lp(&lp).map_err(|e| e.to_string())?;
    ensure(lp.vars == 256, || format!("{} variables", lp.vars))?;
    ensure(sol.value == frac(4, 25), || format!("optimum {}", sol.value))?;
    let cert = tensor_certificate(&[(0, 0), (0, 0)], &marginal).map_err(|e| e.to_string())?;
    ensure(cert.claimed_bound == sol.value, || format!("tensor bound {}", cert.claimed_bound))?;
    let tp = TensorProgram::new(&marginal, &[(0, 0), (0, 0)]).map_err(|e| e.to_string())?;
    let check = check_certificate(&tp, &cert).map_err(|e| e.to_string())?;
    ensure(check.passed(), || format!("tensor certificate: {:?}", check.first_failure))?;
    let part = product_attack(&pair).map_err(|e| e.to_string())?;
    let report = validate_partition(&marginal, &part, 0.0);
    ensure(report.valid, || format!("product partition invalid: {:?}", report.first_violation))?;
    let d = distance_from_uniform(&part, &KeyMap::Xor, &[0, 0], &[0, 0]).map_err(|e| e.to_string())?;
    ensure(d == frac(2, 25), || format!("product attack distance {d}"))?;
    let t = within_time(start, Duration::from_secs(60))?;
    Ok(format!("optimum {} = tensor bound, attack distance {}, {} pivots, {t:.2?}", sol.value, d, sol.pivots))
}

fn ac3() -> Outcome {
    let mut notes = Vec::new();
    let marginal = make_isotropic_box(frac(1, 10)).map_err(|e| e.to_string())?;
    for (u, v) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let data = reference_single_box(u, v).map_err(|e| e.to_string())?;
        let lp = build_xor_primal(&marginal, &[u], &[v]).map_err(|e| e.to_string())?;
        ensure(lp.objective_dense() == data.derived_b, || format!("({u},{v}): derived objective mismatch"))?;
        ensure(data.lambda.iter().all(|l| *l >= Rational::zero()), || format!("({u},{v}): negative lambda"))?;
        let mut aty = vec![Rational::zero(); 16];
        let mut ctl = Rational::zero();
        for (r, row) in lp.rows.iter().enumerate() {
            for (j, a) in &row.coeffs {
                aty[*j] += a * &data.lambda[r];
            }
            ctl += &row.rhs * &data.lambda[r];
        }
        ensure(aty == data.derived_b, || format!("({u},{v}): A^T lambda != b"))?;
        let violating: Rational = all_violating_mass(&marginal);
        ensure(ctl == violating, || format!("({u},{v}): c^T lambda = {ctl}, violating mass {violating}"))?;
        if !data.printed_matches_derived() {
            notes.push(format!("({u},{v}) printed b differs at {:?}", data.mismatches()));
        }
    }
    let detail = if notes.is_empty() { "printed b matches".to_string() } else { notes.join("; ") };
    Ok(format!("A^T λ = b, λ ≥ 0, c^T λ = violating mass at all inputs; {detail}"))
}

fn ac4() -> Outcome {
    let r0 = key_rate(3.0 / 16.0, 0.0).map_err(|e| e.to_string())?;
    let r1 = key_rate(0.2, 0.02).map_err(|e| e.to_string())?;
    let e0 = epsilon_max(0.0).map_err(|e| e.to_string())?;
    ensure((r0 - 0.192645).abs() <= 1e-5, || format!("key_rate(3/16, 0) = {r0}"))?;
    ensure((r1 - 0.010562).abs() <= 1e-5 && r1 > 0.0, || format!("key_rate(0.2, 0.02) = {r1}"))?;
    ensure((e0 - 0.25).abs() <= 1e-12, || format!("epsilon_max(0) = {e0}"))?;
    Ok(format!("rates {r0:.6}, {r1:.6}; epsilon_max(0) = {e0}"))
}

fn ac5() -> Outcome {
    let singlet = make_singlet_box(IDEAL_ANGLES);
    let quantum = make_quantum_box(0.0, 0.0).map_err(|e| e.to_string())?;
    let diff = singlet.max_difference(&quantum).map_err(|e| e.to_string())?;
    ensure(diff <= 1e-12, || format!("max cell difference {diff:e}"))?;
    let e = chsh_error(&singlet).map_err(|e| e.to_string())?;
    ensure((e - 3.0 / 16.0).abs() <= 1e-12, || format!("chsh_error = {e}"))?;
    let exact = chsh_error(&make_quantum_box(Rational::zero(), Rational::zero()).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(exact == frac(3, 16), || format!("exact chsh_error = {exact}"))?;
    Ok(format!("max difference {diff:.1e}, chsh_error 3/16"))
}

/// True iff pair `i` of `b` has a single possible output at every input.
fn pair_is_deterministic(b: &ConditionalBox, i: usize) -> bool {
    let n = b.n_pairs();
    let outs = submasks(output_mask(n));
    submasks(input_mask(n)).into_iter().all(|p| {
        let mut seen = outs.iter().map(|q| p | q).filter(|&c| !b.get(c).is_zero()).map(|c| nibble(c, n, i) & (X_BIT | Y_BIT));
        match seen.next() {
            Some(first) => seen.all(|o| o == first),
            None => true,
        }
    })
}

fn ac6() -> Outcome {
    let eps = frac(3, 20);
    let part = collective_attack(&eps, 2).map_err(|e| e.to_string())?;
    let iso = make_isotropic_box(eps.clone()).map_err(|e| e.to_string())?;
    let marginal = tensor_boxes(&[iso.clone(), iso]).map_err(|e| e.to_string())?;
    ensure(part.marginal == marginal, || "partition marginal is not the isotropic product".into())?;
    let report = validate_partition(&marginal, &part, 0.0);
    ensure(report.valid, || format!("partition invalid: {:?}", report.first_violation))?;
    let local: Rational = part
        .elements
        .iter()
        .filter(|e| (0..2).any(|i| pair_is_deterministic(&e.cbox, i)))
        .map(|e| e.weight.clone())
        .sum();
    ensure(local.is_one(), || format!("weight on outcomes with a local pair is {local}"))?;

    for n in 1..=3usize {
        let t = collective_threshold(n);
        ensure(t == frac(3, 8 * n as i64 + 4), || format!("n={n}: threshold {t}"))?;
        // Smallest ε with local weight 1: bisect over rationals and compare.
        let (mut lo, mut hi) = (Rational::zero(), frac(1, 4));
        for _ in 0..60 {
            let mid = (&lo + &hi) / int(2);
            if local_weight(&mid, n).is_one() || local_weight(&mid, n) > Rational::one() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        ensure(lo <= t && t <= hi, || format!("n={n}: bisection bracket [{lo}, {hi}] misses {t}"))?;
        ensure(local_weight(&t, n).is_one(), || format!("n={n}: local weight at threshold {}", local_weight(&t, n)))?;
        let below = &t - frac(1, 100_000);
        ensure(local_weight(&below, n) < Rational::one(), || format!("n={n}: local weight 1 below threshold"))?;
        ensure(collective_attack(&t, n).is_ok(), || format!("n={n}: attack fails at threshold"))?;
        ensure(collective_attack(&(&t + frac(1, 100_000)), n).is_err(), || format!("n={n}: attack accepted above threshold"))?;
        let sub = collective_attack(&t, n).map_err(|e| e.to_string())?;
        let r = validate_partition(&sub.marginal, &sub, 0.0);
        ensure(r.valid, || format!("n={n}: threshold partition invalid"))?;
    }
    Ok("partition exact, local weight 1, thresholds 3/12, 3/20, 3/28".into())
}

/// Random non-signaling box: a random rational mixture of the 16
/// deterministic boxes and the 8 relabeled PR boxes.
fn random_ns_box(rng: &mut ChaCha20Rng) -> ConditionalBox {
    let mut vertices: Vec<ConditionalBox> = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            vertices.push(deterministic_box([a >> 1, a & 1], [b >> 1, b & 1]));
        }
    }
    for k in 0..8usize {
        let (al, be, ga) = (k >> 2 & 1, k >> 1 & 1, k & 1);
        let pr = ConditionalBox::from_fn(1, |p| {
            let (u, x, v, y) = (p >> 3 & 1, p >> 2 & 1, p >> 1 & 1, p & 1);
            if x ^ y == (u & v) ^ (al & u) ^ (be & v) ^ ga {
                frac(1, 2)
            } else {
                Rational::zero()
            }
        })
        .expect("16 cells");
        vertices.push(pr);
    }
    let weights: Vec<i64> = (0..vertices.len()).map(|_| if rng.random_bool(0.4) { rng.random_range(1..50) } else { 0 }).collect();
    let total: i64 = weights.iter().sum::<i64>().max(1);
    let mut probs = vec![Rational::zero(); 16];
    if weights.iter().all(|&w| w == 0) {
        return make_pr_box();
    }
    for (w, vtx) in weights.iter().zip(&vertices) {
        for (p, q) in probs.iter_mut().zip(vtx.probs()) {
            *p += q * frac(*w, total);
        }
    }
    ConditionalBox::new(1, probs).expect("16 cells")
}

fn ac7() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for i in 0..100 {
        let b = random_ns_box(&mut rng);
        ensure(validate_nonsignaling(&b, 0.0).pass, || format!("box {i} is not non-signaling"))?;
        let d = depolarize(&b);
        ensure(is_unbiased(&d, 0.0).map_err(|e| e.to_string())?, || format!("box {i}: depolarized box biased"))?;
        let errs = chsh_errors_by_input(&d).map_err(|e| e.to_string())?;
        ensure(errs.iter().all(|e| *e == errs[0]), || format!("box {i}: errors by input {errs:?}"))?;
        let (before, after) = (chsh_error(&b).map_err(|e| e.to_string())?, chsh_error(&d).map_err(|e| e.to_string())?);
        ensure(before == after, || format!("box {i}: chsh_error {before} -> {after}"))?;
    }
    Ok("100 random boxes: unbiased, isotropic error, chsh_error preserved".into())
}

fn ac8() -> Outcome {
    let mut aborts = Vec::new();
    for seed in 0..100u64 {
        let config = ProtocolConfig::noiseless(16, 512, seed);
        let t = run_protocol(&config).map_err(|e| e.to_string())?;
        if t.aborted {
            aborts.push(format!("seed {seed}: {}", t.abort_reason.unwrap_or_default()));
            continue;
        }
        ensure(t.key_alice == t.key_bob, || format!("seed {seed}: keys differ"))?;
        ensure(t.m == 0, || format!("seed {seed}: m = {}", t.m))?;
        let est = t.estimates.as_ref().ok_or("missing estimates")?;
        let expected = key_distance_bound(t.s, 0, 16, est.epsilon_hat + config.slack).map_err(|e| e.to_string())?;
        ensure(t.distance_bound == Some(expected), || format!("seed {seed}: bound {:?} vs {expected}", t.distance_bound))?;
        let again = run_protocol(&config).map_err(|e| e.to_string())?;
        ensure(again.to_json() == t.to_json(), || format!("seed {seed}: transcript not reproducible"))?;
    }
    ensure(aborts.is_empty(), || format!("{} aborts: {}", aborts.len(), aborts.join("; ")))?;
    Ok("100 seeds: no aborts, equal keys, reproducible transcripts, bound matches".into())
}

fn ac9() -> Outcome {
    let quantum = make_quantum_box(0.0, 0.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let sample = sample_rounds(&quantum, 10_000, &mut rng).map_err(|e| e.to_string())?;
    let est = estimate_parameters(&sample, 0.05).map_err(|e| e.to_string())?;
    let target = 2.0 * (-1.5625f64).exp();
    ensure((est.confidence_bound - target).abs() <= 1e-9, || format!("confidence bound {}", est.confidence_bound))?;
    let mut inside = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rounds = sample_rounds(&quantum, 100_000, &mut rng).map_err(|e| e.to_string())?;
        let e = estimate_parameters(&rounds, 0.05).map_err(|e| e.to_string())?.epsilon_hat;
        if (e - 0.1875).abs() <= 0.01 {
            inside += 1;
        }
    }
    ensure(inside >= 99, || format!("{inside} of 100 seeds within 0.01 of 3/16"))?;
    Ok(format!("confidence bound {:.12}, {inside}/100 estimates within 0.01", est.confidence_bound))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1", "single-box tightness", ac1),
        ("AC2", "XOR of two pairs", ac2),
        ("AC3", "published dual data", ac3),
        ("AC4", "key-rate values", ac4),
        ("AC5", "singlet statistics", ac5),
        ("AC6", "collective attack", ac6),
        ("AC7", "depolarization", ac7),
        ("AC8", "end-to-end protocol", ac8),
        ("AC9", "sampling bound", ac9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
