use anyhow::{bail, Result};
use serde_json::json;

use nskd_core::lpcert::{
    build_xor_primal, check_certificate, factored_certificate, solve_lp, tensor_certificate,
    ConstraintSystem, TensorProgram, MAX_DENSE_PAIRS,
};
use nskd_core::scalar::{display_exact, format_rational, frac};
use nskd_core::{ConditionalBox, DualCertificate, LinearProgram, Rational};

use super::{bits, isotropic_power, load_box, rational};
use crate::args::{CertifyArgs, LpArgs, LpCommand};
use crate::output::{read, Output};

pub fn run(c: &LpCommand) -> Result<Output> {
    match c {
        LpCommand::Solve(a) => solve(a),
        LpCommand::Certify(a) => certify(a),
    }
}

fn marginal(n: usize, epsilon: Option<&str>, path: Option<&std::path::Path>) -> Result<ConditionalBox> {
    match (epsilon, path) {
        (_, Some(p)) => Ok(load_box(p)?.to_rational()),
        (Some(e), None) => isotropic_power(&rational("epsilon", e)?, n),
        (None, None) => bail!("give --epsilon or --box"),
    }
}

fn dense_limit(n: usize) -> Result<()> {
    if n > MAX_DENSE_PAIRS {
        bail!("exact programs stop at {MAX_DENSE_PAIRS} pairs; `lp certify` handles more");
    }
    Ok(())
}

fn bound_lines(value: &Rational) -> String {
    format!("bound: {}\ndistance bound: {}\n", display_exact(value), display_exact(&(value * frac(1, 2))))
}

fn solve(a: &LpArgs) -> Result<Output> {
    let lp = match &a.program {
        Some(p) => LinearProgram::from_json(&read(p)?)?,
        None => {
            let m = marginal(a.n, a.epsilon.as_deref(), a.box_path.as_deref())?;
            let n = m.n_pairs();
            dense_limit(n)?;
            build_xor_primal(&m, &bits("u", a.u.as_deref(), n)?, &bits("v", a.v.as_deref(), n)?)?
        }
    };
    let sol = solve_lp(&lp)?;
    let text = format!(
        "variables: {}\nrows: {}\npivots: {}\noptimum: {}\n{}",
        lp.vars,
        lp.rows.len(),
        sol.pivots,
        display_exact(&sol.value),
        bound_lines(&sol.value)
    );
    let json = json!({
        "variables": lp.vars,
        "rows": lp.rows.len(),
        "pivots": sol.pivots,
        "optimum": format_rational(&sol.value),
        "delta": sol.delta.iter().map(format_rational).collect::<Vec<_>>(),
    });
    Ok(Output::new(text, json).artifact(sol.certificate.to_json() + "\n"))
}

fn certify(a: &CertifyArgs) -> Result<Output> {
    let iso = a.epsilon.as_deref().map(|e| rational("epsilon", e)).transpose()?;
    let n = match &a.box_path {
        Some(p) => load_box(p)?.n_pairs(),
        None => a.n,
    };
    let (u, v) = (bits("u", a.u.as_deref(), n)?, bits("v", a.v.as_deref(), n)?);
    let inputs: Vec<(u8, u8)> = u.into_iter().zip(v).collect();

    if n > MAX_DENSE_PAIRS {
        let (Some(eps), None) = (&iso, &a.certificate) else {
            bail!("above {MAX_DENSE_PAIRS} pairs only isotropic pairs given by --epsilon can be certified");
        };
        let boxes = vec![isotropic_power(eps, 1)?; n];
        let cert = factored_certificate(&inputs, &boxes)?;
        let ok = cert.verify(&boxes)?;
        let text = format!(
            "{}certificate: {} (factored over {n} pairs)\n",
            bound_lines(&cert.claimed_bound),
            if ok { "VERIFIED" } else { "FAILED" }
        );
        let json = json!({
            "claimed_bound": format_rational(&cert.claimed_bound),
            "verified": ok,
            "factored": true,
        });
        let artifact = serde_json::to_string_pretty(&json!({
            "inputs": cert.inputs,
            "factors": cert.factors,
            "claimed_bound": format_rational(&cert.claimed_bound),
        }))? + "\n";
        return Ok(Output::new(text, json).artifact(artifact).failed(!ok));
    }

    let m = marginal(n, a.epsilon.as_deref(), a.box_path.as_deref())?;
    let tensor = TensorProgram::new(&m, &inputs)?;
    let cert = match &a.certificate {
        Some(p) => DualCertificate::from_json(&read(p)?)?,
        None => tensor_certificate(&inputs, &m)?,
    };
    let check = if cert.lambda.len() == tensor.row_count() {
        check_certificate(&tensor, &cert)?
    } else {
        let (u, v): (Vec<u8>, Vec<u8>) = inputs.iter().copied().unzip();
        check_certificate(&build_xor_primal(&m, &u, &v)?, &cert)?
    };
    let ok = check.passed();
    let mut text = bound_lines(&cert.claimed_bound);
    text += &format!("computed bound: {}\n", display_exact(&check.computed_bound));
    if let Some(f) = &check.first_failure {
        text += &format!("failure: {f}\n");
    }
    text += &format!("certificate: {}\n", if ok { "VERIFIED" } else { "FAILED" });
    let json = json!({
        "claimed_bound": format_rational(&cert.claimed_bound),
        "computed_bound": format_rational(&check.computed_bound),
        "nonnegative": check.nonnegative,
        "feasible": check.feasible,
        "verified": ok,
        "failure": check.first_failure,
    });
    Ok(Output::new(text, json).artifact(cert.to_json() + "\n").failed(!ok))
}
