use anyhow::{bail, Result};
use serde_json::json;

use nskd_core::boxcore::{
    apply_output_noise, chsh_error, depolarize, local_residual, make_isotropic_box, make_pr_box,
    make_quantum_box, make_singlet_box, tensor_boxes, validate_nonsignaling, NonSignalingReport,
};
use nskd_core::scalar::{display_exact, format_decimal, format_rational, Prob};
use nskd_core::{AnyBox, ConditionalBox, Rational};

use super::{load_box, rational, yes_no};
use crate::args::{BoxCommand, BoxKind, MakeArgs, ValidateArgs};
use crate::output::Output;

pub fn run(c: &BoxCommand) -> Result<Output> {
    match c {
        BoxCommand::Make(a) => make(a),
        BoxCommand::Validate(a) => validate(a),
        BoxCommand::Depolarize(a) => {
            let b = match load_box(&a.path)? {
                AnyBox::Rational(b) => AnyBox::Rational(depolarize(&b)),
                AnyBox::Float(b) => AnyBox::Float(depolarize(&b)),
            };
            Ok(box_output(&b))
        }
        BoxCommand::Local(a) => local(&load_box(&a.path)?),
    }
}

fn power<T: Prob>(b: ConditionalBox<T>, pairs: usize) -> Result<ConditionalBox<T>> {
    if pairs == 0 {
        bail!("--pairs must be at least 1");
    }
    Ok(tensor_boxes(&vec![b; pairs])?)
}

fn make(a: &MakeArgs) -> Result<Output> {
    let b: AnyBox = match a.kind {
        BoxKind::Pr => power(make_pr_box::<Rational>(), a.pairs)?.into(),
        BoxKind::Isotropic => {
            let Some(e) = &a.epsilon else { bail!("--kind isotropic needs --epsilon") };
            power(make_isotropic_box(rational("epsilon", e)?)?, a.pairs)?.into()
        }
        BoxKind::Quantum => {
            let q = make_quantum_box(rational("delta", &a.delta)?, rational("noise", &a.noise)?)?;
            power(q, a.pairs)?.into()
        }
        BoxKind::Singlet => {
            let angles = [a.angles[0], a.angles[1], a.angles[2], a.angles[3]];
            power(apply_output_noise(&make_singlet_box(angles), a.flip)?, a.pairs)?.into()
        }
    };
    Ok(box_output(&b))
}

fn box_output(b: &AnyBox) -> Output {
    let text = b.to_json() + "\n";
    let json = serde_json::to_value(b.to_file()).expect("box file is JSON");
    Output::new(text.clone(), json).artifact(text)
}

fn report_lines(r: &NonSignalingReport, chsh: Option<String>) -> String {
    let mut s = format!(
        "non-signaling: {}\nnormalized: {}\nnonnegative: {}\nworst violation: {}\n",
        if r.pass { "PASS" } else { "FAIL" },
        yes_no(r.normalized),
        yes_no(r.nonnegative),
        format_decimal(r.worst_violation),
    );
    if let Some(i) = &r.violating_interface {
        s += &format!("violating interface: {i}\n");
    }
    if let Some(h) = r.subset_conditions_hold {
        s += &format!("all interface subsets: {}\n", yes_no(h));
    }
    if let Some(c) = chsh {
        s += &format!("chsh error: {c}\n");
    }
    s
}

fn validate(a: &ValidateArgs) -> Result<Output> {
    let b = load_box(&a.path)?;
    let (r, chsh) = match &b {
        AnyBox::Rational(b) => (
            validate_nonsignaling(b, a.tol),
            (b.n_pairs() == 1).then(|| chsh_error(b).map(|e| display_exact(&e))).transpose()?,
        ),
        AnyBox::Float(b) => (
            validate_nonsignaling(b, a.tol),
            (b.n_pairs() == 1).then(|| chsh_error(b).map(format_decimal)).transpose()?,
        ),
    };
    let json = json!({ "report": r, "chsh_error": chsh });
    Ok(Output::new(report_lines(&r, chsh), json).failed(!r.pass))
}

fn local(b: &AnyBox) -> Result<Output> {
    let residual = match b {
        AnyBox::Rational(b) => local_residual(b)?,
        AnyBox::Float(b) => local_residual(b)?,
    };
    let local = match b {
        AnyBox::Rational(_) => residual == Rational::from_integer(0.into()),
        AnyBox::Float(_) => residual.within(1e-9),
    };
    let text = format!("local: {}\nresidual: {}\n", yes_no(local), display_exact(&residual));
    Ok(Output::new(text, json!({ "local": local, "residual": format_rational(&residual) })))
}
