use anyhow::Result;
use serde_json::json;

use nskd_core::lpcert::certified_xor_bound;
use nskd_core::partition::{
    collective_attack, collective_threshold, distance_from_uniform, known_fraction, local_weight,
    product_attack, single_box_attack,
};
use nskd_core::scalar::{display_exact, format_rational};
use nskd_core::{BoxPartition, KeyMap, Rational};

use super::{isotropic_power, load_box, rational};
use crate::args::AttackCommand;
use crate::output::Output;

const MAX_LISTED: usize = 40;

fn summary(part: &BoxPartition, distance: &Rational, extra: Vec<(&str, String, serde_json::Value)>) -> Output {
    let mut text = format!("elements: {}\n", part.elements.len());
    if part.elements.len() <= MAX_LISTED {
        for e in &part.elements {
            text += &format!("  {:<32} {}\n", e.label, format_rational(&e.weight));
        }
    }
    text += &format!("distance: {}\n", display_exact(distance));
    let mut json = json!({
        "distance": format_rational(distance),
        "elements": part.elements.iter().map(|e| json!({ "label": e.label, "weight": format_rational(&e.weight) })).collect::<Vec<_>>(),
    });
    for (k, t, v) in extra {
        text += &format!("{k}: {t}\n");
        json[k.replace(' ', "_")] = v;
    }
    Output::new(text, json).artifact(part.to_json() + "\n")
}

pub fn run(c: &AttackCommand) -> Result<Output> {
    match c {
        AttackCommand::Single(a) => {
            let marginal = match (&a.epsilon, &a.box_path) {
                (Some(e), _) => isotropic_power(&rational("epsilon", e)?, 1)?,
                (None, Some(p)) => load_box(p)?.to_rational(),
                (None, None) => unreachable!("clap requires one of --epsilon, --box"),
            };
            let part = single_box_attack(&marginal)?;
            let d = distance_from_uniform(&part, &KeyMap::Xor, &[a.u], &[a.v])?;
            Ok(summary(&part, &d, vec![]))
        }
        AttackCommand::Product(a) => {
            let errs = a.epsilon.iter().map(|e| rational("epsilon", e)).collect::<Result<Vec<_>>>()?;
            let boxes = errs.iter().map(|e| isotropic_power(e, 1)).collect::<Result<Vec<_>>>()?;
            let part = product_attack(&boxes)?;
            let zeros = vec![0; boxes.len()];
            let d = distance_from_uniform(&part, &KeyMap::Xor, &zeros, &zeros)?;
            let bound = certified_xor_bound(&errs)?;
            Ok(summary(&part, &d, vec![("certified bound", display_exact(&bound), json!(format_rational(&bound)))]))
        }
        AttackCommand::Collective(a) => {
            let eps = rational("epsilon", &a.epsilon)?;
            let part = collective_attack(&eps, a.n)?;
            let zeros = vec![0; a.n];
            let d = distance_from_uniform(&part, &KeyMap::Xor, &zeros, &zeros)?;
            let lw = local_weight(&eps, a.n);
            let t = collective_threshold(a.n);
            let known = known_fraction(&eps)?;
            Ok(summary(
                &part,
                &d,
                vec![
                    ("local weight", display_exact(&lw), json!(format_rational(&lw))),
                    ("threshold", display_exact(&t), json!(format_rational(&t))),
                    ("known fraction", display_exact(&known), json!(format_rational(&known))),
                ],
            ))
        }
    }
}
