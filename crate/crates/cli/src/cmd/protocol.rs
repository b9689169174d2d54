use anyhow::{anyhow, Result};
use serde_json::json;

use nskd_core::protocol::{run_protocol, KeyLength, ProtocolConfig, Source};
use nskd_core::scalar::format_decimal;

use super::yes_no;
use crate::args::{Global, ProtocolCommand, RunArgs};
use crate::output::{read, Output};

pub fn run(c: &ProtocolCommand, global: &Global) -> Result<Output> {
    match c {
        ProtocolCommand::Run(a) => run_once(a, global),
    }
}

fn config(a: &RunArgs, global: &Global) -> Result<ProtocolConfig> {
    let mut c = match &a.config {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| anyhow!("{}: {e}", p.display()))?,
        None => ProtocolConfig::noiseless(16, 512, 0),
    };
    if let Some(n) = a.n {
        c.n = n;
    }
    if let Some(k) = a.k {
        c.k = k;
    }
    if let Some(angles) = &a.singlet {
        c.source = Source::Singlet { angles: [angles[0], angles[1], angles[2], angles[3]], flip: a.flip.unwrap_or(0.0) };
    } else if a.delta.is_some() || a.noise.is_some() {
        c.source = Source::Quantum { delta: a.delta.unwrap_or(0.0), noise: a.noise.unwrap_or(0.0) };
    }
    if let Some(s) = &a.s {
        c.s = match s.as_str() {
            "auto" => KeyLength::Auto,
            n => KeyLength::Fixed(n.parse().map_err(|_| anyhow!("--s: expected \"auto\" or a count, got {n:?}"))?),
        };
    }
    if let Some(x) = a.slack {
        c.slack = x;
    }
    if let Some(x) = a.delta_slack {
        c.delta_slack = x;
    }
    if a.depolarize {
        c.depolarize = true;
    }
    if let Some(seed) = global.seed {
        c.seed = seed;
    }
    Ok(c)
}

fn key_string(k: &[u8]) -> String {
    k.iter().map(|b| char::from(b'0' + b)).collect()
}

fn run_once(a: &RunArgs, global: &Global) -> Result<Output> {
    let c = config(a, global)?;
    let t = run_protocol(&c)?;
    let mut text = format!("seed: {}\nrounds drawn: {}\n", c.seed, t.rounds.len());
    if let Some(e) = &t.estimates {
        text += &format!("epsilon_hat: {}\n", format_decimal(e.epsilon_hat));
        if let Some(d) = e.delta_hat {
            text += &format!("delta_hat: {}\n", format_decimal(d));
        }
    }
    match &t.abort_reason {
        Some(r) => text += &format!("aborted: {r}\n"),
        None => {
            text += &format!(
                "syndrome bits: {}\nkey bits: {}\nkeys agree: {}\nkey: {}\n",
                t.m,
                t.s,
                yes_no(t.key_alice == t.key_bob),
                key_string(&t.key_alice)
            );
            if let Some(b) = t.distance_bound {
                text += &format!("distance bound: {}\n", format_decimal(b));
            }
        }
    }
    let json = json!({
        "seed": c.seed,
        "rounds": t.rounds.len(),
        "estimates": t.estimates,
        "aborted": t.aborted,
        "abort_reason": t.abort_reason,
        "m": t.m,
        "s": t.s,
        "keys_agree": t.key_alice == t.key_bob,
        "key": key_string(&t.key_alice),
        "distance_bound": t.distance_bound,
    });
    Ok(Output::new(text, json).artifact(t.to_json() + "\n"))
}
