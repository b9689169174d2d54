use anyhow::{anyhow, bail, Result};
use serde_json::json;

use nskd_core::protocol::{curve_csv, key_rate_report, quantum_curve, region_csv, region_table};
use nskd_core::scalar::format_decimal;

use super::yes_no;
use crate::args::{KeyrateArgs, RegionArgs};
use crate::output::Output;

pub fn keyrate(a: &KeyrateArgs) -> Result<Output> {
    let r = key_rate_report(a.epsilon, a.delta)?;
    let text = format!(
        "rate: {}\nfeasible: {}\nepsilon_max: {}\n",
        format_decimal(r.rate),
        yes_no(r.feasible),
        format_decimal(r.epsilon_max)
    );
    Ok(Output::new(text, serde_json::to_value(&r)?))
}

/// "start:stop:points", endpoints included.
fn grid(flag: &str, s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || anyhow!("--{flag}: expected start:stop:points, got {s:?}");
    let [a, b, k] = parts[..] else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    let k: usize = k.parse().map_err(|_| bad())?;
    match k {
        0 => bail!("--{flag}: at least one point"),
        1 => Ok(vec![a]),
        _ => Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()),
    }
}

pub fn region(a: &RegionArgs) -> Result<Output> {
    if let Some(c) = &a.curve {
        let points = quantum_curve(&grid("curve", c)?)?;
        let csv = curve_csv(&points);
        let mut out = Output::new(csv.clone(), json!(points)).artifact(csv.clone());
        out.csv = Some(csv);
        return Ok(out);
    }
    let rows = region_table(&grid("delta", &a.delta)?, &grid("epsilon", &a.epsilon)?)?;
    let csv = region_csv(&rows);
    let mut out = Output::new(csv.clone(), json!(rows)).artifact(csv.clone());
    out.csv = Some(csv);
    Ok(out)
}
