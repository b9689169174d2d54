pub mod attack;
pub mod boxes;
pub mod lp;
pub mod protocol;
pub mod rate;

use anyhow::{anyhow, bail, Result};
use nskd_core::boxcore::{make_isotropic_box, tensor_boxes};
use nskd_core::scalar::parse_rational;
use nskd_core::{AnyBox, ConditionalBox, Rational};

use crate::output::read;

pub fn rational(flag: &str, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| anyhow!("--{flag}: {e}"))
}

pub fn isotropic_power(eps: &Rational, n: usize) -> Result<ConditionalBox> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let b = make_isotropic_box(eps.clone())?;
    Ok(tensor_boxes(&vec![b; n])?)
}

pub fn load_box(path: &std::path::Path) -> Result<AnyBox> {
    Ok(AnyBox::from_json(&read(path)?)?)
}

/// Parses a bit string such as "01"; `None` gives all zeros.
pub fn bits(flag: &str, s: Option<&str>, n: usize) -> Result<Vec<u8>> {
    let Some(s) = s else { return Ok(vec![0; n]) };
    let v: Vec<u8> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(anyhow!("--{flag}: {s:?} is not a bit string")),
        })
        .collect::<Result<_>>()?;
    if v.len() != n {
        bail!("--{flag}: {} bits for {n} pairs", v.len());
    }
    Ok(v)
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
