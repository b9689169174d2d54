//! Exact rationals, the `Prob` abstraction over rational and float
//! arithmetic, and the textual encodings used in JSON files.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Float,
}

/// Scalar used for box entries. Implemented for [`Rational`] and `f64`.
pub trait Prob: Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    const ARITHMETIC: Arithmetic;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact rational value. Every finite f64 is a dyadic rational.
    fn to_rational(&self) -> Rational;
    fn from_usize(n: usize) -> Self;

    /// |self| <= tol. With a rational scalar and `tol == 0` this is an exact zero test.
    fn within(&self, tol: f64) -> bool {
        if tol == 0.0 {
            self.is_zero()
        } else {
            self.abs().to_f64() <= tol
        }
    }

    fn half() -> Self {
        Self::one() / Self::from_usize(2)
    }
}

impl Prob for Rational {
    const ARITHMETIC: Arithmetic = Arithmetic::Rational;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn from_usize(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Prob for f64 {
    const ARITHMETIC: Arithmetic = Arithmetic::Float;

    fn from_rational(r: &Rational) -> Self {
        ratio_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
}

/// Nearest-ish f64 for a big rational, robust to huge numerators and denominators.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(f) = ToPrimitive::to_f64(r) {
        if f.is_finite() {
            return f;
        }
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(900) as usize;
    let n2 = n >> shift;
    let d2 = d >> shift;
    n2.to_f64().unwrap_or(0.0) / d2.to_f64().unwrap_or(1.0)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p/q"`, `"p"`, or an exact decimal such as `"0.125"` or `"1e-3"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{ip}{fp}");
    let num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal with 12 significant digits.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = 12i32;
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{:.*e}", (digits - 1) as usize, x);
    }
    let decimals = (digits - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A rational value shown as `"p/q (decimal)"`.
pub fn display_exact(r: &Rational) -> String {
    format!("{} ({})", format_rational(r), format_decimal(ratio_to_f64(r)))
}

/// Serde helpers for a rational encoded as a `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_rational(&v).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let v = Vec::<serde_json::Value>::deserialize(d)?;
            v.iter()
                .map(value_to_rational)
                .collect::<Result<Vec<_>>>()
                .map_err(serde::de::Error::custom)
        }
    }
}

/// Accepts a JSON string (`"p/q"` or decimal) or a JSON number (converted exactly).
pub fn value_to_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                Rational::from_float(f).ok_or_else(|| Error::Parse(format!("bad number {n}")))
            }
        }
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// Binary entropy in bits, with h(0) = h(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("4/25").unwrap(), frac(4, 25));
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse_rational(".25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("1e-3").unwrap(), frac(1, 1000));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for s in ["4/25", "-7/3", "0", "12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_decimal(0.16), "0.16");
        assert_eq!(format_decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(display_exact(&frac(4, 25)), "4/25 (0.16)");
    }

    #[test]
    fn float_to_rational_is_exact() {
        assert_eq!(0.5f64.to_rational(), frac(1, 2));
        assert_eq!(Prob::to_f64(&0.1f64.to_rational()), 0.1);
    }

    #[test]
    fn huge_ratio_converts() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = Rational::new(big.clone(), big * BigInt::from(4));
        assert!((ratio_to_f64(&r) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }
}
