//! Exact rational numbers and their textual forms.
//!
//! Every measure, constant and certified bound in the crate is a [`Rational`].
//! The canonical text form is `"p/q"` in lowest terms (integers keep the `/1`).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `10^-k` as an exact rational.
pub fn pow10_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Canonical `"p/q"` form.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse a rational from text.
///
/// Always accepted: `p/q`, `p`, and power-of-ten notation with an integer
/// mantissa such as `1e-4` or `3e2`; these are exact. Decimal points (`0.24`,
/// `2.5e-3`) are rejected unless `allow_decimal` is set, in which case the
/// value is converted exactly as `digits / 10^k`.
pub fn parse(text: &str, allow_decimal: bool) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Input("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p, text)?;
        let q: BigInt = parse_int(q, text)?;
        if q.is_zero() {
            return Err(Error::Input(format!("zero denominator in '{text}'")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::Input(format!("bad exponent in '{text}'")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (digits, scale) = match mantissa.split_once('.') {
        Some((whole, frac)) => {
            if !allow_decimal {
                return Err(Error::Input(format!(
                    "decimal '{text}' rejected; use p/q or pass --allow-decimal"
                )));
            }
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Input(format!("bad decimal '{text}'")));
            }
            (format!("{whole}{frac}"), frac.len() as i64)
        }
        None => (mantissa.to_string(), 0),
    };
    let n = parse_int(&digits, text)?;
    let shift = exponent - scale;
    if shift.unsigned_abs() > 10_000 {
        return Err(Error::Input(format!("exponent out of range in '{text}'")));
    }
    let ten = BigInt::from(10u32);
    Ok(if shift >= 0 {
        Rational::from_integer(n * ten.pow(shift as u32))
    } else {
        Rational::new(n, ten.pow((-shift) as u32))
    })
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let s = s.trim();
    let ok = !s.is_empty()
        && s.strip_prefix(['-', '+'])
            .unwrap_or(s)
            .bytes()
            .all(|b| b.is_ascii_digit())
        && s.bytes().any(|b| b.is_ascii_digit());
    if !ok {
        return Err(Error::Input(format!("cannot parse rational '{whole}'")));
    }
    s.parse()
        .map_err(|_| Error::Input(format!("cannot parse rational '{whole}'")))
}

/// Largest multiple of `10^-digits` that is `<= r`.
pub fn floor_decimal(r: &Rational, digits: u32) -> Rational {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale.clone());
    Rational::new(scaled.numer().div_floor(scaled.denom()), scale)
}

/// Smallest multiple of `10^-digits` that is `>= r`.
pub fn ceil_decimal(r: &Rational, digits: u32) -> Rational {
    -floor_decimal(&-r, digits)
}

/// Decimal expansion of `r` truncated toward minus infinity after `digits`
/// fractional digits. Exact whenever `r` is a multiple of `10^-digits`.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let scaled = floor_decimal(r, digits) * Rational::from_integer(BigInt::from(10u32).pow(digits));
    let n = scaled.to_integer();
    let negative = n.sign() == Sign::Minus;
    let mut body = n.abs().to_string();
    if digits == 0 {
        return if negative { format!("-{body}") } else { body };
    }
    let width = digits as usize + 1;
    if body.len() < width {
        body = format!("{}{}", "0".repeat(width - body.len()), body);
    }
    let (whole, frac) = body.split_at(body.len() - digits as usize);
    let frac = frac.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

pub fn min<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if b < a {
        b
    } else {
        a
    }
}

pub fn max<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if b > a {
        b
    } else {
        a
    }
}

/// `r^k` for a non-negative exponent.
pub fn pow(r: &Rational, k: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= r;
    }
    out
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

/// Serde adapter writing a [`Rational`] as a `"p/q"` string.
pub mod serde_str {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text, false).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::Rational;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| super::parse(t, false).map_err(de::Error::custom))
            .collect()
    }
}
