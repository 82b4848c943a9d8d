//! Exact rational helpers: parsing, rounding and decimal rendering.
//!
//! Every quantity in the crate is a [`Q`]; floating point only shows up in
//! [`to_f64`] for display.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

fn pow10_q(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(pow10(e as u32))
    } else {
        Q::new(BigInt::one(), pow10((-e) as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not an exact number: {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `a/b`, plain integers and decimals with an optional exponent
/// (`0.05`, `5.491e-7`). Both sides of a fraction may be decimals, so
/// `21.86/317` is accepted. The result is exact.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((a, b)) = t.split_once('/') {
        let n = parse_decimal(a.trim()).ok_or_else(err)?;
        let d = parse_decimal(b.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    parse_decimal(t).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.bytes().chain(fp.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let v = Q::from_integer(digits) * pow10_q(exp - fp.len() as i64);
    Some(if neg { -v } else { v })
}

/// Nearest integer, halves rounded away from zero.
pub fn round_half_away(x: &Q) -> BigInt {
    let half = frac(1, 2);
    let r = (x.abs() + half).floor().to_integer();
    if x.is_negative() {
        -r
    } else {
        r
    }
}

/// Rounds to the nearest multiple of `step` (e.g. 10 or 100).
pub fn round_to_multiple(x: &Q, step: &Q) -> Q {
    Q::from_integer(round_half_away(&(x / step))) * step
}

/// Decimal exponent `k` with `10^k <= |x| < 10^(k+1)`. `x` must be nonzero.
fn magnitude(x: &Q) -> i64 {
    let a = x.abs();
    let nd = a.numer().to_string().len() as i64;
    let dd = a.denom().to_string().len() as i64;
    let mut k = nd - dd;
    if a < pow10_q(k) {
        k -= 1;
    }
    k
}

/// Rounds `x` to `digits` significant figures. Returns the signed mantissa
/// (exactly `digits` digits long) and its decimal exponent, or `None` for zero.
pub fn round_sig(x: &Q, digits: u32) -> Option<(BigInt, i64)> {
    assert!(digits > 0);
    if x.is_zero() {
        return None;
    }
    let mut e = magnitude(x) - (digits as i64 - 1);
    let mut m = round_half_away(&(x.abs() / pow10_q(e)));
    if m == pow10(digits) {
        m /= 10;
        e += 1;
    }
    Some((if x.is_negative() { -m } else { m }, e))
}

/// The exact value of `x` after rounding to `digits` significant figures.
pub fn sig_value(x: &Q, digits: u32) -> Q {
    match round_sig(x, digits) {
        Some((m, e)) => Q::from_integer(m) * pow10_q(e),
        None => Q::zero(),
    }
}

fn place_point(m: &BigInt, e: i64) -> String {
    let neg = m.is_negative();
    let ds = m.abs().to_string();
    let body = if e >= 0 {
        format!("{ds}{}", "0".repeat(e as usize))
    } else {
        let shift = (-e) as usize;
        if ds.len() > shift {
            let (a, b) = ds.split_at(ds.len() - shift);
            format!("{a}.{b}")
        } else {
            format!("0.{}{ds}", "0".repeat(shift - ds.len()))
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Positional rendering at `digits` significant figures, e.g. `0.0006041`.
pub fn fmt_sig(x: &Q, digits: u32) -> String {
    match round_sig(x, digits) {
        Some((m, e)) => place_point(&m, e),
        None => "0".to_string(),
    }
}

/// Scientific rendering at `digits` significant figures, e.g. `1.451e-8`.
pub fn fmt_sci(x: &Q, digits: u32) -> String {
    match round_sig(x, digits) {
        Some((m, e)) => {
            let neg = m.is_negative();
            let ds = m.abs().to_string();
            let exp = e + ds.len() as i64 - 1;
            let mant = if ds.len() > 1 {
                format!("{}.{}", &ds[..1], &ds[1..])
            } else {
                ds
            };
            format!("{}{mant}e{exp}", if neg { "-" } else { "" })
        }
        None => "0".to_string(),
    }
}

/// Fixed-point rendering with `places` digits after the point.
pub fn fmt_fixed(x: &Q, places: u32) -> String {
    let m = round_half_away(&(x * Q::from_integer(pow10(places))));
    place_point(&m, -(places as i64))
}

/// `numer/denom` in lowest terms (`n` when the denominator is one).
pub fn fmt_exact(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A decimal figure as printed in a published table. Its precision is the
/// count of significant digits in the text, trailing zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Printed {
    pub text: String,
    pub value: Q,
    pub digits: u32,
}

impl Printed {
    pub fn parse(text: &str) -> Result<Self, ParseRationalError> {
        let t = text.trim();
        let value = parse_decimal(t).ok_or_else(|| ParseRationalError(t.to_string()))?;
        let mant = t.split(['e', 'E']).next().unwrap_or("");
        let digits = mant
            .bytes()
            .filter(u8::is_ascii_digit)
            .skip_while(|&c| c == b'0')
            .count() as u32;
        Ok(Printed {
            text: t.to_string(),
            value,
            digits: digits.max(1),
        })
    }

    /// True when `x`, rounded to this figure's precision, equals it.
    pub fn matches(&self, x: &Q) -> bool {
        sig_value(x, self.digits) == self.value
    }
}
