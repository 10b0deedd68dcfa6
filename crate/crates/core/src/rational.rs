//! Parsing and formatting of exact rationals.
//!
//! Input files accept integers (`3`), fractions (`7/2`) and decimals
//! (`3.25`, parsed with a base-10 denominator). Output is always `p/q` or a
//! plain integer; decimal approximations are opt-in and never replace the
//! exact value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parse `3`, `-7/2` or `0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator `{num}`"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator `{den}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let i: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| format!("bad number `{s}`"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal `{s}`"));
        }
        let f: BigInt = frac.parse().map_err(|_| format!("bad decimal `{s}`"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let whole = BigRational::from_integer(i);
        let part = BigRational::new(f, scale);
        return Ok(if sign < 0 { whole - part } else { whole + part });
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    Ok(BigRational::from_integer(n))
}

/// Render as `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed-point decimal approximation with `digits` fractional digits,
/// rounded toward zero.
pub fn decimal_approx(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * BigRational::from_integer(scale.clone())).trunc();
    let v = scaled.numer().abs();
    let (int, frac) = (v.clone() / &scale, v % &scale);
    let sign = if r.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>width$}", width = digits)
    }
}

/// Shorthand used all over the tests.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `r/2`, used for the half-weight coordinates of the Buneman complex.
pub fn half(r: &BigRational) -> BigRational {
    r / int(2)
}

/// Try to express `r` as a ratio of i128s (used by the oracle's integer core).
pub fn to_i128_ratio(r: &BigRational) -> Option<(i128, i128)> {
    Some((r.numer().to_i128()?, r.denom().to_i128()?))
}
