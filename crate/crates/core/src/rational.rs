//! Exact rational helpers shared by every module.

use num::bigint::{BigInt, Sign};
use num::integer::Integer;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact rational.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    if let Some((int_part, dec_part)) = t.split_once('.') {
        if int_part.contains('/') || dec_part.contains('/') {
            return Err(Error::Parse(format!("invalid rational '{t}'")));
        }
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), dec_part);
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational '{t}'")))?;
        let den = num::pow(BigInt::from(10), dec_part.len());
        let v = Q::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    t.parse::<Q>()
        .map_err(|_| Error::Parse(format!("invalid rational '{t}'")))
}

/// Canonical `"p/q"` (or `"p"` for integers) text form.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Rounds to `places` decimals with ties broken toward the even digit and
/// renders the result with exactly that many digits after the point.
pub fn round_half_even(x: &Q, places: usize) -> String {
    let scale = num::pow(BigInt::from(10), places);
    let scaled = x * Q::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let fl = a.floor();
    let rem = &a - &fl;
    let half = frac(1, 2);
    let mut int = fl.to_integer();
    if rem > half || (rem == half && int.is_odd()) {
        int += 1;
    }
    render_scaled(int, neg, places)
}

/// Truncates toward zero to `places` decimals.
pub fn truncate(x: &Q, places: usize) -> String {
    let scale = num::pow(BigInt::from(10), places);
    let scaled = x * Q::from_integer(scale);
    let neg = scaled.is_negative();
    let int = scaled.abs().floor().to_integer();
    render_scaled(int, neg, places)
}

fn render_scaled(int: BigInt, neg: bool, places: usize) -> String {
    let digits = int.to_string();
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{:0>width$}", digits, width = places + 1);
        let (a, b) = padded.split_at(padded.len() - places);
        format!("{a}.{b}")
    };
    if neg && int.sign() != Sign::NoSign {
        format!("-{body}")
    } else {
        body
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators of `xs` (1 for an empty input).
pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn min_q<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Option<Q> {
    xs.into_iter().min().cloned()
}

pub fn sum_q<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Q {
    xs.into_iter().fold(Q::zero(), |acc, x| acc + x)
}

/// `n choose k` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert_eq!(parse_q("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), frac(-3, 2));
        assert!(parse_q("1/0x").is_err());
    }

    #[test]
    fn rounding_modes() {
        assert_eq!(round_half_even(&frac(1, 8), 2), "0.12");
        assert_eq!(round_half_even(&frac(3, 8), 2), "0.38");
        assert_eq!(round_half_even(&frac(2, 3), 3), "0.667");
        assert_eq!(round_half_even(&q(5), 2), "5.00");
        assert_eq!(round_half_even(&frac(-1, 3), 2), "-0.33");
        assert_eq!(truncate(&frac(2, 3), 3), "0.666");
        assert_eq!(round_half_even(&frac(1, 2), 0), "0");
        assert_eq!(round_half_even(&frac(3, 2), 0), "2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(15, 4), BigInt::from(1365));
        assert_eq!(binomial(3, 4), BigInt::zero());
    }
}
