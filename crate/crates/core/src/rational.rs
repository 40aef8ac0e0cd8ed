//! Exact rational time and reward values.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Every time, distance and reward in the crate.
pub type Rational = Ratio<i128>;

#[inline]
pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

#[inline]
pub fn frac(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn floor_int(x: &Rational) -> i128 {
    x.floor().to_integer()
}

pub fn ceil_int(x: &Rational) -> i128 {
    x.ceil().to_integer()
}

/// Smallest `k >= 0` with `2^k >= x`; `x <= 1` maps to 0.
pub fn ceil_log2(x: &Rational) -> u32 {
    let mut k = 0u32;
    let mut p = Rational::one();
    while &p < x {
        p *= int(2);
        k += 1;
    }
    k
}

/// Largest integer `k` with `2^k <= x`, for `x > 0`.
pub fn floor_log2(x: &Rational) -> i32 {
    assert!(x.is_positive(), "floor_log2 of a non-positive value");
    let two = int(2);
    let mut k = 0i32;
    let mut p = Rational::one();
    if x >= &p {
        while &(p * two) <= x {
            p *= two;
            k += 1;
        }
    } else {
        while &p > x {
            p /= two;
            k -= 1;
        }
    }
    k
}

/// `2^k` for any integer exponent.
pub fn pow2(k: i32) -> Rational {
    if k >= 0 {
        int(1i128 << k)
    } else {
        Rational::new(1, 1i128 << (-k))
    }
}

/// Greatest common divisor of a set of nonnegative rationals: the largest `g`
/// such that every value is an integer multiple of `g`. Zero values are
/// ignored; an all-zero input yields `None`.
pub fn rational_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut acc: Option<Rational> = None;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let v = v.abs();
        acc = Some(match acc {
            None => v,
            Some(g) => {
                let l = g.denom().lcm(v.denom());
                let a = g.numer() * (l / g.denom());
                let b = v.numer() * (l / v.denom());
                Rational::new(a.gcd(&b), l)
            }
        });
    }
    acc
}

/// Least common multiple of denominators.
pub fn denom_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values.into_iter().fold(1i128, |acc, v| acc.lcm(v.denom()))
}

/// Parse `"3"`, `"-2"`, `"7/4"` or a plain decimal such as `"0.125"`.
/// Decimals may carry at most `max_frac_digits` fractional digits.
pub fn parse_rational(text: &str, max_frac_digits: usize) -> Result<Rational> {
    let s = text.trim();
    let bad = |m: &str| Error::Argument(format!("cannot parse {text:?} as a rational: {m}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad("numerator"))?;
        let d: i128 = d.trim().parse().map_err(|_| bad("denominator"))?;
        if d == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if s.contains(['e', 'E']) {
        return Err(bad("exponent notation is not supported"));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(bad("no digits"));
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !fraction.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad("unexpected character"));
    }
    if fraction.len() > max_frac_digits {
        return Err(bad(&format!("more than {max_frac_digits} fractional digits")));
    }
    let whole: i128 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad("overflow"))? };
    let scale = 10i128.pow(fraction.len() as u32);
    let f: i128 = if fraction.is_empty() { 0 } else { fraction.parse().map_err(|_| bad("overflow"))? };
    let v = Rational::new(whole * scale + f, scale);
    Ok(if neg { -v } else { v })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_helpers() {
        assert_eq!(ceil_log2(&int(1)), 0);
        assert_eq!(ceil_log2(&int(2)), 1);
        assert_eq!(ceil_log2(&int(5)), 3);
        assert_eq!(ceil_log2(&int(16)), 4);
        assert_eq!(ceil_log2(&frac(3, 2)), 1);
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&int(7)), 2);
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&frac(1, 2)), -1);
        assert_eq!(floor_log2(&frac(3, 8)), -2);
        assert_eq!(pow2(-2), frac(1, 4));
    }

    #[test]
    fn gcd_of_rationals() {
        let v = [frac(1, 2), frac(1, 3), int(0)];
        assert_eq!(rational_gcd(&v), Some(frac(1, 6)));
        let v = [int(4), int(6)];
        assert_eq!(rational_gcd(&v), Some(int(2)));
        assert_eq!(rational_gcd(&[int(0)]), None);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("0.5", 6).unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-1.25", 6).unwrap(), frac(-5, 4));
        assert_eq!(parse_rational("7/4", 6).unwrap(), frac(7, 4));
        assert_eq!(parse_rational("12", 0).unwrap(), int(12));
        assert!(parse_rational("0.1234567", 6).is_err());
        assert!(parse_rational("1e3", 6).is_err());
        assert!(parse_rational("1/0", 6).is_err());
        assert_eq!(format_rational(&frac(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-3)), "-3");
    }
}
