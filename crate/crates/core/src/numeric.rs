//! Small numeric helpers: logarithms of big integers, exact rational parsing
//! and fixed-significance decimal formatting.

use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("`{0}` is not a rational or decimal number")]
pub struct ParseRationalError(pub String);

/// Natural logarithm of a positive big integer from its bit length and its
/// leading 128 bits.
pub fn ln_biguint(value: &BigUint) -> Option<f64> {
    if value.is_zero() {
        return None;
    }
    let bits = value.bits();
    let (top, shift) = if bits <= 128 {
        (value.to_u128().expect("at most 128 bits"), 0)
    } else {
        let shift = bits - 128;
        ((value >> shift).to_u128().expect("exactly 128 bits"), shift)
    };
    Some((top as f64).ln() + shift as f64 * LN_2)
}

/// `value^(1/n)` as a float, `None` for `value = 0` or `n = 0`.
pub fn nth_root(value: &BigUint, n: u64) -> Option<f64> {
    if n == 0 {
        return None;
    }
    ln_biguint(value).map(|ln| (ln / n as f64).exp())
}

/// Parses `3/7`, `0.25`, `-2`, `1e-6` or `2.5E3` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Plain decimal with `digits` significant digits; never scientific notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1) as i32;
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit (9.99 -> 10.0)
    let carried = s
        .trim_start_matches('-')
        .split('.')
        .next()
        .map_or(0, str::len) as i32;
    if decimals > 0 && carried > magnitude.max(0) + 1 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    s
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
