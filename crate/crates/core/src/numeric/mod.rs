//! Exact arithmetic substrate: rationals, quadratic surds, 2x2 Möbius
//! matrices, and directed-rounding enclosures for exp/log.

mod dyadic;
mod mobius;
mod surd;

pub use dyadic::{
    exp_enclosure, floor_exp, ln_enclosure, ln_enclosure_big, pow_enclosure, DyadicInterval,
};
pub use mobius::MobiusMatrix;
pub use surd::QuadraticSurd;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. `num_rational` keeps the value normalized
/// (positive denominator, reduced), which makes equality tests exact.
pub type Rational = num_rational::BigRational;

/// Parse a rational from `"num/den"` or a bare integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad rational numerator: {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad rational denominator: {s:?}")))?;
    if den.is_zero() {
        return Err(Error::InvalidInput("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

/// Parse a decimal literal with optional exponent (`"1e-4"`, `"0.25"`, `"3"`)
/// into an exact rational. Used for CLI tolerance flags.
pub fn parse_decimal_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') {
        return parse_rational(s);
    }
    let bad = || Error::InvalidInput(format!("bad decimal literal: {s:?}"));
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let negative = int_part.starts_with('-');
    let digits: String = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let num = if negative { -num } else { num };
    let scale = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::new(num, ten.pow(scale as u32))
    } else {
        Rational::from(num * ten.pow((-scale) as u32))
    };
    Ok(value)
}

/// Format as `"num/den"` with the denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Floor of an exact rational as a big integer.
pub fn rational_floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Ceiling of an exact rational as a big integer.
pub fn rational_ceil(r: &Rational) -> BigInt {
    r.numer().div_ceil(r.denom())
}

/// Largest rational `<= x` whose denominator is at most `max_den`, found by
/// walking the Stern-Brocot tree. Requires `x > 0`.
pub fn rational_below(x: &Rational, max_den: &BigInt) -> Rational {
    assert!(x.is_positive(), "rational_below requires a positive bound");
    if x.denom() <= max_den {
        return x.clone();
    }
    // Left endpoint (a/b) stays <= x, right endpoint (c/d) stays > x.
    let mut a = rational_floor(x);
    let mut b = BigInt::one();
    let mut c = &a + 1;
    let mut d = BigInt::one();
    let mut best = Rational::new(a.clone(), b.clone());
    loop {
        let mn: BigInt = &a + &c;
        let md: BigInt = &b + &d;
        if md > *max_den {
            return best;
        }
        let mediant = Rational::new(mn.clone(), md.clone());
        if mediant <= *x {
            best = mediant;
            a = mn;
            b = md;
        } else {
            c = mn;
            d = md;
        }
    }
}
