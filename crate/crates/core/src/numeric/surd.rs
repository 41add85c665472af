//! Exact quadratic surds `(a + b*sqrt(d))/c`.
//!
//! Surds are closed under the Möbius maps that drive digit extraction (the
//! Gauss and Rényi steps), so continued fraction digits of a surd come out
//! of pure integer arithmetic: no rounding ever enters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use super::{MobiusMatrix, Rational};
use crate::error::{Error, Result};

/// The irrational number `(a + b*sqrt(d)) / c` with `b != 0`, `c > 0` and
/// `d` positive and not a perfect square. Normalized so gcd(a, b, c) = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl QuadraticSurd {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, d, c) = (a.into(), b.into(), d.into(), c.into());
        if c.is_zero() {
            return Err(Error::InvalidInput("surd denominator is zero".into()));
        }
        if b.is_zero() {
            return Err(Error::InvalidInput(
                "surd with b = 0 is rational; use a Rational source".into(),
            ));
        }
        if !d.is_positive() {
            return Err(Error::InvalidInput("surd radicand must be positive".into()));
        }
        let root = d.sqrt();
        if &root * &root == d {
            return Err(Error::InvalidInput(format!(
                "radicand {d} is a perfect square; the value is rational"
            )));
        }
        let mut s = QuadraticSurd { a, b, d, c };
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        if self.c.is_negative() {
            self.a = -&self.a;
            self.b = -&self.b;
            self.c = -&self.c;
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a = &self.a / &g;
            self.b = &self.b / &g;
            self.c = &self.c / &g;
        }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// Parse the literal syntax `"(a+b*sqrt(d))/c"`, e.g. `"(-1+1*sqrt(5))/2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad surd literal: {s:?}"));
        let s = s.trim();
        let rest = s.strip_prefix('(').ok_or_else(bad)?;
        let (inner, tail) = rest.rsplit_once(')').ok_or_else(bad)?;
        let c_str = tail.strip_prefix('/').ok_or_else(bad)?;
        let (b_str, d_part) = inner.split_once("*sqrt(").ok_or_else(bad)?;
        let d_str = d_part.strip_suffix(')').ok_or_else(bad)?;
        // split "a+b" at the sign separating the two integers; try each
        // candidate so forms like "0+-1" parse
        let (a_val, b_val) = b_str
            .char_indices()
            .skip(1)
            .filter(|(_, ch)| *ch == '+' || *ch == '-')
            .find_map(|(i, _)| {
                let (a_part, b_part) = b_str.split_at(i);
                let b_part = b_part.strip_prefix('+').unwrap_or(b_part);
                match (a_part.parse::<BigInt>(), b_part.parse::<BigInt>()) {
                    (Ok(a), Ok(b)) => Some((a, b)),
                    _ => None,
                }
            })
            .ok_or_else(bad)?;
        let d_val: BigInt = d_str.parse().map_err(|_| bad())?;
        let c_val: BigInt = c_str.parse().map_err(|_| bad())?;
        QuadraticSurd::new(a_val, b_val, d_val, c_val)
    }

    /// Sign of `a + b*sqrt(d)` for integer a, b.
    fn sign_linear(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
        match (a.sign(), b.sign()) {
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => Ordering::Equal,
            (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => Ordering::Less,
            (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => Ordering::Greater,
            (num_bigint::Sign::NoSign, s) | (s, num_bigint::Sign::NoSign) => match s {
                num_bigint::Sign::Plus => Ordering::Greater,
                num_bigint::Sign::Minus => Ordering::Less,
                num_bigint::Sign::NoSign => Ordering::Equal,
            },
            // opposite signs: compare a^2 against b^2 d
            _ => {
                let lhs = a * a;
                let rhs = b * b * d;
                if a.is_positive() {
                    // a > 0, b < 0: a + b sqrt(d) > 0 iff a^2 > b^2 d
                    lhs.cmp(&rhs)
                } else {
                    rhs.cmp(&lhs)
                }
            }
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // (a + b sqrt d)/c vs p/q  <=>  sign of (a q - p c) + b q sqrt(d)
        let lin_a = &self.a * r.denom() - r.numer() * &self.c;
        let lin_b = &self.b * r.denom();
        QuadraticSurd::sign_linear(&lin_a, &lin_b, &self.d)
    }

    pub fn is_positive(&self) -> bool {
        QuadraticSurd::sign_linear(&self.a, &self.b, &self.d) == Ordering::Greater
    }

    /// Exact floor. Uses the integer square root of `b^2 d`.
    pub fn floor(&self) -> BigInt {
        // floor(b sqrt(d)) for b != 0: isqrt(b^2 d) if b > 0, else -isqrt - 1
        // (b^2 d is never a perfect square since d is not).
        let sq = &self.b * &self.b * &self.d;
        let root = sq.sqrt();
        let floor_lin = if self.b.is_positive() {
            root
        } else {
            -root - BigInt::one()
        };
        (&self.a + floor_lin).div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        // irrational, so ceil = floor + 1
        self.floor() + BigInt::one()
    }

    /// Exact image under a Möbius matrix: `(m.a x + m.b) / (m.c x + m.d)`.
    pub fn mobius(&self, m: &MobiusMatrix) -> QuadraticSurd {
        // numerator:  (m.a a + m.b c) + m.a b sqrt(d), all over c
        // denominator:(m.c a + m.d c) + m.c b sqrt(d), all over c
        let na = &m.a * &self.a + &m.b * &self.c;
        let nb = &m.a * &self.b;
        let ea = &m.c * &self.a + &m.d * &self.c;
        let eb = &m.c * &self.b;
        // rationalize by (ea - eb sqrt d); e = ea^2 - eb^2 d != 0 since the
        // denominator is irrational or a nonzero rational
        let e = &ea * &ea - &eb * &eb * &self.d;
        assert!(!e.is_zero(), "Möbius image of surd hit a pole");
        let ra = &na * &ea - &nb * &eb * &self.d;
        let rb = &nb * &ea - &na * &eb;
        debug_assert!(!rb.is_zero(), "Möbius image collapsed to a rational");
        let mut s = QuadraticSurd {
            a: ra,
            b: rb,
            d: self.d.clone(),
            c: e,
        };
        s.normalize();
        s
    }

    /// `self - n` for an integer n.
    pub fn sub_int(&self, n: &BigInt) -> QuadraticSurd {
        let mut s = QuadraticSurd {
            a: &self.a - n * &self.c,
            b: self.b.clone(),
            d: self.d.clone(),
            c: self.c.clone(),
        };
        s.normalize();
        s
    }

    /// Absolute value of `self - r`, still a surd.
    pub fn abs_sub_rational(&self, r: &Rational) -> QuadraticSurd {
        let mut s = QuadraticSurd {
            a: &self.a * r.denom() - r.numer() * &self.c,
            b: &self.b * r.denom(),
            d: self.d.clone(),
            c: &self.c * r.denom(),
        };
        s.normalize();
        if !s.is_positive() {
            s.a = -&s.a;
            s.b = -&s.b;
        }
        s
    }

    /// Decimal digits of the fractional expansion, for oracle tests:
    /// returns floor(self * 10^digits).
    pub fn scaled_floor(&self, digits: u32) -> BigInt {
        let scale = BigInt::from(10).pow(digits);
        let scaled = QuadraticSurd {
            a: &self.a * &scale,
            b: &self.b * &scale,
            d: self.d.clone(),
            c: self.c.clone(),
        };
        scaled.floor()
    }
}
