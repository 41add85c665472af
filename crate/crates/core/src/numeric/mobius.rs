//! Integer 2x2 matrices acting on the line by fractional linear maps.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::{QuadraticSurd, Rational};

/// A Möbius transformation `x -> (a x + b) / (c x + d)` stored as the
/// integer matrix `[[a, b], [c, d]]` with `ad - bc != 0`.
///
/// Word composition of IFS maps is matrix multiplication, so long digit
/// words reduce to a single exact matrix product.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MobiusMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl fmt::Debug for MobiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl MobiusMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        let m = MobiusMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        debug_assert!(!m.determinant().is_zero(), "singular Möbius matrix");
        m
    }

    pub fn identity() -> Self {
        MobiusMatrix::new(1, 0, 0, 1)
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Matrix product `self * rhs`, i.e. the map `self ∘ rhs`.
    pub fn compose(&self, rhs: &MobiusMatrix) -> MobiusMatrix {
        MobiusMatrix {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Image of a rational point. Panics if `x` is the pole.
    pub fn apply(&self, x: &Rational) -> Rational {
        let num = &self.a * x.numer() + &self.b * x.denom();
        let den = &self.c * x.numer() + &self.d * x.denom();
        assert!(!den.is_zero(), "Möbius map evaluated at its pole");
        Rational::new(num, den)
    }

    /// Image of a quadratic surd; stays a surd over the same radicand.
    pub fn apply_surd(&self, x: &QuadraticSurd) -> QuadraticSurd {
        x.mobius(self)
    }

    /// Divide all four entries by their gcd, fixing the sign so the first
    /// nonzero entry of the bottom row is positive. Composition chains of
    /// determinant ±1 matrices never need this; it exists for comparing
    /// matrices produced along different routes.
    pub fn normalized(&self) -> MobiusMatrix {
        let mut g = self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d);
        if g.is_zero() {
            g = BigInt::one();
        }
        let mut m = MobiusMatrix {
            a: &self.a / &g,
            b: &self.b / &g,
            c: &self.c / &g,
            d: &self.d / &g,
        };
        let flip = if !m.c.is_zero() {
            m.c.is_negative()
        } else {
            m.d.is_negative()
        };
        if flip {
            m.a = -m.a;
            m.b = -m.b;
            m.c = -m.c;
            m.d = -m.d;
        }
        m
    }

    /// Derivative `|det| / (c x + d)^2` at a rational point.
    pub fn derivative_abs(&self, x: &Rational) -> Rational {
        let den = &self.c * x.numer() + &self.d * x.denom();
        assert!(!den.is_zero());
        let det = self.determinant().abs();
        Rational::new(det * x.denom() * x.denom(), &den * &den)
    }
}

use num_integer::Integer;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn m(a: i64, b: i64, c: i64, d: i64) -> MobiusMatrix {
        MobiusMatrix::new(a, b, c, d)
    }

    // BCF letter matrix: psi_i(x) = 1 - 1/(x + i - 1) = (x + i-2)/(x + i-1)
    fn bcf(i: i64) -> MobiusMatrix {
        m(1, i - 2, 1, i - 1)
    }

    #[test]
    fn identity_composes_trivially() {
        let m3 = bcf(3);
        assert_eq!(MobiusMatrix::identity().compose(&m3), m3);
        assert_eq!(m3.compose(&MobiusMatrix::identity()), m3);
    }

    #[test]
    fn letter_products_match_hand_multiplication() {
        // M2 * M3 = [[1,0],[1,1]] * [[1,1],[1,2]] = [[1,1],[2,3]]
        assert_eq!(bcf(2).compose(&bcf(3)), m(1, 1, 2, 3));
        // M3 * M3 = [[2,3],[3,5]]
        assert_eq!(bcf(3).compose(&bcf(3)), m(2, 3, 3, 5));
    }

    #[test]
    fn determinant_multiplies() {
        let p = bcf(2).compose(&bcf(5));
        assert_eq!(p.determinant(), BigInt::from(1));
        let gauss1 = m(0, 1, 1, 1);
        let q = gauss1.compose(&gauss1);
        assert_eq!(q.determinant(), BigInt::from(1));
        assert_eq!(gauss1.determinant(), BigInt::from(-1));
    }

    #[test]
    fn application_matches_formula() {
        let m23 = bcf(2).compose(&bcf(3));
        assert_eq!(
            m23.apply(&parse_rational("0").unwrap()),
            parse_rational("1/3").unwrap()
        );
        assert_eq!(
            m23.apply(&parse_rational("1").unwrap()),
            parse_rational("2/5").unwrap()
        );
    }

    #[test]
    fn derivative_of_determinant_one_words() {
        let m23 = bcf(2).compose(&bcf(3));
        // |psi'_{23}(x)| = 1/(2x+3)^2
        assert_eq!(
            m23.derivative_abs(&parse_rational("0").unwrap()),
            parse_rational("1/9").unwrap()
        );
        assert_eq!(
            m23.derivative_abs(&parse_rational("1").unwrap()),
            parse_rational("1/25").unwrap()
        );
    }

    #[test]
    fn normalization_is_stable() {
        let scaled = m(2, 2, 4, 6);
        assert_eq!(scaled.normalized(), m(1, 1, 2, 3));
        let negated = m(-1, -1, -2, -3);
        assert_eq!(negated.normalized(), m(1, 1, 2, 3));
    }
}
