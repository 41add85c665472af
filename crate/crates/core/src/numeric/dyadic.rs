//! Directed-rounding interval arithmetic with dyadic endpoints.
//!
//! Endpoints are exact rationals whose denominators are kept to powers of
//! two by outward rounding after every operation, so long computations stay
//! fast while every enclosure remains mathematically valid. The enclosures
//! feed floor computations of exponentials, certified logarithms for
//! pressure sums and distortion, and rational powers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rational_floor, Rational};
use crate::error::{Error, Result};

fn round_down(x: &Rational, bits: u32) -> Rational {
    let scaled = x.numer() << bits;
    Rational::new(scaled.div_floor(x.denom()), BigInt::one() << bits)
}

fn round_up(x: &Rational, bits: u32) -> Rational {
    let scaled = x.numer() << bits;
    Rational::new(scaled.div_ceil(x.denom()), BigInt::one() << bits)
}

/// Closed interval `[lo, hi]` of exact rationals enclosing a real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: Rational,
    hi: Rational,
}

impl DyadicInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted interval");
        DyadicInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        DyadicInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        DyadicInterval::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from(BigInt::from(2))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Round endpoints outward to denominators dividing `2^bits`.
    pub fn outward(&self, bits: u32) -> Self {
        DyadicInterval {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn add(&self, rhs: &Self, bits: u32) -> Self {
        DyadicInterval {
            lo: round_down(&(&self.lo + &rhs.lo), bits),
            hi: round_up(&(&self.hi + &rhs.hi), bits),
        }
    }

    pub fn sub(&self, rhs: &Self, bits: u32) -> Self {
        DyadicInterval {
            lo: round_down(&(&self.lo - &rhs.hi), bits),
            hi: round_up(&(&self.hi - &rhs.lo), bits),
        }
    }

    pub fn neg(&self) -> Self {
        DyadicInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, rhs: &Self, bits: u32) -> Self {
        let candidates = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        DyadicInterval {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
        }
    }

    /// Multiply by an exact rational.
    pub fn scale(&self, r: &Rational, bits: u32) -> Self {
        let (lo, hi) = if r.is_negative() {
            (&self.hi * r, &self.lo * r)
        } else {
            (&self.lo * r, &self.hi * r)
        };
        DyadicInterval {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
        }
    }

    /// Division for a numerator >= 0 and a strictly positive denominator.
    pub fn div_pos(&self, rhs: &Self, bits: u32) -> Self {
        assert!(rhs.lo.is_positive(), "division by interval touching zero");
        assert!(
            !self.lo.is_negative(),
            "div_pos expects nonnegative numerator"
        );
        DyadicInterval {
            lo: round_down(&(&self.lo / &rhs.hi), bits),
            hi: round_up(&(&self.hi / &rhs.lo), bits),
        }
    }

    /// Reciprocal of a strictly positive interval.
    pub fn recip_pos(&self, bits: u32) -> Self {
        assert!(self.lo.is_positive());
        DyadicInterval {
            lo: round_down(&self.hi.recip(), bits),
            hi: round_up(&self.lo.recip(), bits),
        }
    }

    /// Hull of two intervals.
    pub fn hull(&self, rhs: &Self) -> Self {
        DyadicInterval {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
        }
    }

    /// The integer floor if it is the same for both endpoints.
    pub fn unambiguous_floor(&self) -> Option<BigInt> {
        let lo = rational_floor(&self.lo);
        let hi = rational_floor(&self.hi);
        (lo == hi).then_some(lo)
    }

    /// Approximate midpoint as f64, for report rendering only.
    pub fn to_f64(&self) -> f64 {
        let m = self.midpoint();
        m.numer().to_f64().unwrap_or(f64::NAN) / m.denom().to_f64().unwrap_or(f64::NAN)
    }
}

// The series cores run on fixed-point mantissas (value = m / 2^scale) so
// the inner loops are plain big-integer multiplies and directed divisions;
// rationals only appear at the boundaries.

fn mantissa_floor(x: &Rational, scale: u32) -> BigInt {
    (x.numer() << scale).div_floor(x.denom())
}

fn mantissa_ceil(x: &Rational, scale: u32) -> BigInt {
    (x.numer() << scale).div_ceil(x.denom())
}

fn from_mantissas(lo: BigInt, hi: BigInt, scale: u32) -> DyadicInterval {
    let den = BigInt::one() << scale;
    DyadicInterval::new(Rational::new(lo, den.clone()), Rational::new(hi, den))
}

/// Taylor series for `exp(x)` with `x >= 0`, certified tail bound, width
/// about `2^-bits` absolutely.
fn exp_series(x: &Rational, bits: u32) -> DyadicInterval {
    debug_assert!(!x.is_negative());
    let scale = bits + 24;
    let one = BigInt::one() << scale;
    let x_lo = mantissa_floor(x, scale);
    let x_hi = mantissa_ceil(x, scale);
    let mut term_lo = one.clone();
    let mut term_hi = one.clone();
    let mut sum_lo = term_lo.clone();
    let mut sum_hi = term_hi.clone();
    let threshold = BigInt::one() << 20; // 2^-(bits+4) at this scale
    let mut i: u64 = 1;
    loop {
        let div = BigInt::from(i) << scale;
        term_lo = (&term_lo * &x_lo).div_floor(&div);
        term_hi = (&term_hi * &x_hi).div_ceil(&div);
        sum_lo += &term_lo;
        sum_hi += &term_hi;
        // once x/(i+1) < 1/2 the tail is dominated by a geometric series
        let next_div = BigInt::from(i + 1) << scale;
        if &x_hi + &x_hi < next_div {
            let next_hi = (&term_hi * &x_hi).div_ceil(&next_div);
            if next_hi < threshold {
                sum_hi += &next_hi + &next_hi;
                return from_mantissas(sum_lo, sum_hi, scale).outward(bits);
            }
        }
        i += 1;
    }
}

/// Certified enclosure of `exp(x)` with absolute width at most `2^-bits`
/// (plus rounding slack of a couple of ulps at that scale).
pub fn exp_enclosure(x: &Rational, bits: u32) -> DyadicInterval {
    if x.is_zero() {
        return DyadicInterval::point(Rational::one());
    }
    if x.is_negative() {
        // exp(x) <= 1, so relative precision at `bits` suffices
        let pos = exp_series(&-x, bits + 4);
        return pos.recip_pos(bits);
    }
    exp_series(x, bits)
}

/// atanh series `sum z^(2k+1)/(2k+1)` for `|z| <= 1/3`-ish arguments,
/// computed on `|z|` in fixed point and reflected for negative `z`.
fn atanh_series(z: &Rational, bits: u32) -> DyadicInterval {
    let negative = z.is_negative();
    let z_abs = z.abs();
    debug_assert!(z_abs < Rational::new(BigInt::one(), BigInt::from(2)));
    let scale = bits + 24;
    let z_lo = mantissa_floor(&z_abs, scale);
    let z_hi = mantissa_ceil(&z_abs, scale);
    let unit = BigInt::one() << scale;
    let z2_lo = (&z_lo * &z_lo).div_floor(&unit);
    let z2_hi = (&z_hi * &z_hi).div_ceil(&unit);
    let mut pow_lo = z_lo;
    let mut pow_hi = z_hi;
    let mut sum_lo = pow_lo.clone();
    let mut sum_hi = pow_hi.clone();
    let threshold = BigInt::one() << 20;
    let mut k: u64 = 1;
    loop {
        pow_lo = (&pow_lo * &z2_lo).div_floor(&unit);
        pow_hi = (&pow_hi * &z2_hi).div_ceil(&unit);
        let d = BigInt::from(2 * k + 1);
        sum_lo += pow_lo.div_floor(&d);
        sum_hi += pow_hi.div_ceil(&d);
        // tail <= |z|^(2k+3)/(2k+3) / (1 - z^2) <= 2 * next power
        let next_hi = (&pow_hi * &z2_hi).div_ceil(&unit);
        if next_hi < threshold {
            sum_hi += &next_hi + &next_hi;
            let out = from_mantissas(sum_lo, sum_hi, scale);
            let out = if negative { out.neg() } else { out };
            return out.outward(bits);
        }
        k += 1;
    }
}

fn ln2_enclosure(bits: u32) -> DyadicInterval {
    thread_local! {
        static CACHE: std::cell::RefCell<Option<(u32, DyadicInterval)>> =
            const { std::cell::RefCell::new(None) };
    }
    CACHE.with(|cache| {
        let mut slot = cache.borrow_mut();
        if let Some((cached_bits, value)) = slot.as_ref() {
            if *cached_bits >= bits {
                return value.clone().outward(bits);
            }
        }
        // ln 2 = 2 atanh(1/3)
        let z = Rational::new(BigInt::one(), BigInt::from(3));
        let value = atanh_series(&z, bits + 2).scale(&Rational::from(BigInt::from(2)), bits);
        *slot = Some((bits, value.clone()));
        value
    })
}

/// Certified enclosure of `ln(x)` for exact rational `x > 0`, with width
/// about `2^-bits`.
pub fn ln_enclosure(x: &Rational, bits: u32) -> DyadicInterval {
    assert!(x.is_positive(), "ln of a non-positive value");
    if x.is_one() {
        return DyadicInterval::zero();
    }
    // Scale by 2^e so the mantissa m lands in [3/4, 3/2).
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = Rational::from(BigInt::from(2));
    let mut m = if e >= 0 {
        x / Rational::from(BigInt::one() << (e as u64))
    } else {
        x * Rational::from(BigInt::one() << ((-e) as u64))
    };
    while m >= Rational::new(BigInt::from(3), BigInt::from(2)) {
        m = &m / &two;
        e += 1;
    }
    while m < Rational::new(BigInt::from(3), BigInt::from(4)) {
        m = &m * &two;
        e -= 1;
    }
    // z = (m-1)/(m+1) in [-1/7, 1/5]; the series works on directed
    // fixed-point mantissas of z, so huge numerators cost two divisions.
    let z_exact = (&m - Rational::one()) / (&m + Rational::one());
    let work = bits + 16;
    let ln_m = atanh_series(&z_exact, work).scale(&Rational::from(BigInt::from(2)), work);
    if e == 0 {
        return ln_m.outward(bits);
    }
    let extra = 64 - (e.unsigned_abs().leading_zeros().min(63));
    let ln2 = ln2_enclosure(bits + extra + 4);
    ln_m.add(&ln2.scale(&Rational::from(BigInt::from(e)), work), work)
        .outward(bits)
}

/// Certified enclosure of `ln(n)` for a positive big integer.
pub fn ln_enclosure_big(n: &BigInt, bits: u32) -> DyadicInterval {
    ln_enclosure(&Rational::from(n.clone()), bits)
}

/// Certified enclosure of `base^expo = exp(expo * ln base)` for `base > 0`.
pub fn pow_enclosure(base: &Rational, expo: &Rational, bits: u32) -> DyadicInterval {
    if expo.is_zero() {
        return DyadicInterval::point(Rational::one());
    }
    if expo.is_integer() && expo.numer().magnitude().bits() < 16 {
        // small integer powers are exact
        let n = expo.numer().to_i64().unwrap();
        let p = if n >= 0 {
            num_traits::pow::pow(base.clone(), n as usize)
        } else {
            num_traits::pow::pow(base.clone(), (-n) as usize).recip()
        };
        return DyadicInterval::point(p);
    }
    // widen the log precision to absorb |expo| and the magnitude of the log
    let mut extra = 8u32;
    loop {
        let ln_b = ln_enclosure(base, bits + extra);
        let arg = ln_b.scale(expo, bits + extra);
        let magnitude = arg.hi().abs().max(arg.lo().abs());
        let mag_bits = (rational_floor(&magnitude).bits() as u32).saturating_add(2);
        let out = exp_enclosure(arg.lo(), bits + extra + mag_bits)
            .hull(&exp_enclosure(arg.hi(), bits + extra + mag_bits));
        if out.width() <= Rational::new(BigInt::one(), BigInt::one() << bits) || extra >= 512 {
            return out.outward(bits);
        }
        extra *= 2;
    }
}

/// Exact `floor(exp(lambda * m))` by interval refinement.
///
/// For rational `lambda > 0` the value `e^(lambda m)` is irrational, so the
/// refinement always terminates; the budget guard only trips on inputs that
/// pin an exponential within `2^-128` of an integer.
pub fn floor_exp(lambda: &Rational, m: u64) -> Result<BigInt> {
    if lambda.is_negative() {
        return Err(Error::InvalidInput("floor_exp requires lambda >= 0".into()));
    }
    let r = lambda * Rational::from(BigInt::from(m));
    if r.is_zero() {
        return Ok(BigInt::one());
    }
    // absolute precision must exceed the magnitude of e^r
    let magnitude_bits = {
        let ceil_r = rational_floor(&r)
            .to_u64()
            .unwrap_or(u64::MAX)
            .saturating_add(1);
        ((ceil_r as f64) * std::f64::consts::LOG2_E).ceil() as u32 + 8
    };
    let mut bits = 64u32;
    loop {
        let enc = exp_enclosure(&r, bits + magnitude_bits);
        if let Some(f) = enc.unambiguous_floor() {
            return Ok(f);
        }
        if bits >= 128 {
            return Err(Error::RefinementBudgetExceeded);
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exp_of_zero_is_exactly_one() {
        assert_eq!(floor_exp(&Rational::zero(), 7).unwrap(), BigInt::one());
    }

    #[test]
    fn floor_exp_small_arguments() {
        // e^0.2 = 1.2214..., e^2.4 = 11.0231...
        assert_eq!(floor_exp(&rat("1/10"), 2).unwrap(), BigInt::from(1));
        assert_eq!(floor_exp(&rat("1/10"), 24).unwrap(), BigInt::from(11));
    }

    #[test]
    fn floor_exp_large_argument() {
        // e^19.2 = 217998774.679...; cross-checked by the independent
        // scaled-series oracle in tests/oracles.rs.
        assert_eq!(
            floor_exp(&rat("1/10"), 192).unwrap(),
            BigInt::from(217998774u64)
        );
    }

    #[test]
    fn ln_encloses_known_values() {
        let l = ln_enclosure(&rat("2"), 80);
        // ln 2 = 0.693147180559945...
        let lo = rat("693147180559945/1000000000000000");
        let hi = rat("693147180559946/1000000000000000");
        assert!(l.lo() > &(lo - rat("1/1000000000000")));
        assert!(l.hi() < &(hi + rat("1/1000000000000")));
        assert!(l.width() <= Rational::new(BigInt::one(), BigInt::one() << 78));
        // exact zero
        assert_eq!(ln_enclosure(&Rational::one(), 64), DyadicInterval::zero());
        // huge rationals reduce fine
        let big = Rational::new(BigInt::from(10).pow(50) + 7, BigInt::from(3));
        let lb = ln_enclosure(&big, 64);
        assert!(lb.width() <= Rational::new(BigInt::one(), BigInt::one() << 60));
        // 50 ln 10 - ln 3 = 114.0307...
        assert!(lb.contains(&rat("114031/1000")) || lb.hi() < &rat("1141/10"));
        assert!(lb.lo() > &rat("114") && lb.hi() < &rat("115"));
    }

    #[test]
    fn pow_matches_exact_square_roots() {
        let p = pow_enclosure(&rat("1/4"), &rat("1/2"), 80);
        assert!(p.contains(&rat("1/2")));
        assert!(p.width() <= Rational::new(BigInt::one(), BigInt::one() << 78));
        let q = pow_enclosure(&rat("1/9"), &rat("3"), 40);
        assert_eq!(q, DyadicInterval::point(rat("1/729")));
    }

    #[test]
    fn negative_exponents_via_reciprocal() {
        let e_neg = exp_enclosure(&rat("-1"), 80);
        // 1/e = 0.367879441171442321...
        assert!(e_neg.lo() > &rat("367879441171442321/1000000000000000000"));
        assert!(e_neg.hi() < &rat("367879441171442322/1000000000000000000"));
        assert!(e_neg.width() <= Rational::new(BigInt::one(), BigInt::one() << 78));
    }

    #[test]
    fn interval_ops_round_outward() {
        let a = DyadicInterval::point(rat("1/3")).outward(8);
        assert!(a.lo() < a.hi());
        assert!(a.contains(&rat("1/3")));
        assert!(a.width() <= rat("1/128"));
        let b = a.mul(&a, 16);
        assert!(b.contains(&rat("1/9")));
        let c = a.div_pos(&a, 16);
        assert!(c.contains(&Rational::one()));
    }
}
