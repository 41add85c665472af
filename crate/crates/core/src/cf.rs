//! Digit expansions and convergent tables for the regular (RCF) and
//! backward (BCF) continued fractions.
//!
//! RCF: `x = a0 + 1/(a1 + 1/(a2 + ...))`, digits `a_n >= 1`.
//! BCF: `x = b0 - 1/(b1 - 1/(b2 - ...))`, digits `b_n >= 2`.
//!
//! For irrationals `b0 = floor(x) + 1`; rationals use the classical finite
//! convention `b0 = ceil(x)` (identical for non-integers), where the digit
//! step `b = ceil(1/(1-y))` terminates exactly when `1/(1-y)` is an integer.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{
    parse_rational, rational_ceil, rational_floor, MobiusMatrix, QuadraticSurd, Rational,
};

/// Which continued fraction an object belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CfKind {
    Rcf,
    Bcf,
}

impl CfKind {
    pub fn name(&self) -> &'static str {
        match self {
            CfKind::Rcf => "RCF",
            CfKind::Bcf => "BCF",
        }
    }

    fn min_digit(&self) -> u64 {
        match self {
            CfKind::Rcf => 1,
            CfKind::Bcf => 2,
        }
    }
}

impl fmt::Display for CfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exactly described input number.
#[derive(Clone, Debug)]
pub enum RealSource {
    Rational(Rational),
    Surd(QuadraticSurd),
    Stream(DigitStream),
}

impl RealSource {
    /// Parse a CLI literal: surd syntax first, then `num/den`.
    pub fn parse(s: &str) -> Result<RealSource> {
        if s.trim_start().starts_with('(') {
            return Ok(RealSource::Surd(QuadraticSurd::parse(s)?));
        }
        Ok(RealSource::Rational(parse_rational(s)?))
    }
}

/// A materialized digit expansion: integer part plus digits indexed from 1.
///
/// `terminated` marks a complete finite expansion of a rational; a stream
/// that is not terminated is a window onto a longer (possibly infinite)
/// expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitStream {
    kind: CfKind,
    integer_part: BigInt,
    digits: Vec<u64>,
    terminated: bool,
}

impl DigitStream {
    pub fn new(
        kind: CfKind,
        integer_part: impl Into<BigInt>,
        digits: Vec<u64>,
        terminated: bool,
    ) -> Result<Self> {
        let min = kind.min_digit();
        if let Some(&bad) = digits.iter().find(|&&d| d < min) {
            return Err(Error::MalformedStream(format!(
                "{kind} digit {bad} below the minimum {min}"
            )));
        }
        Ok(DigitStream {
            kind,
            integer_part: integer_part.into(),
            digits,
            terminated,
        })
    }

    pub fn kind(&self) -> CfKind {
        self.kind
    }

    pub fn integer_part(&self) -> &BigInt {
        &self.integer_part
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at 1-based position `n`.
    pub fn digit(&self, n: usize) -> Option<u64> {
        (n >= 1).then(|| self.digits.get(n - 1).copied()).flatten()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn expect_kind(&self, kind: CfKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                got: self.kind.name(),
            });
        }
        Ok(())
    }

    /// First `count` digits as a new window; a terminated stream stays
    /// terminated only when it fits entirely.
    pub fn truncated(&self, count: usize) -> DigitStream {
        if count >= self.digits.len() {
            return self.clone();
        }
        DigitStream {
            kind: self.kind,
            integer_part: self.integer_part.clone(),
            digits: self.digits[..count].to_vec(),
            terminated: false,
        }
    }

    /// Text form: kind, integer part, one digit per line, closing "." when
    /// terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(self.kind.name());
        out.push('\n');
        out.push_str(&self.integer_part.to_string());
        out.push('\n');
        for d in &self.digits {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        if self.terminated {
            out.push_str(".\n");
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<DigitStream> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let kind = match lines.next() {
            Some("RCF") => CfKind::Rcf,
            Some("BCF") => CfKind::Bcf,
            other => {
                return Err(Error::MalformedStream(format!(
                    "expected RCF or BCF header, got {other:?}"
                )))
            }
        };
        let b0: BigInt = lines
            .next()
            .ok_or_else(|| Error::MalformedStream("missing integer part".into()))?
            .parse()
            .map_err(|_| Error::MalformedStream("bad integer part".into()))?;
        let mut digits = Vec::new();
        let mut terminated = false;
        for line in lines {
            if line == "." {
                terminated = true;
                break;
            }
            let d: u64 = line
                .parse()
                .map_err(|_| Error::MalformedStream(format!("bad digit line {line:?}")))?;
            digits.push(d);
        }
        DigitStream::new(kind, b0, digits, terminated)
    }

    /// JSON mirror of the text form, e.g.
    /// `{"b0":1,"digits":[3,3,3],"kind":"BCF","terminated":false}`.
    pub fn to_json(&self) -> String {
        let key = match self.kind {
            CfKind::Rcf => "a0",
            CfKind::Bcf => "b0",
        };
        let digits: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        format!(
            "{{\"{key}\":{},\"digits\":[{}],\"kind\":\"{}\",\"terminated\":{}}}",
            self.integer_part,
            digits.join(","),
            self.kind.name(),
            self.terminated
        )
    }

    pub fn parse_json(text: &str) -> Result<DigitStream> {
        // hand-rolled: the format is flat and the crate avoids a serde
        // dependency; the CLI accepts the same object via serde_json.
        let bad = |m: &str| Error::MalformedStream(format!("bad stream JSON: {m}"));
        let text = text.trim();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("not an object"))?;
        let mut kind = None;
        let mut b0: Option<BigInt> = None;
        let mut digits: Option<Vec<u64>> = None;
        let mut terminated = false;
        let mut rest = inner;
        while !rest.trim().is_empty() {
            let (key, after) = rest
                .trim_start()
                .strip_prefix('"')
                .and_then(|t| t.split_once('"'))
                .ok_or_else(|| bad("missing key"))?;
            let after = after
                .trim_start()
                .strip_prefix(':')
                .ok_or_else(|| bad("missing colon"))?;
            let after = after.trim_start();
            let consumed;
            match key {
                "kind" => {
                    let (v, tail) = after
                        .strip_prefix('"')
                        .and_then(|t| t.split_once('"'))
                        .ok_or_else(|| bad("kind must be a string"))?;
                    kind = Some(match v {
                        "RCF" => CfKind::Rcf,
                        "BCF" => CfKind::Bcf,
                        _ => return Err(bad("kind must be RCF or BCF")),
                    });
                    consumed = tail;
                }
                "digits" => {
                    let t = after
                        .strip_prefix('[')
                        .ok_or_else(|| bad("digits must be an array"))?;
                    let (body, tail) = t.split_once(']').ok_or_else(|| bad("unclosed digits"))?;
                    let mut ds = Vec::new();
                    for part in body.split(',') {
                        let part = part.trim();
                        if part.is_empty() {
                            continue;
                        }
                        ds.push(part.parse().map_err(|_| bad("non-integer digit"))?);
                    }
                    digits = Some(ds);
                    consumed = tail;
                }
                "a0" | "b0" => {
                    let end = after.find([',', '}']).unwrap_or(after.len());
                    let (v, tail) = after.split_at(end);
                    b0 = Some(v.trim().parse().map_err(|_| bad("bad integer part"))?);
                    consumed = tail;
                }
                "terminated" => {
                    if let Some(tail) = after.strip_prefix("true") {
                        terminated = true;
                        consumed = tail;
                    } else if let Some(tail) = after.strip_prefix("false") {
                        terminated = false;
                        consumed = tail;
                    } else {
                        return Err(bad("terminated must be a boolean"));
                    }
                }
                _ => return Err(bad(&format!("unknown key {key:?}"))),
            }
            rest = consumed.trim_start().strip_prefix(',').unwrap_or(consumed);
        }
        DigitStream::new(
            kind.ok_or_else(|| bad("missing kind"))?,
            b0.ok_or_else(|| bad("missing integer part"))?,
            digits.unwrap_or_default(),
            terminated,
        )
    }

    /// Parse either the text or the JSON form.
    pub fn parse_any(text: &str) -> Result<DigitStream> {
        if text.trim_start().starts_with('{') {
            DigitStream::parse_json(text)
        } else {
            DigitStream::parse_text(text)
        }
    }
}

/// First `count` RCF partial quotients of `x`.
///
/// Rational inputs run the Euclidean algorithm and may terminate early; the
/// full finite stream is returned flagged `terminated` rather than erroring.
/// Stream sources pass through (a window of) themselves.
pub fn rcf_digits(x: &RealSource, count: usize) -> Result<DigitStream> {
    match x {
        RealSource::Stream(s) => {
            s.expect_kind(CfKind::Rcf)?;
            Ok(s.truncated(count))
        }
        RealSource::Rational(r) => {
            let a0 = rational_floor(r);
            let mut digits = Vec::new();
            let mut y = r - Rational::from(a0.clone());
            let mut terminated = true;
            while !y.is_zero() {
                if digits.len() >= count {
                    terminated = false;
                    break;
                }
                let inv = y.recip();
                let a = rational_floor(&inv);
                digits.push(big_to_digit(&a)?);
                y = inv - Rational::from(a);
            }
            DigitStream::new(CfKind::Rcf, a0, digits, terminated)
        }
        RealSource::Surd(s) => {
            let a0 = s.floor();
            let mut digits = Vec::with_capacity(count);
            let mut y = s.sub_int(&a0);
            let invert = MobiusMatrix::new(0, 1, 1, 0);
            for _ in 0..count {
                // y in (0,1) irrational; step: a = floor(1/y), y <- 1/y - a
                let inv = y.mobius(&invert);
                let a = inv.floor();
                digits.push(big_to_digit(&a)?);
                y = inv.sub_int(&a);
            }
            DigitStream::new(CfKind::Rcf, a0, digits, false)
        }
    }
}

/// First `count` BCF digits of `x`; every digit is at least 2.
pub fn bcf_digits(x: &RealSource, count: usize) -> Result<DigitStream> {
    match x {
        RealSource::Stream(s) => {
            s.expect_kind(CfKind::Bcf)?;
            Ok(s.truncated(count))
        }
        RealSource::Rational(r) => {
            let b0 = rational_ceil(r);
            // z_0 = b0 - x in [0,1); digit step b = ceil(1/z), z <- b - 1/z
            let mut z = Rational::from(b0.clone()) - r;
            let mut digits = Vec::new();
            let mut terminated = true;
            while !z.is_zero() {
                if digits.len() >= count {
                    terminated = false;
                    break;
                }
                let inv = z.recip();
                let b = rational_ceil(&inv);
                digits.push(big_to_digit(&b)?);
                z = Rational::from(b) - inv;
            }
            DigitStream::new(CfKind::Bcf, b0, digits, terminated)
        }
        RealSource::Surd(s) => {
            let b0 = s.ceil();
            let mut digits = Vec::with_capacity(count);
            // z = b0 - x in (0,1) irrational
            let negate_shift = MobiusMatrix::new(-1, 0, 0, 1);
            let mut z = s.sub_int(&b0).mobius(&negate_shift);
            let invert = MobiusMatrix::new(0, 1, 1, 0);
            for _ in 0..count {
                let inv = z.mobius(&invert);
                let b = inv.ceil();
                digits.push(big_to_digit(&b)?);
                z = inv.sub_int(&b).mobius(&negate_shift);
            }
            DigitStream::new(CfKind::Bcf, b0, digits, false)
        }
    }
}

fn big_to_digit(n: &BigInt) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::MalformedStream(format!("digit {n} exceeds u64")))
}

/// Paired numerator/denominator sequences with the seed rows at indices
/// -1 and 0 stored explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentTable {
    kind: CfKind,
    rows: Vec<(BigInt, BigInt)>, // rows[i] is index i-1
}

impl ConvergentTable {
    pub fn kind(&self) -> CfKind {
        self.kind
    }

    /// Row for index `n >= -1`.
    pub fn row(&self, n: i64) -> Option<(&BigInt, &BigInt)> {
        let idx = usize::try_from(n + 1).ok()?;
        self.rows.get(idx).map(|(p, q)| (p, q))
    }

    /// Largest stored index.
    pub fn max_index(&self) -> i64 {
        self.rows.len() as i64 - 2
    }

    /// Convergent value p_n/q_n.
    pub fn value(&self, n: i64) -> Option<Rational> {
        let (p, q) = self.row(n)?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(p.clone(), q.clone()))
    }

    pub fn rows_from_zero(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> {
        self.rows.iter().skip(1).map(|(p, q)| (p, q))
    }
}

/// RCF convergents by `p_n = a_n p_{n-1} + p_{n-2}`, rows 0..=count.
pub fn rcf_convergents(stream: &DigitStream, count: usize) -> Result<ConvergentTable> {
    stream.expect_kind(CfKind::Rcf)?;
    if count > stream.len() {
        return Err(Error::InsufficientDigits {
            needed: count,
            available: stream.len(),
        });
    }
    let mut rows = Vec::with_capacity(count + 2);
    rows.push((BigInt::one(), BigInt::zero())); // index -1
    rows.push((stream.integer_part().clone(), BigInt::one())); // index 0
    for n in 1..=count {
        let a = BigInt::from(stream.digit(n).unwrap());
        let (p1, q1) = rows[n].clone();
        let (p2, q2) = rows[n - 1].clone();
        rows.push((&a * p1 + p2, &a * q1 + q2));
    }
    Ok(ConvergentTable {
        kind: CfKind::Rcf,
        rows,
    })
}

/// BCF convergents by `r_n = b_n r_{n-1} - r_{n-2}`, rows 0..=count.
pub fn bcf_convergents(stream: &DigitStream, count: usize) -> Result<ConvergentTable> {
    stream.expect_kind(CfKind::Bcf)?;
    if count > stream.len() {
        return Err(Error::InsufficientDigits {
            needed: count,
            available: stream.len(),
        });
    }
    let mut rows = Vec::with_capacity(count + 2);
    rows.push((BigInt::one(), BigInt::zero())); // index -1
    rows.push((stream.integer_part().clone(), BigInt::one())); // index 0
    for n in 1..=count {
        let b = BigInt::from(stream.digit(n).unwrap());
        let (r1, s1) = rows[n].clone();
        let (r2, s2) = rows[n - 1].clone();
        rows.push((&b * r1 - r2, &b * s1 - s2));
    }
    Ok(ConvergentTable {
        kind: CfKind::Bcf,
        rows,
    })
}

/// Exact value of a fully terminated finite stream.
pub fn eval_terminated(stream: &DigitStream) -> Result<Rational> {
    if !stream.is_terminated() {
        return Err(Error::InvalidInput(
            "eval_terminated requires a terminated stream".into(),
        ));
    }
    let table = match stream.kind() {
        CfKind::Rcf => rcf_convergents(stream, stream.len())?,
        CfKind::Bcf => bcf_convergents(stream, stream.len())?,
    };
    table
        .value(stream.len() as i64)
        .ok_or_else(|| Error::MalformedStream("terminated stream has no value".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> RealSource {
        RealSource::parse(s).unwrap()
    }

    fn golden() -> RealSource {
        RealSource::Surd(QuadraticSurd::parse("(-1+1*sqrt(5))/2").unwrap())
    }

    #[test]
    fn rcf_of_415_over_93() {
        let s = rcf_digits(&rat("415/93"), 4).unwrap();
        assert_eq!(s.integer_part(), &BigInt::from(4));
        assert_eq!(s.digits(), &[2, 6, 7]);
        assert!(s.is_terminated());
    }

    #[test]
    fn rcf_of_golden_ratio_is_all_ones() {
        let s = rcf_digits(&golden(), 5).unwrap();
        assert_eq!(s.integer_part(), &BigInt::zero());
        assert_eq!(s.digits(), &[1, 1, 1, 1, 1]);
        assert!(!s.is_terminated());
    }

    #[test]
    fn rcf_of_one_third_terminates() {
        let s = rcf_digits(&rat("1/3"), 5).unwrap();
        assert_eq!(s.integer_part(), &BigInt::zero());
        assert_eq!(s.digits(), &[3]);
        assert!(s.is_terminated());
    }

    #[test]
    fn bcf_of_one_half() {
        let s = bcf_digits(&rat("1/2"), 3).unwrap();
        assert_eq!(s.integer_part(), &BigInt::one());
        assert_eq!(s.digits(), &[2]);
        assert!(s.is_terminated());
    }

    #[test]
    fn bcf_of_golden_ratio_is_all_threes() {
        let s = bcf_digits(&golden(), 4).unwrap();
        assert_eq!(s.integer_part(), &BigInt::one());
        assert_eq!(s.digits(), &[3, 3, 3, 3]);
    }

    #[test]
    fn bcf_of_sqrt2_minus_1_alternates() {
        let x = RealSource::Surd(QuadraticSurd::parse("(-1+1*sqrt(2))/1").unwrap());
        let s = bcf_digits(&x, 4).unwrap();
        assert_eq!(s.integer_part(), &BigInt::one());
        assert_eq!(s.digits(), &[2, 4, 2, 4]);
    }

    #[test]
    fn bcf_of_integer_is_empty() {
        let s = bcf_digits(&rat("7"), 3).unwrap();
        assert_eq!(s.integer_part(), &BigInt::from(7));
        assert!(s.digits().is_empty());
        assert!(s.is_terminated());
        assert_eq!(eval_terminated(&s).unwrap(), parse_rational("7").unwrap());
    }

    #[test]
    fn rcf_convergent_table_of_415_over_93() {
        let s = rcf_digits(&rat("415/93"), 3).unwrap();
        let t = rcf_convergents(&s, 3).unwrap();
        let expect = ["4/1", "9/2", "58/13", "415/93"];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(t.value(n as i64).unwrap(), parse_rational(e).unwrap());
        }
    }

    #[test]
    fn fibonacci_denominators_for_all_ones() {
        let s = DigitStream::new(CfKind::Rcf, 0, vec![1; 5], false).unwrap();
        let t = rcf_convergents(&s, 5).unwrap();
        let qs: Vec<BigInt> = t.rows_from_zero().map(|(_, q)| q.clone()).collect();
        let expect: Vec<BigInt> = [1u64, 1, 2, 3, 5, 8].iter().map(|&x| x.into()).collect();
        assert_eq!(qs, expect);
    }

    #[test]
    fn zeroth_convergent_only() {
        let s = DigitStream::new(CfKind::Rcf, 9, vec![], true).unwrap();
        let t = rcf_convergents(&s, 0).unwrap();
        assert_eq!(t.value(0).unwrap(), parse_rational("9").unwrap());
        assert_eq!(t.max_index(), 0);
    }

    #[test]
    fn bcf_convergents_of_all_threes() {
        let s = DigitStream::new(CfKind::Bcf, 1, vec![3, 3, 3], false).unwrap();
        let t = bcf_convergents(&s, 3).unwrap();
        let expect = ["1/1", "2/3", "5/8", "13/21"];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(t.value(n as i64).unwrap(), parse_rational(e).unwrap());
        }
    }

    #[test]
    fn bcf_convergents_short_and_all_twos() {
        let s = DigitStream::new(CfKind::Bcf, 1, vec![2], true).unwrap();
        let t = bcf_convergents(&s, 1).unwrap();
        assert_eq!(t.value(0).unwrap(), parse_rational("1").unwrap());
        assert_eq!(t.value(1).unwrap(), parse_rational("1/2").unwrap());

        // s_n = n+1 for an all-2 stream; the truncation value is r_n/s_n = 1/(n+1)
        let s = DigitStream::new(CfKind::Bcf, 1, vec![2, 2, 2], false).unwrap();
        let t = bcf_convergents(&s, 3).unwrap();
        let ss: Vec<BigInt> = t.rows_from_zero().map(|(_, q)| q.clone()).collect();
        let expect: Vec<BigInt> = [1u64, 2, 3, 4].iter().map(|&x| x.into()).collect();
        assert_eq!(ss, expect);
        assert_eq!(t.value(3).unwrap(), parse_rational("1/4").unwrap());
    }

    #[test]
    fn convergents_error_on_missing_digits() {
        let s = DigitStream::new(CfKind::Rcf, 0, vec![3], true).unwrap();
        assert_eq!(
            rcf_convergents(&s, 2).unwrap_err(),
            Error::InsufficientDigits {
                needed: 2,
                available: 1
            }
        );
    }

    #[test]
    fn stream_kind_is_enforced() {
        let s = DigitStream::new(CfKind::Bcf, 1, vec![3], false).unwrap();
        assert!(matches!(
            rcf_convergents(&s, 1),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            rcf_digits(&RealSource::Stream(s), 1),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn digit_bounds_are_validated() {
        assert!(DigitStream::new(CfKind::Bcf, 1, vec![1], false).is_err());
        assert!(DigitStream::new(CfKind::Rcf, 0, vec![0], false).is_err());
    }

    #[test]
    fn text_round_trip() {
        let s = bcf_digits(&rat("1/2"), 3).unwrap();
        let text = s.to_text();
        assert_eq!(text, "BCF\n1\n2\n.\n");
        assert_eq!(DigitStream::parse_text(&text).unwrap(), s);
        let w = DigitStream::new(CfKind::Rcf, -2, vec![1, 5], false).unwrap();
        assert_eq!(DigitStream::parse_text(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn json_round_trip() {
        let s = DigitStream::new(CfKind::Bcf, 1, vec![3, 3, 3], false).unwrap();
        let json = s.to_json();
        assert_eq!(
            json,
            "{\"b0\":1,\"digits\":[3,3,3],\"kind\":\"BCF\",\"terminated\":false}"
        );
        assert_eq!(DigitStream::parse_json(&json).unwrap(), s);
        // spec-ordered keys parse too
        let alt = "{\"kind\":\"BCF\",\"b0\":1,\"digits\":[3,3,3],\"terminated\":false}";
        assert_eq!(DigitStream::parse_json(alt).unwrap(), s);
        assert_eq!(DigitStream::parse_any(alt).unwrap(), s);
    }

    #[test]
    fn bcf_truncation_error_shrinks_monotonically() {
        // |x - r_n/s_n| strictly decreases for the golden ratio conjugate
        let x = QuadraticSurd::parse("(-1+1*sqrt(5))/2").unwrap();
        let stream = bcf_digits(&RealSource::Surd(x.clone()), 20).unwrap();
        let table = bcf_convergents(&stream, 20).unwrap();
        let mut last: Option<QuadraticSurd> = None;
        for n in 0..=20i64 {
            let err = x.abs_sub_rational(&table.value(n).unwrap());
            if let Some(prev) = last {
                assert!(surd_less(&err, &prev), "n = {n}");
            }
            last = Some(err);
        }
    }

    // order two surds by their 80-digit decimal expansions; the strictness
    // guard makes the comparison exact for separated values
    fn surd_less(x: &QuadraticSurd, y: &QuadraticSurd) -> bool {
        let sx = x.scaled_floor(80);
        let sy = y.scaled_floor(80);
        assert_ne!(sx, sy, "decimal oracle cannot separate the errors");
        sx < sy
    }

    #[test]
    fn terminated_value_round_trip() {
        for lit in ["415/93", "2/5", "5/12", "-7/3", "22/7"] {
            let x = parse_rational(lit).unwrap();
            let r = rcf_digits(&rat(lit), 64).unwrap();
            assert_eq!(eval_terminated(&r).unwrap(), x, "RCF {lit}");
            let b = bcf_digits(&rat(lit), 1 << 16).unwrap();
            assert_eq!(eval_terminated(&b).unwrap(), x, "BCF {lit}");
        }
    }
}
