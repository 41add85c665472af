//! Irrationality-exponent evidence and Good's criterion for Jarník sets.
//!
//! For an irrational `x` the exponent satisfies
//! `mu(x) = 2 + limsup log a_{n+1} / log q_n` over the RCF data, and the
//! same formula with `b_{n+1}, s_n` holds for the BCF when the 2-blocks are
//! bounded. A finite window cannot compute a limsup, so [`MuReport`] carries
//! the raw ratio sequence plus the supremum over the second half of the
//! window: evidence, not a value.
//!
//! Membership in `G(alpha)` is characterized by Good's criterion
//! `a_{n+1} > q_n^(alpha-2)` for infinitely many `n`; with rational alpha
//! that inequality is a pure big-integer comparison, so [`good_hits`] is
//! exact at every index it reports.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::cf::{bcf_convergents, rcf_convergents, CfKind, ConvergentTable, DigitStream};
use crate::error::{Error, Result};
use crate::numeric::{ln_enclosure, ln_enclosure_big, DyadicInterval, Rational};

/// Enclosure precision giving certified error well under 1e-12.
const LOG_BITS: u32 = 64;

/// Ratio evidence for the irrationality exponent over a digit window.
#[derive(Clone, Debug)]
pub struct MuReport {
    pub kind: CfKind,
    pub window: usize,
    /// `(n, log a_{n+1} / log q_n)` for every `n` in `[1, window)` with
    /// `q_n >= 2`, each certified to width <= 1e-12.
    pub ratios: Vec<(usize, DyadicInterval)>,
    /// Supremum of the ratios over the second half `[window/2, window)`.
    pub tail_sup: DyadicInterval,
    /// `2 + tail_sup`.
    pub mu_estimate: DyadicInterval,
}

fn mu_estimate_impl(
    stream: &DigitStream,
    window: usize,
    table: &ConvergentTable,
) -> Result<MuReport> {
    let mut ratios = Vec::new();
    let two = BigInt::from(2);
    let half = window / 2;
    let mut tail: Option<DyadicInterval> = None;
    for n in 1..window {
        let (_, q) = table.row(n as i64).expect("table rows cover the window");
        if q < &two {
            continue;
        }
        let a_next = BigInt::from(stream.digit(n + 1).expect("window+1 digits required"));
        let num = if a_next.is_one() {
            DyadicInterval::zero()
        } else {
            ln_enclosure_big(&a_next, LOG_BITS)
        };
        let den = ln_enclosure_big(q, LOG_BITS);
        let ratio = num.div_pos(&den, LOG_BITS);
        if n >= half {
            tail = Some(match tail {
                None => ratio.clone(),
                Some(t) => DyadicInterval::new(
                    t.lo().clone().max(ratio.lo().clone()),
                    t.hi().clone().max(ratio.hi().clone()),
                ),
            });
        }
        ratios.push((n, ratio));
    }
    let tail_sup = tail.unwrap_or_else(DyadicInterval::zero);
    let two_pt = DyadicInterval::point(Rational::from(BigInt::from(2)));
    let mu_estimate = two_pt.add(&tail_sup, LOG_BITS + 8);
    Ok(MuReport {
        kind: stream.kind(),
        window,
        ratios,
        tail_sup,
        mu_estimate,
    })
}

/// RCF exponent evidence. Requires `window + 1` digits of a non-terminated
/// stream.
pub fn mu_rcf_estimate(stream: &DigitStream, window: usize) -> Result<MuReport> {
    stream.expect_kind(CfKind::Rcf)?;
    if stream.is_terminated() {
        return Err(Error::TerminatedStream);
    }
    if stream.len() < window + 1 {
        return Err(Error::InsufficientDigits {
            needed: window + 1,
            available: stream.len(),
        });
    }
    let table = rcf_convergents(stream, window)?;
    mu_estimate_impl(stream, window, &table)
}

/// BCF analogue using the `(r_n, s_n)` table. The formula's hypothesis
/// (bounded 2-blocks) is the caller's responsibility; for streams violating
/// it the true exponent strictly exceeds this evidence.
pub fn mu_bcf_estimate(stream: &DigitStream, window: usize) -> Result<MuReport> {
    stream.expect_kind(CfKind::Bcf)?;
    if stream.is_terminated() {
        return Err(Error::TerminatedStream);
    }
    if stream.len() < window + 1 {
        return Err(Error::InsufficientDigits {
            needed: window + 1,
            available: stream.len(),
        });
    }
    let table = bcf_convergents(stream, window)?;
    mu_estimate_impl(stream, window, &table)
}

/// Indices passing Good's criterion for a rational `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodHits {
    pub alpha: Rational,
    pub window: usize,
    /// Indices `n` in `[1, window)` with `a_{n+1} > q_n^(alpha-2)`, exact.
    pub hits: Vec<usize>,
}

/// Exact hit test: with `alpha - 2 = u/v >= 0`, index `n` is a hit iff
/// `a_{n+1}^v > q_n^u` as big integers.
pub fn good_hits(stream: &DigitStream, alpha: &Rational, window: usize) -> Result<GoodHits> {
    stream.expect_kind(CfKind::Rcf)?;
    let excess = alpha - Rational::from(BigInt::from(2));
    if excess.is_negative() {
        return Err(Error::InvalidInput("alpha must be at least 2".into()));
    }
    if stream.len() < window {
        return Err(Error::InsufficientDigits {
            needed: window,
            available: stream.len(),
        });
    }
    let u = excess
        .numer()
        .to_u32()
        .ok_or_else(|| Error::BudgetExceeded("alpha numerator too large".into()))?;
    let v = excess
        .denom()
        .to_u32()
        .ok_or_else(|| Error::BudgetExceeded("alpha denominator too large".into()))?;
    let table = rcf_convergents(stream, window.saturating_sub(1))?;
    let mut hits = Vec::new();
    for n in 1..window {
        let a_next = BigInt::from(stream.digit(n + 1).expect("window digits checked"));
        let (_, q) = table.row(n as i64).expect("convergents cover window");
        if a_next.pow(v) > q.pow(u) {
            hits.push(n);
        }
    }
    Ok(GoodHits {
        alpha: alpha.clone(),
        window,
        hits,
    })
}

/// First index beyond which a stream with all digits `<= bound` can have no
/// Good hits for the given `alpha > 2`: since `q_n >= phi^(n-1)`, any hit
/// needs `bound > phi^((n-1)(alpha-2))`.
pub fn bounded_hit_horizon(bound: u64, alpha: &Rational) -> Result<usize> {
    let excess = alpha - Rational::from(BigInt::from(2));
    if !excess.is_positive() {
        return Err(Error::InvalidInput(
            "horizon requires alpha strictly above 2".into(),
        ));
    }
    if bound < 2 {
        return Ok(1);
    }
    // ln phi enclosure via ln((1+sqrt5)/2) is irrational; use a certified
    // rational lower bound: phi > 1618/1000.
    let phi_lower = Rational::new(BigInt::from(1618), BigInt::from(1000));
    let ln_phi = ln_enclosure(&phi_lower, LOG_BITS);
    let ln_bound = ln_enclosure(&Rational::from(BigInt::from(bound)), LOG_BITS);
    // n - 1 < ln(bound) / ((alpha-2) ln phi)
    let denom = DyadicInterval::point(excess).mul(&ln_phi, LOG_BITS);
    let limit = ln_bound.div_pos(&denom, LOG_BITS);
    let ceiling = crate::numeric::rational_ceil(limit.hi());
    let n0 = ceiling
        .to_usize()
        .ok_or_else(|| Error::BudgetExceeded("horizon overflows usize".into()))?;
    Ok(n0 + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::DigitStream;
    use crate::numeric::parse_rational;
    use num_traits::Zero;

    fn rcf_stream(digits: Vec<u64>) -> DigitStream {
        DigitStream::new(CfKind::Rcf, 0, digits, false).unwrap()
    }

    fn bcf_stream(digits: Vec<u64>) -> DigitStream {
        DigitStream::new(CfKind::Bcf, 1, digits, false).unwrap()
    }

    fn width_certified(iv: &DyadicInterval) {
        assert!(iv.width() <= parse_rational("1/1000000000000").unwrap());
    }

    #[test]
    fn golden_window_gives_exactly_two() {
        let s = rcf_stream(vec![1; 41]);
        let r = mu_rcf_estimate(&s, 40).unwrap();
        for (_, ratio) in &r.ratios {
            assert_eq!(ratio, &DyadicInterval::zero());
        }
        assert_eq!(r.tail_sup, DyadicInterval::zero());
        assert!(r.mu_estimate.contains(&parse_rational("2").unwrap()));
        assert!(
            r.mu_estimate.width().is_zero()
                || r.mu_estimate.width() <= parse_rational("1/1000000000000").unwrap()
        );
    }

    #[test]
    fn all_twos_window_estimate_decreases() {
        let s = rcf_stream(vec![2; 81]);
        let r40 = mu_rcf_estimate(&s, 40).unwrap();
        let r80 = mu_rcf_estimate(&s, 80).unwrap();
        width_certified(&r40.tail_sup);
        // q_n grows like (1+sqrt2)^n so the estimate sinks toward 2
        assert!(r40.mu_estimate.lo() > &parse_rational("2").unwrap());
        assert!(r80.mu_estimate.hi() < r40.mu_estimate.lo());
        // numeric spot check: ~2.0394 at window 40
        assert!(
            r40.mu_estimate
                .contains(&parse_rational("2039/1000").unwrap())
                || (r40.mu_estimate.lo() > &parse_rational("2035/1000").unwrap()
                    && r40.mu_estimate.hi() < &parse_rational("2045/1000").unwrap())
        );
    }

    #[test]
    fn synthetic_hits_drive_estimate_to_three() {
        // a_{n+1} = q_n at n in {5, 10, 15, 20}: ratio exactly 1 at hits,
        // so the estimate pins 3. (The digits square every five steps, so
        // the window stops while they still fit in u64.)
        let mut digits: Vec<u64> = Vec::new();
        let mut p: (BigInt, BigInt) = (BigInt::one(), BigInt::zero()); // (q_{n-1}, q_{n-2})
        for n in 1..=25usize {
            let a = if n >= 2 && (n - 1) % 5 == 0 {
                // a_n = q_{n-1}
                p.0.to_u64().expect("q stays small in this window")
            } else {
                1
            };
            digits.push(a);
            let q = BigInt::from(a) * &p.0 + &p.1;
            p = (q, p.0);
        }
        let s = rcf_stream(digits);
        let r = mu_rcf_estimate(&s, 24).unwrap();
        assert!(r.mu_estimate.contains(&parse_rational("3").unwrap()));
        width_certified(&r.mu_estimate);
    }

    #[test]
    fn bcf_estimates() {
        // all-3 stream: s_n grows like 2.618^n, estimate sinks toward 2
        let r = mu_bcf_estimate(&bcf_stream(vec![3; 41]), 40).unwrap();
        assert!(r.mu_estimate.lo() > &parse_rational("2").unwrap());
        assert!(r.mu_estimate.hi() < &parse_rational("22/10").unwrap());

        // all-2 stream: s_n = n+1 exactly, tail sup is ln 2 / ln 21 at n=20
        let r = mu_bcf_estimate(&bcf_stream(vec![2; 41]), 40).unwrap();
        let expected_lo = parse_rational("2227/1000").unwrap(); // 2 + 0.2276...
        let expected_hi = parse_rational("2228/1000").unwrap();
        assert!(r.mu_estimate.lo() > &expected_lo && r.mu_estimate.hi() < &expected_hi);

        // alternating (2,4): s_n grows exponentially, estimate near 2
        let mut d = Vec::new();
        for i in 0..41 {
            d.push(if i % 2 == 0 { 2 } else { 4 });
        }
        let r = mu_bcf_estimate(&bcf_stream(d), 40).unwrap();
        assert!(r.mu_estimate.hi() < &parse_rational("23/10").unwrap());
    }

    #[test]
    fn golden_stream_has_no_hits_for_alpha_5_over_2() {
        let s = rcf_stream(vec![1; 21]);
        let h = good_hits(&s, &parse_rational("5/2").unwrap(), 20).unwrap();
        assert!(h.hits.is_empty());
    }

    #[test]
    fn squared_digit_stream_hits() {
        let s = rcf_stream(vec![1, 2, 4, 16, 256, 65536, 65536, 65536]);
        let h = good_hits(&s, &parse_rational("5/2").unwrap(), 8).unwrap();
        assert!(!h.hits.is_empty());
        // brute-force oracle: n is a hit iff a_{n+1}^2 > q_n
        let t = rcf_convergents(&s, 7).unwrap();
        for n in 1..8usize {
            let a = BigInt::from(s.digit(n + 1).unwrap());
            let (_, q) = t.row(n as i64).unwrap();
            assert_eq!(h.hits.contains(&n), &a * &a > q.clone(), "index {n}");
        }
    }

    #[test]
    fn alpha_two_counts_digits_above_one() {
        let s = rcf_stream(vec![1, 2, 1, 7, 1, 1, 3]);
        let h = good_hits(&s, &parse_rational("2").unwrap(), 6).unwrap();
        let expect: Vec<usize> = (1..6).filter(|&n| s.digit(n + 1).unwrap() >= 2).collect();
        assert_eq!(h.hits, expect);
    }

    #[test]
    fn hits_shrink_as_alpha_grows() {
        let s = rcf_stream(vec![1, 2, 4, 16, 256, 9, 100, 3, 50, 2, 2]);
        let a1 = parse_rational("9/4").unwrap();
        let a2 = parse_rational("5/2").unwrap();
        let h1 = good_hits(&s, &a1, 10).unwrap();
        let h2 = good_hits(&s, &a2, 10).unwrap();
        for n in &h2.hits {
            assert!(h1.hits.contains(n));
        }
    }

    #[test]
    fn bounded_streams_have_finite_horizons() {
        let alpha = parse_rational("5/2").unwrap();
        let n0 = bounded_hit_horizon(9, &alpha).unwrap();
        assert!(n0 < 15);
        // every bounded stream is hit-free beyond the horizon
        let s = rcf_stream(vec![
            9, 8, 9, 7, 9, 9, 1, 2, 9, 9, 3, 9, 9, 9, 4, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9,
            9, 9,
        ]);
        let h = good_hits(&s, &alpha, 30).unwrap();
        assert!(h.hits.iter().all(|&n| n < n0));
    }

    #[test]
    fn terminated_streams_are_rejected() {
        let s = DigitStream::new(CfKind::Rcf, 0, vec![2, 6, 7], true).unwrap();
        assert_eq!(mu_rcf_estimate(&s, 2).unwrap_err(), Error::TerminatedStream);
    }
}
