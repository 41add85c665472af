//! Digit transformation between the RCF and BCF expansions.
//!
//! For an irrational with RCF digits `a1, a2, a3, ...` the BCF expansion is
//!
//! ```text
//! b0 = a0 + 1,  then  (a1-1) twos, a2+2, (a3-1) twos, a4+2, ...
//! ```
//!
//! and conversely, with `n_k` the positions of BCF digits >= 3 (and n_0 = 0),
//! `a_{2k-1} = n_k - n_{k-1}` and `a_{2k} = b_{n_k} - 2`. A long block of 2
//! in the BCF therefore collapses to a single large RCF partial quotient.
//!
//! Finite (terminated) streams use the value-exact boundary convention: a
//! trailing odd-position quotient `m` becomes `m-1` closing twos, and a
//! final even-position quotient `a` becomes the single digit `a+1` (rather
//! than the interior `a+2`). Under these rules the transformation preserves
//! the represented rational exactly and round-trips byte-for-byte on
//! canonical streams.

use num_traits::One;

use crate::cf::{CfKind, DigitStream};
use crate::error::{Error, Result};

/// Positions `n_k` of the BCF digits >= 3 inside a window, with the digit
/// values at those positions. `n_0 = 0` is implicit, not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthMarkers {
    positions: Vec<u64>,
    values: Vec<u64>,
    /// digits after the last marker (a trailing, possibly incomplete run of 2)
    trailing_twos: u64,
}

impl RunLengthMarkers {
    /// Scan a window of BCF digits (1-based positions).
    pub fn scan(digits: &[u64]) -> RunLengthMarkers {
        let mut positions = Vec::new();
        let mut values = Vec::new();
        let mut trailing = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            if d >= 3 {
                positions.push(i as u64 + 1);
                values.push(d);
                trailing = 0;
            } else {
                trailing += 1;
            }
        }
        RunLengthMarkers {
            positions,
            values,
            trailing_twos: trailing,
        }
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn trailing_twos(&self) -> u64 {
        self.trailing_twos
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Transform an RCF stream into the first `bcf_count` BCF digits.
///
/// Consumes quotient pairs on demand; errors with `InsufficientDigits` when
/// a non-terminated source window runs out mid-pattern.
pub fn rcf_to_bcf(stream: &DigitStream, bcf_count: usize) -> Result<DigitStream> {
    stream.expect_kind(CfKind::Rcf)?;
    let digits = stream.digits();
    if stream.is_terminated() && digits.is_empty() {
        // integer: the BCF of n is just b0 = n with no digits
        return DigitStream::new(CfKind::Bcf, stream.integer_part().clone(), vec![], true);
    }
    let b0 = stream.integer_part() + num_bigint::BigInt::one();
    let mut out: Vec<u64> = Vec::new();
    let mut i = 0usize; // 0-based index into RCF digits
    let mut complete = false;
    while out.len() < bcf_count {
        // odd position quotient a_{2k-1}: run of (a-1) twos
        let Some(&a_odd) = digits.get(i) else {
            if stream.is_terminated() {
                complete = true;
            }
            break;
        };
        let is_final = stream.is_terminated() && i + 1 == digits.len();
        let run = a_odd - 1;
        let room = (bcf_count - out.len()) as u64;
        let emitted = run.min(room);
        out.extend(std::iter::repeat_n(2, emitted as usize));
        if is_final {
            // trailing odd quotient m ends the finite expansion with m-1 twos
            complete = emitted == run;
            break;
        }
        if emitted < run {
            break;
        }
        if out.len() >= bcf_count {
            break;
        }
        // even position quotient a_{2k}
        let Some(&a_even) = digits.get(i + 1) else {
            break;
        };
        let is_final = stream.is_terminated() && i + 2 == digits.len();
        // interior pairs emit a+2; the final even quotient emits a+1
        out.push(if is_final { a_even + 1 } else { a_even + 2 });
        i += 2;
        if is_final {
            complete = out.len() <= bcf_count;
            break;
        }
    }
    if out.len() < bcf_count && !complete {
        return Err(Error::InsufficientDigits {
            needed: bcf_count,
            available: out.len(),
        });
    }
    let terminated = complete && out.len() <= bcf_count;
    DigitStream::new(CfKind::Bcf, b0, out, terminated)
}

/// Transform a BCF stream into the first `rcf_count` RCF partial quotients.
///
/// A non-terminated window must contain a digit >= 3 before it ends
/// (`AllTwosWindow` otherwise), and enough complete runs to produce the
/// requested quotients.
pub fn bcf_to_rcf(stream: &DigitStream, rcf_count: usize) -> Result<DigitStream> {
    stream.expect_kind(CfKind::Bcf)?;
    let digits = stream.digits();
    if stream.is_terminated() && digits.is_empty() {
        return DigitStream::new(CfKind::Rcf, stream.integer_part().clone(), vec![], true);
    }
    let a0 = stream.integer_part() - num_bigint::BigInt::one();
    let markers = RunLengthMarkers::scan(digits);
    if markers.is_empty() && !stream.is_terminated() {
        return Err(Error::AllTwosWindow);
    }
    let mut out: Vec<u64> = Vec::new();
    let mut prev = 0u64; // n_{k-1}
    for (idx, (&pos, &val)) in markers.positions().iter().zip(markers.values()).enumerate() {
        let is_final_marker = idx + 1 == markers.positions().len();
        out.push(pos - prev); // a_{2k-1} = n_k - n_{k-1}
        let closes_stream =
            stream.is_terminated() && is_final_marker && markers.trailing_twos() == 0;
        // a_{2k} = b_{n_k} - 2, except a final marker closing a terminated
        // stream contributes b - 1
        out.push(if closes_stream { val - 1 } else { val - 2 });
        prev = pos;
        if out.len() >= rcf_count && !stream.is_terminated() {
            break;
        }
    }
    if stream.is_terminated() && markers.trailing_twos() > 0 {
        // closing run of (m-1) twos encodes a final odd quotient m
        out.push(markers.trailing_twos() + 1);
    }
    if stream.is_terminated() {
        let terminated = out.len() <= rcf_count;
        out.truncate(rcf_count);
        return DigitStream::new(CfKind::Rcf, a0, out, terminated);
    }
    if out.len() < rcf_count {
        return Err(Error::InsufficientDigits {
            needed: rcf_count,
            available: out.len(),
        });
    }
    out.truncate(rcf_count);
    DigitStream::new(CfKind::Rcf, a0, out, false)
}
