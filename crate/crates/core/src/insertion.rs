//! Construction of BCF digit streams with prescribed irrationality
//! behaviour by 2-block insertion.
//!
//! Starting from a concatenation of seed words (a point of the accelerated
//! system's limit set), ever longer blocks of the parabolic digit 2, each
//! closed by a fixed letter `t`, are inserted after seed position `M_k`.
//! The block at stage `k` has length `floor(exp(lambda * M_k))`, so under
//! the schedule inequalities the RCF image of each block is a partial
//! quotient large enough to pass Good's criterion for the chosen `alpha`:
//! the constructed point lies in the Jarník set `G(alpha)` while its digits
//! never leave the alphabet.
//!
//! All certifications are exact: the schedule inequalities are checked with
//! enclosures at construction time, and the per-insertion verification is a
//! pure big-integer comparison.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

use crate::cf::{CfKind, DigitStream};
use crate::dimension::HyperbolicSystem;
use crate::error::{Error, Result};
use crate::ifs::{FamilyKind, IfsFamily, IfsWord};
use crate::numeric::{
    exp_enclosure, floor_exp, ln_enclosure, ln_enclosure_big, rational_below, DyadicInterval,
    MobiusMatrix, Rational,
};

/// Cap on planned insertions; the positions `M_k` double, so this is far
/// beyond any materializable stream.
const MAX_INSERTIONS: usize = 96;

/// Largest rational below the analytic bound of the schedule inequality
/// `2(alpha-2) log(sqrt2 (L+1)) + (alpha-2) lambda <= lambda/2`, i.e. below
/// `2 + lambda / (2 (2 log(sqrt2 (L+1)) + lambda))`, with denominator at
/// most 10^6, re-certified against the inequality itself.
pub fn choose_alpha(lambda: &Rational, cap_l: u64) -> Result<Rational> {
    if !lambda.is_positive() {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    let two = Rational::from(BigInt::from(2));
    let mut bits = 96u32;
    loop {
        let log_scale = half_log_term(cap_l, bits);
        // denominator 2 (2 logS + lambda)
        let den = log_scale
            .scale(&two, bits)
            .add(&DyadicInterval::point(lambda.clone()), bits)
            .scale(&two, bits);
        let bound = DyadicInterval::point(lambda.clone()).div_pos(&den, bits);
        let mut excess = rational_below(bound.lo(), &BigInt::from(1_000_000));
        for _ in 0..8 {
            let alpha = &two + &excess;
            if certify_alpha_inequality(&alpha, lambda, cap_l)? {
                return Ok(alpha);
            }
            excess -= Rational::new(BigInt::one(), BigInt::one() << 40);
        }
        bits *= 2;
        if bits > 1024 {
            return Err(Error::BudgetExceeded("alpha certification failed".into()));
        }
    }
}

/// Enclosure of `log(sqrt2 (L+1)) = (1/2) log(2 (L+1)^2)`.
fn half_log_term(cap_l: u64, bits: u32) -> DyadicInterval {
    let inner = Rational::from(BigInt::from(2 * (cap_l + 1) * (cap_l + 1)));
    ln_enclosure(&inner, bits).scale(&Rational::new(BigInt::one(), BigInt::from(2)), bits)
}

/// Certified check of `2(alpha-2) log(sqrt2 (L+1)) + (alpha-2) lambda <= lambda/2`.
pub fn certify_alpha_inequality(alpha: &Rational, lambda: &Rational, cap_l: u64) -> Result<bool> {
    let excess = alpha - Rational::from(BigInt::from(2));
    if !excess.is_positive() {
        return Ok(false);
    }
    let two = Rational::from(BigInt::from(2));
    let half_lambda = lambda / &two;
    let mut bits = 64u32;
    loop {
        let log_scale = half_log_term(cap_l, bits);
        let lhs = log_scale
            .scale(&(&excess * &two), bits)
            .add(&DyadicInterval::point(&excess * lambda), bits);
        if lhs.hi() <= &half_lambda {
            return Ok(true);
        }
        if lhs.lo() > &half_lambda {
            return Ok(false);
        }
        bits *= 2;
        if bits > 1024 {
            return Err(Error::BudgetExceeded("alpha inequality certification stalled".into()));
        }
    }
}

/// Greedy minimal positive `m(i)` satisfying
/// `M_k >= max(sum of earlier M_i, M_{k-1}/2)` with `M_k = p * sum m(i)`.
///
/// The positions roughly double once the cumulative-sum branch binds, so
/// the sequence is cut off once `M_k` passes 2^50: stages beyond that can
/// never be materialized.
pub fn minimal_m_sequence(p: usize, count: usize) -> Vec<u64> {
    let p = p as u64;
    let cap: u64 = 1 << 50;
    let mut m = Vec::with_capacity(count.min(64));
    let mut big_m: u64 = 0; // M_{k-1}
    let mut total: u64 = 0; // sum of M_i for i < k
    for k in 0..count {
        let mk = if k == 0 {
            1
        } else {
            // smallest m with M_{k-1} + p m >= total (the M/2 branch is
            // implied by monotonicity)
            let deficit = total.saturating_sub(big_m);
            deficit.div_ceil(p).max(1)
        };
        big_m += p * mk;
        if big_m > cap {
            break;
        }
        m.push(mk);
        total += big_m;
    }
    m
}

/// Deterministic seed-word index sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSource {
    /// Cycle through the listed word indices.
    Periodic(Vec<usize>),
    /// SplitMix64 stream reduced modulo the word count.
    Random(u64),
}

impl SeedSource {
    fn index(&self, slot: usize, word_count: usize) -> usize {
        match self {
            SeedSource::Periodic(pattern) => pattern[slot % pattern.len()] % word_count,
            SeedSource::Random(seed) => {
                // SplitMix64 keyed by slot: reproducible and stateless
                let mut z = seed.wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(slot as u64 + 1));
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
                ((z ^ (z >> 31)) % word_count as u64) as usize
            }
        }
    }

    pub fn parse(s: &str) -> Result<SeedSource> {
        if let Some(rest) = s.strip_prefix("periodic:") {
            let idx: std::result::Result<Vec<usize>, _> =
                rest.split(',').map(|p| p.trim().parse()).collect();
            let idx = idx.map_err(|_| Error::InvalidInput(format!("bad seed pattern {s:?}")))?;
            if idx.is_empty() {
                return Err(Error::InvalidInput("empty periodic pattern".into()));
            }
            return Ok(SeedSource::Periodic(idx));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let seed = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad random seed {s:?}")))?;
            return Ok(SeedSource::Random(seed));
        }
        Err(Error::InvalidInput(format!(
            "seed pattern must be periodic:... or random:..., got {s:?}"
        )))
    }
}

/// Validated construction parameters.
#[derive(Clone, Debug)]
pub struct InsertionSchedule {
    family: IfsFamily,
    seed_words: Vec<IfsWord>,
    p: usize,
    gamma: Rational,
    epsilon: Rational,
    lambda: Rational,
    t: u64,
    cap_l: u64,
    alpha: Rational,
    m_seq: Vec<u64>,
}

/// Inputs to [`InsertionSchedule::new`]; optional fields fall back to the
/// defaults `lambda = epsilon * gamma / 5` and `alpha = choose_alpha(...)`.
#[derive(Clone, Debug)]
pub struct ScheduleParams {
    pub alphabet: BTreeSet<u64>,
    pub seed_words: Vec<IfsWord>,
    pub gamma: Rational,
    pub epsilon: Rational,
    pub lambda: Option<Rational>,
    pub t: u64,
    pub alpha: Option<Rational>,
}

impl InsertionSchedule {
    /// Build and fully certify a schedule: seed-word conditions, the digit
    /// alphabet, `t`, the `lambda > 0` default, and the alpha inequality.
    /// Overrides are re-certified and invalid combinations refused.
    pub fn new(params: ScheduleParams) -> Result<InsertionSchedule> {
        let schedule = InsertionSchedule::assemble(params)?;
        schedule.certify()?;
        Ok(schedule)
    }

    /// Assemble without certifying the analytic inequalities. Digit-level
    /// bounds are still enforced. Meant for diagnostics (e.g. the degenerate
    /// `lambda = 0` stream shape) and negative-control experiments.
    pub fn new_unchecked(params: ScheduleParams) -> Result<InsertionSchedule> {
        InsertionSchedule::assemble(params)
    }

    fn assemble(params: ScheduleParams) -> Result<InsertionSchedule> {
        let ScheduleParams {
            alphabet,
            seed_words,
            gamma,
            epsilon,
            lambda,
            t,
            alpha,
        } = params;
        if !alphabet.contains(&2) {
            return Err(Error::InvalidSchedule(
                "alphabet must contain the parabolic digit 2".into(),
            ));
        }
        let family = IfsFamily::new(FamilyKind::Bcf, alphabet.iter().copied())?;
        if seed_words.is_empty() {
            return Err(Error::InvalidSchedule("no seed words".into()));
        }
        let p = seed_words[0].len();
        if seed_words.iter().any(|w| w.len() != p) {
            return Err(Error::InvalidSchedule("seed words of mixed length".into()));
        }
        for w in &seed_words {
            if w.letters().iter().any(|l| !alphabet.contains(l)) {
                return Err(Error::InvalidSchedule(format!(
                    "seed word {w} leaves the alphabet"
                )));
            }
            if family.is_parabolic_letter(w.last()) {
                return Err(Error::InvalidSchedule(format!(
                    "seed word {w} ends in the parabolic letter"
                )));
            }
        }
        if !alphabet.contains(&t) || family.is_parabolic_letter(t) {
            return Err(Error::InvalidSchedule(
                "t must be a non-parabolic letter of the alphabet".into(),
            ));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidSchedule("epsilon must be positive".into()));
        }
        if !gamma.is_positive() {
            return Err(Error::InvalidSchedule("gamma must be positive".into()));
        }
        let lambda = match lambda {
            Some(l) => {
                if l.is_negative() {
                    return Err(Error::InvalidSchedule("lambda must be nonnegative".into()));
                }
                l
            }
            None => &epsilon * &gamma / Rational::from(BigInt::from(5)),
        };
        let max_b = *alphabet.iter().max().expect("nonempty alphabet");
        let cap_l = (max_b - 2).max(p as u64);
        let alpha = match alpha {
            Some(a) => a,
            None => choose_alpha(&lambda, cap_l)?,
        };
        if alpha <= Rational::from(BigInt::from(2)) {
            return Err(Error::InvalidSchedule("alpha must exceed 2".into()));
        }
        let m_seq = minimal_m_sequence(p, MAX_INSERTIONS);
        Ok(InsertionSchedule {
            family,
            seed_words,
            p,
            gamma,
            epsilon,
            lambda,
            t,
            cap_l,
            alpha,
            m_seq,
        })
    }

    fn certify(&self) -> Result<()> {
        if !self.lambda.is_positive() {
            return Err(Error::InvalidSchedule(
                "lambda = 0 is a degenerate diagnostic mode; the alpha inequality cannot hold"
                    .into(),
            ));
        }
        // seed contraction (C): sup |psi'_w| < exp(-gamma p), certified
        let arg = -(&self.gamma * Rational::from(BigInt::from(self.p as u64)));
        let bound = exp_enclosure(&arg, 128);
        for w in &self.seed_words {
            let (_, sup) = crate::ifs::derivative_range(&self.family, w)?;
            if bound.lo() <= &sup {
                return Err(Error::InvalidSchedule(format!(
                    "seed word {w} is not contracted below exp(-gamma p)"
                )));
            }
        }
        // seed cells pairwise disjoint (A): delegate to the system builder,
        // which also re-checks hyperbolicity
        HyperbolicSystem::new(self.family.clone(), self.seed_words.clone())?;
        // the alpha inequality
        if !certify_alpha_inequality(&self.alpha, &self.lambda, self.cap_l)? {
            return Err(Error::InvalidSchedule(format!(
                "alpha = {} fails the schedule inequality for lambda = {}, L = {}",
                self.alpha, self.lambda, self.cap_l
            )));
        }
        // the growth inequality holds for the greedy sequence; re-verify
        let p = self.p as u64;
        let mut total = 0u64;
        let mut prev = 0u64;
        let mut acc = 0u64;
        for (k, &mk) in self.m_seq.iter().enumerate() {
            acc += mk;
            let big_m = p * acc;
            if k > 0 && (big_m < total || 2 * big_m < prev) {
                return Err(Error::InvalidSchedule(format!(
                    "m sequence violates the growth inequality at k = {k}"
                )));
            }
            total += big_m;
            prev = big_m;
        }
        Ok(())
    }

    pub fn family(&self) -> &IfsFamily {
        &self.family
    }

    pub fn alphabet(&self) -> &BTreeSet<u64> {
        self.family.alphabet()
    }

    pub fn seed_words(&self) -> &[IfsWord] {
        &self.seed_words
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn cap_l(&self) -> u64 {
        self.cap_l
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn m(&self, k: usize) -> Option<u64> {
        self.m_seq.get(k).copied()
    }

    /// `M_k = p * sum of m(i), i <= k`.
    pub fn big_m(&self, k: usize) -> Option<u64> {
        (k < self.m_seq.len()).then(|| self.p as u64 * self.m_seq[..=k].iter().sum::<u64>())
    }

    /// Planned 2-block length at stage k.
    pub fn block_len(&self, k: usize) -> Result<BigInt> {
        let big_m = self
            .big_m(k)
            .ok_or_else(|| Error::BudgetExceeded("insertion stage beyond plan".into()))?;
        floor_exp(&self.lambda, big_m)
    }

    /// Stream position `n(k)` by the recurrence
    /// `n(k) = n(k-1) + m(k-1) p + block(k-1) + 1`, `n(0) = 0`.
    pub fn n_position(&self, k: usize) -> Result<BigInt> {
        let mut n = BigInt::zero();
        for j in 0..k {
            let step =
                BigInt::from(self.m_seq[j] * self.p as u64) + self.block_len(j)? + BigInt::one();
            n += step;
        }
        Ok(n)
    }

    /// Sample positions `B_k = { n(k) + m p : 0 <= m <= m(k) }`.
    pub fn b_positions(&self, k: usize) -> Result<Vec<BigInt>> {
        let n_k = self.n_position(k)?;
        let mk = self
            .m(k)
            .ok_or_else(|| Error::BudgetExceeded("insertion stage beyond plan".into()))?;
        Ok((0..=mk)
            .map(|m| &n_k + BigInt::from(m * self.p as u64))
            .collect())
    }
}

/// One complete materialized insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionRecord {
    pub k: usize,
    /// Seed position `M_k` after which the block was inserted.
    pub seed_position: u64,
    /// 1-based stream position of the first inserted 2.
    pub block_start: u64,
    pub block_len: u64,
    /// Position of the closing letter `t`; equals `n(k+1)`.
    pub t_position: u64,
}

/// A partially emitted block cut off by the digit budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBlock {
    pub k: usize,
    pub planned_len: BigInt,
    pub emitted: u64,
}

/// A constructed stream with its insertion log.
#[derive(Clone, Debug)]
pub struct ConstructedStream {
    schedule: InsertionSchedule,
    stream: DigitStream,
    seed_indices: Vec<usize>,
    insertions: Vec<InsertionRecord>,
    partial: Option<PartialBlock>,
}

impl ConstructedStream {
    pub fn schedule(&self) -> &InsertionSchedule {
        &self.schedule
    }

    pub fn stream(&self) -> &DigitStream {
        &self.stream
    }

    pub fn seed_indices(&self) -> &[usize] {
        &self.seed_indices
    }

    pub fn insertions(&self) -> &[InsertionRecord] {
        &self.insertions
    }

    pub fn partial(&self) -> Option<&PartialBlock> {
        self.partial.as_ref()
    }

    /// Digits with every logged insertion removed: the seed concatenation.
    pub fn elided_digits(&self) -> Vec<u64> {
        let digits = self.stream.digits();
        let mut out = Vec::new();
        let mut skip_ranges = self
            .insertions
            .iter()
            .map(|r| (r.block_start, r.t_position))
            .collect::<Vec<_>>();
        if let Some(p) = &self.partial {
            let start = self
                .insertions
                .iter()
                .map(|r| r.t_position)
                .max()
                .unwrap_or(0);
            // the partial block runs from its start position to the end
            let partial_start = digits.len() as u64 - p.emitted + 1;
            debug_assert!(partial_start > start);
            skip_ranges.push((partial_start, u64::MAX));
        }
        let mut range_idx = 0;
        for (i, &d) in digits.iter().enumerate() {
            let pos = i as u64 + 1;
            while range_idx < skip_ranges.len() && pos > skip_ranges[range_idx].1 {
                range_idx += 1;
            }
            let inside = range_idx < skip_ranges.len()
                && pos >= skip_ranges[range_idx].0
                && pos <= skip_ranges[range_idx].1;
            if !inside {
                out.push(d);
            }
        }
        out
    }
}

/// Materialize `digit_count` digits of the constructed stream.
pub fn build_stream(
    schedule: &InsertionSchedule,
    source: &SeedSource,
    digit_count: usize,
) -> Result<ConstructedStream> {
    if digit_count == 0 {
        return Err(Error::InvalidInput("digit_count must be positive".into()));
    }
    let words = schedule.seed_words();
    let word_count = words.len();
    let mut out: Vec<u64> = Vec::with_capacity(digit_count);
    let mut seed_indices = Vec::new();
    let mut insertions = Vec::new();
    let mut partial = None;
    let mut slot = 0usize;
    'stages: for k in 0..MAX_INSERTIONS {
        let Some(mk) = schedule.m(k) else { break };
        // m(k) seed words bring the seed position up to M_k
        for _ in 0..mk {
            let idx = source.index(slot, word_count);
            seed_indices.push(idx);
            slot += 1;
            for &d in words[idx].letters() {
                out.push(d);
                if out.len() >= digit_count {
                    break 'stages;
                }
            }
        }
        let planned = schedule.block_len(k)?;
        let room = (digit_count - out.len()) as u64;
        match planned.to_u64().filter(|&len| len < room) {
            Some(len) => {
                let block_start = out.len() as u64 + 1;
                out.extend(std::iter::repeat_n(2, len as usize));
                out.push(schedule.t());
                insertions.push(InsertionRecord {
                    k,
                    seed_position: schedule.big_m(k).expect("stage within plan"),
                    block_start,
                    block_len: len,
                    t_position: block_start + len,
                });
            }
            None => {
                // block does not fit: emit what we can and stop
                out.extend(std::iter::repeat_n(2, room as usize));
                partial = Some(PartialBlock {
                    k,
                    planned_len: planned,
                    emitted: room,
                });
                break;
            }
        }
    }
    out.truncate(digit_count);
    let stream = DigitStream::new(CfKind::Bcf, BigInt::one(), out, false)?;
    // bookkeeping: the logged t positions satisfy the n(k) recurrence
    for r in &insertions {
        debug_assert_eq!(
            BigInt::from(r.t_position),
            schedule.n_position(r.k + 1).expect("planned stage"),
            "n(k) recurrence mismatch at k = {}",
            r.k
        );
    }
    Ok(ConstructedStream {
        schedule: schedule.clone(),
        stream,
        seed_indices,
        insertions,
        partial,
    })
}

/// Exact Good-criterion check for one insertion.
#[derive(Clone, Debug)]
pub struct GoodCheck {
    pub k: usize,
    /// RCF index `n`: the block became the quotient `a_{n+1}`.
    pub n: usize,
    pub a_next: BigInt,
    pub q_n: BigInt,
    /// `a_{n+1} > q_n^(alpha-2)`, exact.
    pub pass: bool,
    /// `q_n <= (L+1)^n * prod (block_i + 1)`, exact.
    pub q_bound_exact: bool,
    /// `q_n <= (L+1)^n * 2^k * exp(lambda * sum M_i)`, certified.
    pub q_bound_outer: bool,
}

/// Verification report over the materialized insertions.
#[derive(Clone, Debug)]
pub struct GoodVerification {
    pub alpha: Rational,
    pub checks: Vec<GoodCheck>,
    /// Smallest k from which every later materialized check passes.
    pub first_pass_k: Option<usize>,
}

/// Convert the stream prefix insertion by insertion and test the exact
/// inequality `a_{n+1} > q_n^(alpha-2)` at each logged block.
///
/// The RCF image of a 2-block of length `len` bounded by non-2 digits is
/// the partial quotient `len + 1` (the run-length count includes the
/// closing position).
pub fn verify_good(constructed: &ConstructedStream, k_max: usize) -> Result<GoodVerification> {
    let schedule = constructed.schedule();
    let digits = constructed.stream().digits();
    let records: Vec<&InsertionRecord> = constructed
        .insertions()
        .iter()
        .filter(|r| r.k <= k_max)
        .collect();
    let excess = schedule.alpha() - Rational::from(BigInt::from(2));
    let u = excess
        .numer()
        .to_u32()
        .ok_or_else(|| Error::BudgetExceeded("alpha excess numerator too large".into()))?;
    let v = excess
        .denom()
        .to_u32()
        .ok_or_else(|| Error::BudgetExceeded("alpha excess denominator too large".into()))?;

    let cap = Rational::from(BigInt::from(schedule.cap_l() + 1));
    let mut checks = Vec::with_capacity(records.len());
    // walk the BCF digits once, streaming the RCF quotients through the
    // convergent recurrence
    let mut q_prev = BigInt::zero(); // q_{-1}
    let mut q_curr = BigInt::one(); // q_0
    let mut quotients_emitted = 0usize;
    let mut prev_marker = 0u64;
    let mut next_record = 0usize;
    let mut block_product = BigInt::one(); // prod (block_len_i + 1) for i < k
    let mut m_sum: u64 = 0; // sum of M_i for i < k

    fn emit(a: &BigInt, q_prev: &mut BigInt, q_curr: &mut BigInt) {
        let q_next = a * &*q_curr + &*q_prev;
        *q_prev = std::mem::replace(q_curr, q_next);
    }

    for (i, &d) in digits.iter().enumerate() {
        let pos = i as u64 + 1;
        if d < 3 {
            continue;
        }
        // marker: emits a_odd = pos - prev_marker, then a_even = d - 2
        let a_odd = BigInt::from(pos - prev_marker);
        if let Some(rec) = records.get(next_record) {
            if rec.t_position == pos {
                // this run is insertion k's block: a_{n+1} = block_len + 1
                let n = quotients_emitted;
                let a_next = a_odd.clone();
                debug_assert_eq!(a_next, BigInt::from(rec.block_len + 1));
                let pass = a_next.pow(v) > q_curr.pow(u);
                let exact_bound = cap_pow(&cap, n) * &block_product;
                let q_bound_exact = q_curr <= exact_bound;
                let q_bound_outer =
                    outer_bound_holds(&q_curr, &cap, n, rec.k, m_sum, schedule.lambda());
                checks.push(GoodCheck {
                    k: rec.k,
                    n,
                    a_next,
                    q_n: q_curr.clone(),
                    pass,
                    q_bound_exact,
                    q_bound_outer,
                });
                block_product *= BigInt::from(rec.block_len + 1);
                m_sum += rec.seed_position;
                next_record += 1;
                if next_record >= records.len() {
                    break;
                }
            }
        }
        emit(&a_odd, &mut q_prev, &mut q_curr);
        quotients_emitted += 1;
        // a_even = d - 2 >= 1 since markers carry digits >= 3
        let a_even = BigInt::from(d - 2);
        emit(&a_even, &mut q_prev, &mut q_curr);
        quotients_emitted += 1;
        prev_marker = pos;
    }

    let mut first_pass_k = None;
    for check in checks.iter().rev() {
        if check.pass {
            first_pass_k = Some(check.k);
        } else {
            break;
        }
    }
    Ok(GoodVerification {
        alpha: schedule.alpha().clone(),
        checks,
        first_pass_k,
    })
}

fn cap_pow(cap: &Rational, n: usize) -> BigInt {
    cap.numer().pow(n as u32)
}

/// Certified `q <= (L+1)^n 2^k exp(lambda sum_M)`: compare against the
/// enclosure's lower endpoint, so `true` is a proof and `false` only means
/// "not provable at this precision" (never happens for the honest bound).
fn outer_bound_holds(
    q: &BigInt,
    cap: &Rational,
    n: usize,
    k: usize,
    m_sum: u64,
    lambda: &Rational,
) -> bool {
    let base = cap.numer().pow(n as u32) * (BigInt::one() << k);
    let arg = lambda * Rational::from(BigInt::from(m_sum));
    let magnitude = crate::numeric::rational_floor(&arg)
        .to_u32()
        .map(|m| 2 * m + 16)
        .unwrap_or(u32::MAX);
    let exp = exp_enclosure(&arg, magnitude.min(1 << 14));
    let bound = Rational::from(base) * exp.lo();
    Rational::from(q.clone()) <= bound
}

/// One diameter comparison of the Hölder check.
#[derive(Clone, Debug)]
pub struct HolderEntry {
    pub source: usize,
    pub k: usize,
    /// Prefix length; an element of `B_k`.
    pub n: u64,
    /// log |I| - (1+eps) log |Ibar|, nonnegative iff the inequality holds.
    pub log_margin: f64,
    pub pass: bool,
}

/// Report of the diameter inequality `|I| >= |Ibar|^(1+eps)` over sampled
/// prefixes.
#[derive(Clone, Debug)]
pub struct HolderReport {
    pub epsilon: Rational,
    pub entries: Vec<HolderEntry>,
    /// Smallest sampled k from which every later sampled k passes fully.
    pub empirical_threshold: Option<usize>,
    /// Per-k minimum log margin across sources and sample points.
    pub min_margin_by_k: Vec<(usize, f64)>,
}

/// Exact diameters of the insertion-bearing and insertion-free fundamental
/// intervals at every sampled prefix length `n` in `B_k`.
///
/// Passing is certified in the log domain: with diameters `1/X` for exact
/// integers `X`, the inequality `|I| >= |Ibar|^(1+eps)` becomes
/// `(1+eps) ln X_bar >= ln X_full`, separated by enclosure refinement.
pub fn holder_check(
    schedule: &InsertionSchedule,
    sources: &[SeedSource],
    k_range: std::ops::RangeInclusive<usize>,
    digit_budget: usize,
) -> Result<HolderReport> {
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    let last_sample = schedule.n_position(k_hi)?
        + BigInt::from(
            schedule
                .m(k_hi)
                .ok_or_else(|| Error::BudgetExceeded("k beyond plan".into()))?
                * schedule.p() as u64,
        );
    let needed = last_sample
        .to_usize()
        .ok_or_else(|| Error::BudgetExceeded("sample positions beyond addressable range".into()))?;
    if needed > digit_budget {
        return Err(Error::BudgetExceeded(format!(
            "holder check needs {needed} digits, budget is {digit_budget}"
        )));
    }
    let one_plus_eps = Rational::one() + schedule.epsilon();
    let mut entries = Vec::new();
    for (src_idx, source) in sources.iter().enumerate() {
        let constructed = build_stream(schedule, source, needed.max(1))?;
        let digits = constructed.stream().digits();
        // sample positions by stage
        let mut samples: Vec<(usize, u64)> = Vec::new();
        for k in k_lo..=k_hi {
            for pos in schedule.b_positions(k)? {
                let pos = pos.to_u64().expect("materialized position fits u64");
                samples.push((k, pos));
            }
        }
        samples.sort_by_key(|&(_, pos)| pos);
        // walk once, maintaining full and elided matrices
        let mut full = MobiusMatrix::identity();
        let mut elided = MobiusMatrix::identity();
        let fam = schedule.family();
        let mut skip = constructed
            .insertions()
            .iter()
            .map(|r| (r.block_start, r.t_position))
            .collect::<Vec<_>>()
            .into_iter()
            .peekable();
        let mut current_skip: Option<(u64, u64)> = skip.next();
        let mut sample_iter = samples.iter().peekable();
        // position 0 samples: order-0 interval [0,1] on both sides
        while let Some(&&(k, 0)) = sample_iter.peek() {
            entries.push(HolderEntry {
                source: src_idx,
                k,
                n: 0,
                log_margin: 0.0,
                pass: true,
            });
            sample_iter.next();
        }
        for (i, &d) in digits.iter().enumerate() {
            let pos = i as u64 + 1;
            let letter = fam.kind().letter_matrix(d);
            full = full.compose(&letter);
            let mut inside = false;
            while let Some((start, end)) = current_skip {
                if pos > end {
                    current_skip = skip.next();
                    continue;
                }
                inside = pos >= start;
                break;
            }
            if !inside {
                elided = elided.compose(&letter);
            }
            while let Some(&&(k, sample_pos)) = sample_iter.peek() {
                if sample_pos != pos {
                    break;
                }
                let (pass, margin) = holder_margin(&full, &elided, &one_plus_eps);
                entries.push(HolderEntry {
                    source: src_idx,
                    k,
                    n: pos,
                    log_margin: margin,
                    pass,
                });
                sample_iter.next();
            }
            if sample_iter.peek().is_none() {
                break;
            }
        }
    }
    // aggregate per-k minima and the empirical threshold
    let mut min_margin_by_k: Vec<(usize, f64)> = Vec::new();
    for k in k_lo..=k_hi {
        let min = entries
            .iter()
            .filter(|e| e.k == k)
            .map(|e| e.log_margin)
            .fold(f64::INFINITY, f64::min);
        min_margin_by_k.push((k, min));
    }
    let mut empirical_threshold = None;
    for k in (k_lo..=k_hi).rev() {
        if entries.iter().filter(|e| e.k == k).all(|e| e.pass) {
            empirical_threshold = Some(k);
        } else {
            break;
        }
    }
    Ok(HolderReport {
        epsilon: schedule.epsilon().clone(),
        entries,
        empirical_threshold,
        min_margin_by_k,
    })
}

/// Certified comparison `(1+eps) ln X_bar >= ln X_full` where the interval
/// diameters are `1/X`; returns (pass, float margin).
fn holder_margin(
    full: &MobiusMatrix,
    elided: &MobiusMatrix,
    one_plus_eps: &Rational,
) -> (bool, f64) {
    let x_full = diameter_denominator(full);
    let x_elided = diameter_denominator(elided);
    if x_full == x_elided {
        // no insertions in the prefix: |I| = |Ibar| <= 1 passes outright
        return (true, margin_f64(&x_full, &x_elided, one_plus_eps, 64));
    }
    let mut bits = 64u32;
    loop {
        let ln_full = ln_enclosure_big(&x_full, bits);
        let ln_elided = ln_enclosure_big(&x_elided, bits).scale(one_plus_eps, bits);
        if ln_elided.lo() >= ln_full.hi() {
            return (true, margin_f64(&x_full, &x_elided, one_plus_eps, bits));
        }
        if ln_elided.hi() < ln_full.lo() {
            return (false, margin_f64(&x_full, &x_elided, one_plus_eps, bits));
        }
        if bits >= 4096 {
            // unresolvable tie: report failure conservatively
            return (false, 0.0);
        }
        bits *= 2;
    }
}

fn margin_f64(x_full: &BigInt, x_elided: &BigInt, one_plus_eps: &Rational, bits: u32) -> f64 {
    let ln_full = ln_enclosure_big(x_full, bits);
    let ln_elided = ln_enclosure_big(x_elided, bits).scale(one_plus_eps, bits);
    ln_elided.sub(&ln_full, bits).to_f64()
}

/// `diam psi_M([0,1]) = 1/(m22 (m21 + m22))` for determinant ±1 matrices.
fn diameter_denominator(m: &MobiusMatrix) -> BigInt {
    debug_assert!(m.determinant().abs().is_one());
    (&m.d * (&m.c + &m.d)).abs()
}

/// The positions `B_k` with the exact digit assertion: every sampled
/// position at stage k carries a digit other than 2 (position 0 has no
/// digit and is skipped).
pub fn not2_positions(constructed: &ConstructedStream, k: usize) -> Result<Vec<u64>> {
    let schedule = constructed.schedule();
    let digits = constructed.stream().digits();
    let positions = schedule.b_positions(k)?;
    let mut out = Vec::with_capacity(positions.len());
    for pos in positions {
        let pos = pos.to_u64().ok_or_else(|| {
            Error::BudgetExceeded("B_k position beyond the materialized stream".into())
        })?;
        if pos == 0 {
            out.push(0);
            continue;
        }
        let digit = digits
            .get(pos as usize - 1)
            .copied()
            .ok_or(Error::InsufficientDigits {
                needed: pos as usize,
                available: digits.len(),
            })?;
        if digit == 2 {
            return Err(Error::MalformedStream(format!(
                "construction bug: digit 2 at protected position {pos} (stage {k})"
            )));
        }
        out.push(pos);
    }
    Ok(out)
}
