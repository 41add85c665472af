//! Shared fixtures for the criterion benchmarks.

use cflab_core::cf::{CfKind, DigitStream};
use cflab_core::ifs::IfsWord;
use cflab_core::insertion::{InsertionSchedule, ScheduleParams};
use cflab_core::numeric::parse_rational;

/// A pseudorandom-but-fixed RCF window for recurrence benchmarks.
pub fn rcf_window(len: usize) -> DigitStream {
    let digits: Vec<u64> = (0..len).map(|i| (i as u64 * 2654435761 % 9) + 1).collect();
    DigitStream::new(CfKind::Rcf, 0, digits, false).unwrap()
}

/// The canonical {2,3} construction schedule used across the suite.
pub fn schedule_23() -> InsertionSchedule {
    InsertionSchedule::new(ScheduleParams {
        alphabet: [2u64, 3].into_iter().collect(),
        seed_words: vec![
            IfsWord::new(vec![2, 3]).unwrap(),
            IfsWord::new(vec![3, 3]).unwrap(),
        ],
        gamma: parse_rational("10986/10000").unwrap(),
        epsilon: parse_rational("2500/5493").unwrap(),
        lambda: Some(parse_rational("1/10").unwrap()),
        t: 3,
        alpha: Some(parse_rational("121/60").unwrap()),
    })
    .unwrap()
}
