//! Property tests for the structural invariants: unimodularity of the
//! convergent recurrences, Möbius composition laws, transformation round
//! trips, and interval geometry.

use cflab_core::cf::{
    bcf_convergents, bcf_digits, rcf_convergents, rcf_digits, CfKind, DigitStream, RealSource,
};
use cflab_core::diophantine::good_hits;
use cflab_core::ifs::{
    apply_word, derivative_range, fundamental_interval, FamilyKind, IfsFamily, IfsWord,
};
use cflab_core::numeric::{MobiusMatrix, Rational};
use cflab_core::transform::{bcf_to_rcf, rcf_to_bcf};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = MobiusMatrix> {
    (1i64..=6, 0i64..=6).prop_map(|(c, shift)| {
        // BCF-style letter matrices composed with a twist stay invertible
        MobiusMatrix::new(1, shift, 1, c + shift)
    })
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=1000, 1i64..=1000).prop_map(|(n, d)| {
        let n = n.min(d);
        Rational::new(BigInt::from(n), BigInt::from(d))
    })
}

fn rcf_stream(max_len: usize) -> impl Strategy<Value = DigitStream> {
    prop::collection::vec(1u64..=30, 1..max_len).prop_map(|mut digits| {
        if *digits.last().unwrap() < 2 {
            *digits.last_mut().unwrap() = 2;
        }
        DigitStream::new(CfKind::Rcf, 0, digits, true).unwrap()
    })
}

fn bcf_word(max_len: usize) -> impl Strategy<Value = IfsWord> {
    prop::collection::vec(2u64..=9, 1..max_len).prop_map(|l| IfsWord::new(l).unwrap())
}

proptest! {
    #[test]
    fn mobius_composition_is_associative(a in small_matrix(), b in small_matrix(), c in small_matrix()) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert_eq!(left.normalized(), right.normalized());
    }

    #[test]
    fn composed_matrix_equals_composed_application(
        a in small_matrix(),
        b in small_matrix(),
        x in unit_rational()
    ) {
        let via_matrix = a.compose(&b).apply(&x);
        let via_maps = a.apply(&b.apply(&x));
        prop_assert_eq!(via_matrix, via_maps);
    }

    #[test]
    fn rcf_determinant_alternates(s in rcf_stream(40)) {
        let t = rcf_convergents(&s, s.len()).unwrap();
        for n in 0..=s.len() as i64 {
            let (p_n, q_n) = t.row(n).unwrap();
            let (p_prev, q_prev) = t.row(n - 1).unwrap();
            let det = p_n * q_prev - p_prev * q_n;
            let expect = if n % 2 == 0 { -1 } else { 1 };
            prop_assert_eq!(det, BigInt::from(expect));
        }
    }

    #[test]
    fn bcf_recurrence_is_unimodular(digits in prop::collection::vec(2u64..=9, 1..40)) {
        let s = DigitStream::new(CfKind::Bcf, 1, digits, false).unwrap();
        let t = bcf_convergents(&s, s.len()).unwrap();
        for n in 0..=s.len() as i64 {
            let (r_n, s_n) = t.row(n).unwrap();
            let (r_prev, s_prev) = t.row(n - 1).unwrap();
            // each step matrix has determinant 1
            let det = r_prev * s_n - r_n * s_prev;
            prop_assert_eq!(det, BigInt::from(1));
            // denominators grow strictly from n = 1 on
            if n >= 1 {
                prop_assert!(s_n > s_prev);
            }
        }
    }

    #[test]
    fn denominators_bounded_by_digit_products(s in rcf_stream(40)) {
        let t = rcf_convergents(&s, s.len()).unwrap();
        let mut product = BigInt::from(1);
        for n in 1..=s.len() {
            product *= BigInt::from(s.digit(n).unwrap() + 1);
            let (_, q_n) = t.row(n as i64).unwrap();
            prop_assert!(q_n <= &product);
            // q_n strictly increases from n = 1 on
            if n >= 2 {
                let (_, q_prev) = t.row(n as i64 - 1).unwrap();
                prop_assert!(q_n > q_prev);
            }
        }
    }

    #[test]
    fn transformation_round_trips_byte_exactly(s in rcf_stream(30)) {
        let b = rcf_to_bcf(&s, 1 << 16).unwrap();
        let back = bcf_to_rcf(&b, 1 << 16).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn transformed_streams_keep_the_value(num in 1i64..=400, den in 1i64..=400) {
        let num = num.min(den - 1).max(0);
        prop_assume!(den > 1 && num >= 1);
        let x = Rational::new(BigInt::from(num), BigInt::from(den));
        let r = rcf_digits(&RealSource::Rational(x.clone()), 128).unwrap();
        let b = rcf_to_bcf(&r, 1 << 16).unwrap();
        let direct = bcf_digits(&RealSource::Rational(x), 1 << 16).unwrap();
        prop_assert_eq!(b, direct);
    }

    #[test]
    fn fundamental_intervals_nest(w in bcf_word(8), ext in bcf_word(5)) {
        let fam = IfsFamily::new(FamilyKind::Bcf, 2..=9).unwrap();
        let outer = fundamental_interval(&fam, &w).unwrap();
        let inner = fundamental_interval(&fam, &w.concat(&ext)).unwrap();
        prop_assert!(outer.contains_interval(&inner));
    }

    #[test]
    fn diameters_obey_the_mean_value_bound(w in bcf_word(10)) {
        let fam = IfsFamily::new(FamilyKind::Bcf, 2..=9).unwrap();
        let (inf, sup) = derivative_range(&fam, &w).unwrap();
        let diam = fundamental_interval(&fam, &w).unwrap().diameter();
        prop_assert!(inf <= diam && diam <= sup);
    }

    #[test]
    fn address_digits_recover_words(w in bcf_word(10)) {
        // interior point: golden-tail continuation, so the expansion of the
        // image starts with exactly the word
        let fam = IfsFamily::new(FamilyKind::Bcf, 2..=9).unwrap();
        let golden = RealSource::parse("(-1+1*sqrt(5))/2").unwrap();
        let interior = match &golden {
            RealSource::Surd(s) => {
                let m = cflab_core::ifs::word_matrix(&fam, &w).unwrap();
                s.mobius(&m)
            }
            _ => unreachable!(),
        };
        let count = w.len() + 4;
        let stream = bcf_digits(&RealSource::Surd(interior), count).unwrap();
        prop_assert_eq!(&stream.digits()[..w.len()], w.letters());
        // continuation is the golden tail of 3s
        prop_assert!(stream.digits()[w.len()..].iter().all(|&d| d == 3));
    }

    #[test]
    fn hits_monotone_in_alpha(digits in prop::collection::vec(1u64..=4000, 8..24)) {
        let s = DigitStream::new(CfKind::Rcf, 0, digits, false).unwrap();
        let window = s.len() - 1;
        let a_small = Rational::new(BigInt::from(9), BigInt::from(4));
        let a_large = Rational::new(BigInt::from(5), BigInt::from(2));
        let h_small = good_hits(&s, &a_small, window).unwrap();
        let h_large = good_hits(&s, &a_large, window).unwrap();
        for n in &h_large.hits {
            prop_assert!(h_small.hits.contains(n));
        }
    }

    #[test]
    fn bcf_truncations_converge_monotonically(digits in prop::collection::vec(2u64..=7, 12..20)) {
        // deeper truncations of the BCF of an irrational approach it in
        // strictly smaller fundamental intervals
        let fam = IfsFamily::new(FamilyKind::Bcf, 2..=7).unwrap();
        let mut last: Option<Rational> = None;
        for n in (4..digits.len()).step_by(3) {
            let w = IfsWord::new(digits[..n].to_vec()).unwrap();
            let diam = fundamental_interval(&fam, &w).unwrap().diameter();
            if let Some(prev) = last {
                prop_assert!(diam < prev);
            }
            last = Some(diam);
        }
    }

    #[test]
    fn word_images_stay_inside_letter_cells(w in bcf_word(8), x in unit_rational()) {
        let fam = IfsFamily::new(FamilyKind::Bcf, 2..=9).unwrap();
        let img = apply_word(&fam, &w, &x).unwrap();
        let cell = fundamental_interval(&fam, &IfsWord::new(vec![w.letters()[0]]).unwrap()).unwrap();
        prop_assert!(cell.lower <= img && img <= cell.upper);
    }
}
