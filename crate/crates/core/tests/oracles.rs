//! Independent oracles for the certified kernels: these recompute expected
//! values through deliberately different arithmetic routes and freeze the
//! agreement.

use cflab_core::numeric::{floor_exp, parse_rational, QuadraticSurd, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

/// Decimal-scaled series oracle for floor(exp(p/q)): every term is kept as
/// an integer multiple of 10^-50 with floor division, so the partial sum
/// underestimates by at most `terms` units and the tail is bounded crudely.
fn floor_exp_oracle(p: u64, q: u64, terms: u64) -> BigInt {
    let scale = BigInt::from(10u8).pow(50);
    let mut term = scale.clone();
    let mut sum = scale.clone();
    for i in 1..=terms {
        term = term * p / (q * i);
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    // tail after `terms` is below one scaled unit for the arguments used
    // here; slack of terms+1 units covers the floor-division deficit
    let slack = BigInt::from(terms + 1);
    let lower = &sum / &scale;
    let upper = (&sum + &slack * BigInt::from(2u8)) / &scale;
    assert_eq!(lower, upper, "oracle precision insufficient");
    lower
}

#[test]
fn floor_exp_agrees_with_scaled_series_oracle() {
    for (p, q, m) in [
        (1u64, 10u64, 2u64),
        (1, 10, 24),
        (1, 10, 192),
        (3, 7, 40),
        (1, 1, 5),
    ] {
        let lambda = Rational::new(BigInt::from(p), BigInt::from(q));
        let expected = floor_exp_oracle(p * m, q, 600);
        assert_eq!(floor_exp(&lambda, m).unwrap(), expected, "exp({p}*{m}/{q})");
    }
}

#[test]
fn floor_exp_brackets_its_own_enclosure() {
    // result <= exp(lambda m) < result + 1, via the certified enclosure
    let lambda = parse_rational("7/13").unwrap();
    for m in [1u64, 5, 17, 60] {
        let f = floor_exp(&lambda, m).unwrap();
        let enc = cflab_core::numeric::exp_enclosure(
            &(lambda.clone() * Rational::from(BigInt::from(m))),
            128,
        );
        assert!(Rational::from(f.clone()) <= enc.lo().clone());
        assert!(enc.hi() < &Rational::from(&f + BigInt::one()));
    }
}

#[test]
fn surd_floor_and_sign_against_decimal_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let non_squares = [2u32, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 17, 19, 21, 23];
    let scale = BigInt::from(10u8).pow(200);
    let mut checked = 0u32;
    while checked < 1000 {
        let a = rng.gen_range(-50i64..=50);
        let b = rng.gen_range(-20i64..=20);
        if b == 0 {
            continue;
        }
        let d = non_squares[rng.gen_range(0..non_squares.len())];
        let c = rng.gen_range(1i64..=30);
        let x = QuadraticSurd::new(a, b, d, c).unwrap();
        // 200-digit decimal expansion: floor(x * 10^200)
        let digits = x.scaled_floor(200);
        let floor = x.floor();
        assert_eq!(
            floor,
            num_integer::Integer::div_floor(&digits, &scale),
            "floor vs decimal for {x}"
        );
        assert_eq!(
            x.is_positive(),
            digits.is_positive(),
            "sign vs decimal for {x}"
        );
        // independent bracketing by pure sign arithmetic (no square roots):
        // floor <= x < floor + 1
        let f = Rational::from(floor.clone());
        let f1 = Rational::from(&floor + BigInt::one());
        assert_eq!(x.cmp_rational(&f), Ordering::Greater, "lower bracket {x}");
        assert_eq!(x.cmp_rational(&f1), Ordering::Less, "upper bracket {x}");
        checked += 1;
    }
}

#[test]
fn surd_mobius_closure_preserves_value() {
    // applying the Gauss step matrix and undoing it returns the original
    // surd; the defining quadratic data is preserved under normalization
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let non_squares = [2u32, 3, 5, 7, 13];
    for _ in 0..200 {
        let b = *[-3i64, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
        let x = QuadraticSurd::new(
            rng.gen_range(-9i64..=9),
            b,
            non_squares[rng.gen_range(0..non_squares.len())],
            rng.gen_range(1i64..=9),
        )
        .unwrap();
        let m = cflab_core::numeric::MobiusMatrix::new(2, 1, 1, 1);
        let m_inv = cflab_core::numeric::MobiusMatrix::new(1, -1, -1, 2);
        let y = x.mobius(&m).mobius(&m_inv);
        assert_eq!(x, y);
    }
}
