//! Möbius iterated function systems on `[0,1]`: the backward-continued-
//! fraction family `psi_i(x) = 1 - 1/(x + i - 1)` over digits i >= 2 (with
//! the parabolic letter 2 fixing 0), and the Gauss family
//! `phi_i(x) = 1/(x + i)` over i >= 1 used as a validation target.
//!
//! Words compose to single determinant-±1 integer matrices, so fundamental
//! intervals, derivative extrema and diameters are exact rationals: the
//! derivative `1/(cx+d)^2` is monotone on `[0,1]` and attains its extrema at
//! the endpoints.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{ln_enclosure, DyadicInterval, MobiusMatrix, Rational};

/// Which Möbius family generates the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `psi_i(x) = 1 - 1/(x + i - 1)`, digit alphabet in N>=2.
    Bcf,
    /// `phi_i(x) = 1/(x + i)`, digit alphabet in N>=1.
    Gauss,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Bcf => "BCF",
            FamilyKind::Gauss => "GAUSS",
        }
    }

    fn min_letter(&self) -> u64 {
        match self {
            FamilyKind::Bcf => 2,
            FamilyKind::Gauss => 1,
        }
    }

    /// Letter matrix acting on the unit interval.
    pub fn letter_matrix(&self, letter: u64) -> MobiusMatrix {
        match self {
            // psi_i = (x + i-2)/(x + i-1)
            FamilyKind::Bcf => MobiusMatrix::new(1, letter as i64 - 2, 1, letter as i64 - 1),
            // phi_i = 1/(x + i)
            FamilyKind::Gauss => MobiusMatrix::new(0, 1, 1, letter as i64),
        }
    }
}

/// A finite Möbius family over a digit alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfsFamily {
    kind: FamilyKind,
    alphabet: BTreeSet<u64>,
}

impl IfsFamily {
    pub fn new(kind: FamilyKind, alphabet: impl IntoIterator<Item = u64>) -> Result<IfsFamily> {
        let alphabet: BTreeSet<u64> = alphabet.into_iter().collect();
        if alphabet.len() < 2 {
            return Err(Error::InvalidInput(
                "an IFS alphabet needs at least two letters".into(),
            ));
        }
        if let Some(&bad) = alphabet.iter().find(|&&l| l < kind.min_letter()) {
            return Err(Error::InvalidInput(format!(
                "letter {bad} below the {} minimum {}",
                kind.name(),
                kind.min_letter()
            )));
        }
        Ok(IfsFamily { kind, alphabet })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn alphabet(&self) -> &BTreeSet<u64> {
        &self.alphabet
    }

    pub fn contains(&self, letter: u64) -> bool {
        self.alphabet.contains(&letter)
    }

    /// Exact parabolicity test for a letter: a fixed point in `[0,1]` with
    /// |derivative| = 1, i.e. trace^2 = 4 det with the fixed point inside.
    pub fn is_parabolic_letter(&self, letter: u64) -> bool {
        is_parabolic_matrix(&self.kind.letter_matrix(letter))
    }

    /// Letters of the alphabet that are parabolic (for the BCF family this
    /// is {2} when present; the Gauss family has none).
    pub fn parabolic_letters(&self) -> Vec<u64> {
        self.alphabet
            .iter()
            .copied()
            .filter(|&l| self.is_parabolic_letter(l))
            .collect()
    }
}

/// Parabolic iff trace^2 = 4 det and the (then unique) fixed point lies in
/// `[0,1]`.
pub fn is_parabolic_matrix(m: &MobiusMatrix) -> bool {
    let tr = &m.a + &m.d;
    if &tr * &tr != BigInt::from(4) * m.determinant() {
        return false;
    }
    if m.c.is_zero() {
        // x -> (a x + b)/d with a = d: translation; fixed point only if b=0
        return m.b.is_zero();
    }
    let fixed = Rational::new(&m.a - &m.d, BigInt::from(2) * &m.c);
    fixed >= Rational::zero() && fixed <= Rational::from(BigInt::from(1))
}

/// A non-empty finite word over a digit alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IfsWord(Vec<u64>);

impl IfsWord {
    pub fn new(letters: Vec<u64>) -> Result<IfsWord> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("empty IFS word".into()));
        }
        Ok(IfsWord(letters))
    }

    pub fn letters(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> u64 {
        *self.0.last().unwrap()
    }

    /// Parse the comma-separated form `"2,2,3"`.
    pub fn parse(s: &str) -> Result<IfsWord> {
        let letters: std::result::Result<Vec<u64>, _> =
            s.split(',').map(|p| p.trim().parse::<u64>()).collect();
        IfsWord::new(letters.map_err(|_| Error::InvalidInput(format!("bad word {s:?}")))?)
    }

    pub fn concat(&self, other: &IfsWord) -> IfsWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        IfsWord(letters)
    }
}

impl fmt::Display for IfsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for IfsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Compose the word's letter matrices: `psi_w = psi_{w1} ∘ ... ∘ psi_{wn}`
/// is the matrix product in the same order.
pub fn word_matrix(family: &IfsFamily, word: &IfsWord) -> Result<MobiusMatrix> {
    let mut m: Option<MobiusMatrix> = None;
    for &letter in word.letters() {
        if !family.contains(letter) {
            return Err(Error::InvalidInput(format!(
                "letter {letter} outside the alphabet"
            )));
        }
        let lm = family.kind.letter_matrix(letter);
        m = Some(match m {
            None => lm,
            Some(acc) => acc.compose(&lm),
        });
    }
    Ok(m.expect("word is non-empty"))
}

/// Exact image of a rational point under the composed word map.
pub fn apply_word(family: &IfsFamily, word: &IfsWord, x: &Rational) -> Result<Rational> {
    Ok(word_matrix(family, word)?.apply(x))
}

/// The exact image interval `psi_w([0,1])` with sorted endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalInterval {
    pub word: IfsWord,
    pub lower: Rational,
    pub upper: Rational,
}

impl FundamentalInterval {
    pub fn diameter(&self) -> Rational {
        &self.upper - &self.lower
    }

    /// Closed-interval intersection test.
    pub fn intersects(&self, other: &FundamentalInterval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    /// Open-interval (interior) intersection test; adjacent letter cells
    /// share endpoints, which the open set condition allows.
    pub fn interiors_intersect(&self, other: &FundamentalInterval) -> bool {
        self.lower < other.upper && other.lower < self.upper
    }

    pub fn contains_interval(&self, other: &FundamentalInterval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

/// Fundamental interval of a word: sorted images of 0 and 1.
pub fn fundamental_interval(family: &IfsFamily, word: &IfsWord) -> Result<FundamentalInterval> {
    let m = word_matrix(family, word)?;
    interval_of_matrix(word.clone(), &m)
}

fn interval_of_matrix(word: IfsWord, m: &MobiusMatrix) -> Result<FundamentalInterval> {
    let at0 = m.apply(&Rational::zero());
    let at1 = m.apply(&Rational::from(BigInt::from(1)));
    let (lower, upper) = if at0 <= at1 { (at0, at1) } else { (at1, at0) };
    Ok(FundamentalInterval { word, lower, upper })
}

/// Exact `(inf, sup)` of `|psi'_w|` over `[0,1]`.
///
/// With determinant ±1 the derivative is `1/(cx+d)^2`, monotone on `[0,1]`
/// for the nonnegative matrices of both families, so the extrema sit at the
/// endpoints.
pub fn derivative_range(family: &IfsFamily, word: &IfsWord) -> Result<(Rational, Rational)> {
    let m = word_matrix(family, word)?;
    Ok(derivative_range_of_matrix(&m))
}

pub(crate) fn derivative_range_of_matrix(m: &MobiusMatrix) -> (Rational, Rational) {
    let at0 = m.derivative_abs(&Rational::zero());
    let at1 = m.derivative_abs(&Rational::from(BigInt::from(1)));
    if at0 <= at1 {
        (at0, at1)
    } else {
        (at1, at0)
    }
}

/// Distortion `log(sup / inf)` of the word's derivative, certified to well
/// below 1e-12.
pub fn distortion(family: &IfsFamily, word: &IfsWord) -> Result<DyadicInterval> {
    let (inf, sup) = derivative_range(family, word)?;
    Ok(ln_enclosure(&(sup / inf), 64))
}

/// Exact Euclidean diameter of a fundamental interval.
pub fn interval_diameter(interval: &FundamentalInterval) -> Rational {
    interval.diameter()
}

/// The measured distortion statistic at word length `n`: the largest
/// `log(sup/inf)` over all length-`n` words, with the word attaining it.
///
/// For parabolic families the maximum sits on the pure parabolic word and
/// grows like `2 log n`: finite at every length and sublinear, the shape
/// mild distortion requires.
pub fn max_distortion(family: &IfsFamily, n: usize) -> Result<(IfsWord, DyadicInterval)> {
    if n == 0 {
        return Err(Error::InvalidInput("word length must be positive".into()));
    }
    let letters: Vec<u64> = family.alphabet().iter().copied().collect();
    let count = letters
        .len()
        .checked_pow(n as u32)
        .filter(|&c| c <= 1 << 20)
        .ok_or_else(|| Error::BudgetExceeded("distortion word budget".into()))?;
    let _ = count;
    let mut worst: Option<(Rational, IfsWord)> = None;
    let mut indices = vec![0usize; n];
    loop {
        let word = IfsWord::new(indices.iter().map(|&i| letters[i]).collect())?;
        let (inf, sup) = derivative_range(family, &word)?;
        let ratio = sup / inf;
        if worst.as_ref().is_none_or(|(best, _)| ratio > *best) {
            worst = Some((ratio, word));
        }
        let mut level = n;
        loop {
            if level == 0 {
                let (ratio, word) = worst.expect("nonempty enumeration");
                let enclosure = ln_enclosure(&ratio, 64);
                return Ok((word, enclosure));
            }
            indices[level - 1] += 1;
            if indices[level - 1] < letters.len() {
                break;
            }
            indices[level - 1] = 0;
            level -= 1;
        }
    }
}

/// Verify the open set condition exactly: distinct letters map the interior
/// of `[0,1]` to disjoint interiors.
pub fn check_open_set_condition(family: &IfsFamily) -> Result<bool> {
    let letters: Vec<u64> = family.alphabet().iter().copied().collect();
    let cells: Vec<FundamentalInterval> = letters
        .iter()
        .map(|&l| fundamental_interval(family, &IfsWord::new(vec![l]).unwrap()))
        .collect::<Result<_>>()?;
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if cells[i].interiors_intersect(&cells[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
