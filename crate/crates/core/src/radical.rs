//! Canonical finite sums of rational multiples of real d-th roots of
//! positive integers: the exact value type of every objective in this
//! crate.
//!
//! Canonical form means: every term's radicand carries no extractable
//! power content, the root index is minimal (index 1 exactly for rational
//! terms), no two terms share a `(radicand, index)` pair, and zero terms
//! are dropped. Distinct canonical radicals are linearly independent over
//! the rationals, so structural identity of canonical forms decides
//! equality of the represented reals and every nonzero sum is bounded
//! away from zero; comparisons therefore terminate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factorize, TRIAL_DIVISION_LIMIT};
use crate::dyadic::{root_enclosure, Dyadic, DyadicInterval, Round};
use crate::rational::{
    abs_ceil, floor_to_int, format_rational, lex_rational, lex_uint, ParseError, Rational,
};

/// Refinement cap for certified sign decisions; reaching it means the
/// canonical-form invariant was violated upstream.
const MAX_SIGN_BITS: u32 = 1 << 20;

/// Largest accepted root index in parsed input.
pub const MAX_PARSED_INDEX: u32 = 1_000_000;

/// A canonical term `coeff * radicand^(1/index)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalTerm {
    coeff: Rational,
    radicand: BigUint,
    index: u32,
}

impl RadicalTerm {
    /// Canonicalize `coeff * k^(1/d)`: extracts perfect-power content of
    /// `k` into the coefficient and reduces `d` to its minimum. A zero
    /// value (zero coefficient or zero radicand) canonicalizes to the
    /// rational zero term, which sums never store.
    pub fn canonical(coeff: Rational, k: BigUint, d: u32) -> RadicalTerm {
        assert!(d >= 1, "root index must be positive");
        if coeff.is_zero() || k.is_zero() {
            return RadicalTerm {
                coeff: Rational::zero(),
                radicand: BigUint::one(),
                index: 1,
            };
        }
        if k.is_one() || d == 1 {
            let value = coeff * Rational::from_integer(BigInt::from(k));
            return RadicalTerm {
                coeff: value,
                radicand: BigUint::one(),
                index: 1,
            };
        }
        let factors = factorize(&k, TRIAL_DIVISION_LIMIT);
        let d64 = u64::from(d);
        let mut extracted = BigUint::one();
        let mut residues = Vec::with_capacity(factors.len());
        for (base, e) in &factors {
            let whole = e / d64;
            if whole > 0 {
                extracted *= base.pow(u32::try_from(whole).expect("exponent fits u32"));
            }
            let rem = e % d64;
            if rem > 0 {
                residues.push((base.clone(), rem));
            }
        }
        let coeff = coeff * Rational::from_integer(BigInt::from(extracted));
        if residues.is_empty() {
            return RadicalTerm {
                coeff,
                radicand: BigUint::one(),
                index: 1,
            };
        }
        let mut g = d64;
        for (_, e) in &residues {
            g = g.gcd(e);
        }
        let index = u32::try_from(d64 / g).unwrap();
        let mut radicand = BigUint::one();
        for (base, e) in residues {
            radicand *= base.pow(u32::try_from(e / g).unwrap());
        }
        RadicalTerm {
            coeff,
            radicand,
            index,
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_rational(&self) -> bool {
        self.index == 1
    }

    fn key(&self) -> (u32, &BigUint) {
        (self.index, &self.radicand)
    }
}

impl fmt::Display for RadicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", format_rational(&self.coeff))
        } else {
            write!(
                f,
                "{} * {}^(1/{})",
                format_rational(&self.coeff),
                self.radicand,
                self.index
            )
        }
    }
}

/// A canonical radical sum; the empty sum is exactly zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RadicalSum {
    terms: Vec<RadicalTerm>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum { terms: Vec::new() }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_term(RadicalTerm::canonical(q, BigUint::one(), 1))
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_term(t: RadicalTerm) -> Self {
        if t.coeff.is_zero() {
            return Self::zero();
        }
        RadicalSum { terms: vec![t] }
    }

    /// Canonical sum equal to `coeff * k^(1/d)`.
    pub fn from_parts(coeff: Rational, k: BigUint, d: u32) -> Self {
        Self::from_term(RadicalTerm::canonical(coeff, k, d))
    }

    pub fn terms(&self) -> &[RadicalTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].is_rational())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 && self.terms[0].is_rational() {
            return Some(self.terms[0].coeff.clone());
        }
        None
    }

    pub fn add(&self, other: &RadicalSum) -> RadicalSum {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let x = &self.terms[i];
            let y = &other.terms[j];
            match x.key().cmp(&y.key()) {
                Ordering::Less => {
                    terms.push(x.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(y.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = &x.coeff + &y.coeff;
                    if !coeff.is_zero() {
                        terms.push(RadicalTerm {
                            coeff,
                            radicand: x.radicand.clone(),
                            index: x.index,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(other.terms[j..].iter().cloned());
        RadicalSum { terms }
    }

    pub fn neg(&self) -> RadicalSum {
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|t| RadicalTerm {
                    coeff: -t.coeff.clone(),
                    radicand: t.radicand.clone(),
                    index: t.index,
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &RadicalSum) -> RadicalSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> RadicalSum {
        if q.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|t| RadicalTerm {
                    coeff: q * &t.coeff,
                    radicand: t.radicand.clone(),
                    index: t.index,
                })
                .collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> RadicalSum {
        self.scale(&Rational::from_integer(BigInt::from(k)))
    }

    /// Certified enclosure of width at most `2^(1-precision) * max(1, |self|)`
    /// (in fact at most `2^-precision` absolutely). Higher precision gives a
    /// narrower interval.
    pub fn enclose(&self, precision: u32) -> DyadicInterval {
        if self.terms.is_empty() {
            return DyadicInterval::exact(Dyadic::zero(), precision);
        }
        let mut budget = BigUint::from(2 * self.terms.len() as u64);
        for t in &self.terms {
            budget += abs_ceil(&t.coeff);
        }
        let frac = precision + u32::try_from(budget.bits()).unwrap() + 1;
        let mut lo = Dyadic::zero();
        let mut hi = Dyadic::zero();
        for t in &self.terms {
            let root = root_enclosure(&t.radicand, t.index, frac);
            let (term_lo, term_hi) = if t.coeff.is_positive() {
                (
                    root.lo().mul_rational(&t.coeff, frac, Round::Down),
                    root.hi().mul_rational(&t.coeff, frac, Round::Up),
                )
            } else {
                (
                    root.hi().mul_rational(&t.coeff, frac, Round::Down),
                    root.lo().mul_rational(&t.coeff, frac, Round::Up),
                )
            };
            lo = lo.add(&term_lo);
            hi = hi.add(&term_hi);
        }
        DyadicInterval::new(lo, hi, precision)
    }

    /// Certified sign of the represented real.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.len() == 1 {
            return if self.terms[0].coeff.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        let mut precision = 64;
        loop {
            let enc = self.enclose(precision);
            if enc.strictly_positive() {
                return Ordering::Greater;
            }
            if enc.strictly_negative() {
                return Ordering::Less;
            }
            precision = precision.checked_mul(2).expect("precision overflow");
            assert!(
                precision <= MAX_SIGN_BITS,
                "sign refinement exceeded {MAX_SIGN_BITS} bits; canonical invariant violated"
            );
        }
    }

    /// Exact floor, decided symbolically for rational values and by
    /// enclosure refinement otherwise.
    pub fn floor_certified(&self) -> BigInt {
        self.floor_with_certificate().0
    }

    /// Floor plus the terminating enclosure (`None` for the symbolic path).
    pub fn floor_with_certificate(&self) -> (BigInt, Option<DyadicInterval>) {
        if let Some(q) = self.to_rational() {
            return (floor_to_int(&q), None);
        }
        let mut precision = 64;
        loop {
            let enc = self.enclose(precision);
            let lo = enc.lo().floor_int();
            let hi = enc.hi().floor_int();
            if lo == hi {
                return (lo, Some(enc));
            }
            precision = precision.checked_mul(2).expect("precision overflow");
            assert!(
                precision <= MAX_SIGN_BITS,
                "floor refinement exceeded {MAX_SIGN_BITS} bits; canonical invariant violated"
            );
        }
    }
}

impl Ord for RadicalSum {
    /// Certified total order: structural equality short-circuits, then the
    /// sign of the exact difference is decided by adaptive refinement.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.sub(other).sign()
    }
}

impl PartialOrd for RadicalSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        RadicalSum::add(self, rhs)
    }
}

impl std::ops::Sub for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        RadicalSum::sub(self, rhs)
    }
}

impl std::ops::Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum::neg(self)
    }
}

impl fmt::Display for RadicalSum {
    /// Canonical textual form: terms sorted by (index, radicand), joined by
    /// `" + "`, each rendered as `q * k^(1/d)` with a lowest-terms `q`;
    /// rational terms render as the bare fraction. The empty sum is `"0"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for RadicalSum {
    type Err = ParseError;

    /// Parse the textual form produced by `Display`. Whitespace between
    /// tokens is tolerated; terms are canonicalized and merged, so parsing
    /// the output of `Display` reproduces the value exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = skip_spaces(bytes, 0);
        if pos == bytes.len() {
            return Err(ParseError::Empty);
        }
        let mut sum = RadicalSum::zero();
        loop {
            let (term, next) = parse_term(bytes, pos)?;
            sum = sum.add(&RadicalSum::from_term(term));
            pos = skip_spaces(bytes, next);
            if pos == bytes.len() {
                return Ok(sum);
            }
            if bytes[pos] != b'+' {
                return Err(ParseError::Unexpected(pos));
            }
            pos = skip_spaces(bytes, pos + 1);
        }
    }
}

fn skip_spaces(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos] == b' ' {
        pos += 1;
    }
    pos
}

fn parse_term(bytes: &[u8], pos: usize) -> Result<(RadicalTerm, usize), ParseError> {
    let (coeff, next) = lex_rational(bytes, pos)?;
    let after = skip_spaces(bytes, next);
    if bytes.get(after) == Some(&b'*') {
        let pos = skip_spaces(bytes, after + 1);
        let (radicand, next) = lex_uint(bytes, pos)?;
        let (index, next) = parse_root_suffix(bytes, next)?;
        Ok((RadicalTerm::canonical(coeff, radicand, index), next))
    } else {
        Ok((RadicalTerm::canonical(coeff, BigUint::one(), 1), next))
    }
}

fn parse_root_suffix(bytes: &[u8], pos: usize) -> Result<(u32, usize), ParseError> {
    for (offset, expected) in b"^(1/".iter().enumerate() {
        if bytes.get(pos + offset) != Some(expected) {
            return Err(ParseError::Unexpected(pos + offset));
        }
    }
    let (index, next) = lex_uint(bytes, pos + 4)?;
    if bytes.get(next) != Some(&b')') {
        return Err(ParseError::Unexpected(next));
    }
    let index = match u32::try_from(&index) {
        Ok(i) if (1..=MAX_PARSED_INDEX).contains(&i) => i,
        Ok(0) => return Err(ParseError::ZeroIndex),
        _ => return Err(ParseError::TooLong(7)),
    };
    Ok((index, next + 1))
}
