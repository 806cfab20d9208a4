//! Exact evaluation of the chain objectives: the term atoms
//! `[r * binom(n - ceil(b), n - d)]^(1/d)`, the chain objective `f`, the
//! sixfold objective `g`, the bounding expression for the non-integral
//! sixfold vertices, and the per-`b` column upper bound.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::binomial;
use crate::chains::{
    validate_chain, validate_profile, Chain, ChainViolation, ProfileViolation, SixfoldProfile,
};
use crate::radical::RadicalSum;
use crate::rational::{ceil_to_int, Rational};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EvalError {
    #[error("ceil(b) must lie in [0, n]")]
    CeilOutOfRange,
    #[error("d must lie in [1, n]")]
    IndexOutOfRange,
    #[error("invalid chain: {0:?}")]
    InvalidChain(Vec<ChainViolation>),
    #[error("invalid profile: {0:?}")]
    InvalidProfile(Vec<ProfileViolation>),
    #[error("invalid prefix: {0:?}")]
    InvalidPrefix(Vec<ChainViolation>),
    #[error("non-integral vertex multiplicity must be at least 3, got {0}")]
    MTooSmall(u64),
}

/// The term atom `[r * binom(n - ceil(b), n - d)]^(1/d)` as a canonical
/// radical; `binom(0, 0) = 1` covers the leading pair `(n, n)`.
pub fn term_value(b: &Rational, d: u32, n: u32, r: u64) -> Result<RadicalSum, EvalError> {
    if d < 1 || d > n {
        return Err(EvalError::IndexOutOfRange);
    }
    let ceil_b = ceil_to_int(b);
    if ceil_b.is_negative() || ceil_b > BigInt::from(n) {
        return Err(EvalError::CeilOutOfRange);
    }
    let ceil_b = u32::try_from(ceil_b.to_biguint().unwrap()).unwrap();
    let radicand = BigUint::from(r) * binomial(n - ceil_b, n - d);
    Ok(RadicalSum::from_parts(Rational::one(), radicand, d))
}

/// The chain objective `f`: `sum (b_i - b_{i+1}) * term(b_i, d_i)` with the
/// implicit terminal `b_{s+1} = 0`.
pub fn f_eval(c: &Chain, r: u64) -> Result<RadicalSum, EvalError> {
    let violations = validate_chain(c);
    if !violations.is_empty() {
        return Err(EvalError::InvalidChain(violations));
    }
    let mut total = RadicalSum::zero();
    for i in 0..c.pairs.len() {
        let (b, d) = &c.pairs[i];
        let next_b = c
            .pairs
            .get(i + 1)
            .map(|(nb, _)| nb.clone())
            .unwrap_or_else(Rational::zero);
        let gap = b - &next_b;
        let term = term_value(b, *d, c.n, r)?;
        total = total.add(&term.scale(&gap));
    }
    Ok(total)
}

/// The sixfold objective `g`: `sum (b_i - b_{i+1}) * m_i^(1/d_i)` with
/// `m_0 = 1`.
pub fn g_eval(p: &SixfoldProfile) -> Result<RadicalSum, EvalError> {
    let violations = validate_profile(p);
    if !violations.is_empty() {
        return Err(EvalError::InvalidProfile(violations));
    }
    let mut total = RadicalSum::zero();
    for i in 0..p.pairs.len() {
        let (b, d) = &p.pairs[i];
        let next_b = p
            .pairs
            .get(i + 1)
            .map(|(nb, _)| nb.clone())
            .unwrap_or_else(Rational::zero);
        let gap = b - &next_b;
        let m = if i == 0 {
            BigUint::one()
        } else {
            BigUint::from(p.m[i - 1])
        };
        total = total.add(&RadicalSum::from_parts(gap, m, *d));
    }
    Ok(total)
}

/// Upper bound for the sixfold objective at a vertex whose distinguished
/// index carries `d_i = 2`, `b_i = 2/m` with `m >= 3`: the integral prefix
/// terms at their binomial caps, the pivot gap `b_{i-1} - 2/m`, and the
/// closing `2/sqrt(m)`.
pub fn g_bound_nonintegral(n: u32, prefix: &[(u32, u32)], m: u64) -> Result<RadicalSum, EvalError> {
    if m < 3 {
        return Err(EvalError::MTooSmall(m));
    }
    if prefix.first() != Some(&(n, n)) {
        return Err(EvalError::InvalidPrefix(vec![ChainViolation::LeadingPair]));
    }
    let chain = Chain::integral(n, &prefix[1..]);
    let violations = validate_chain(&chain);
    if !violations.is_empty() {
        return Err(EvalError::InvalidPrefix(violations));
    }
    let m_rational = Rational::new(BigInt::from(2), BigInt::from(m));
    let mut total = RadicalSum::zero();
    for j in 0..prefix.len() {
        let (b, d) = prefix[j];
        let gap = match prefix.get(j + 1) {
            Some(&(next_b, _)) => Rational::from_integer(BigInt::from(b - next_b)),
            None => Rational::from_integer(BigInt::from(b)) - &m_rational,
        };
        total = total.add(&RadicalSum::from_parts(gap, binomial(n - b, n - d), d));
    }
    total = total.add(&RadicalSum::from_parts(m_rational, BigUint::from(m), 2));
    Ok(total)
}

/// `sum over b of max over d in [b, n]` of the term atom; the inner maxima
/// use certified comparison and break ties toward smaller `d`.
pub fn sumbound_upper(n: u32, r: u64) -> RadicalSum {
    sumbound_upper_with_choices(n, r).0
}

/// As [`sumbound_upper`], also reporting the maximizing `d` per `b`.
pub fn sumbound_upper_with_choices(n: u32, r: u64) -> (RadicalSum, Vec<(u32, u32)>) {
    assert!(n >= 1 && r >= 1);
    let mut total = RadicalSum::zero();
    let mut choices = Vec::with_capacity(n as usize);
    for b in 1..=n {
        let b_rational = Rational::from_integer(BigInt::from(b));
        let mut best = term_value(&b_rational, b, n, r).expect("b <= n");
        let mut best_d = b;
        for d in b + 1..=n {
            let candidate = term_value(&b_rational, d, n, r).expect("d <= n");
            if candidate > best {
                best = candidate;
                best_d = d;
            }
        }
        choices.push((b, best_d));
        total = total.add(&best);
    }
    (total, choices)
}

/// The identity chain `b = d = (n, n-1, ..., 1)` whose value is exactly
/// `sum r^(1/b)`.
pub fn identity_chain(n: u32) -> Chain {
    let steps: Vec<(u32, u32)> = (1..n).rev().map(|v| (v, v)).collect();
    Chain::integral(n, &steps)
}

/// `sum_{b=1}^{n} r^(1/b)` as an exact radical sum.
pub fn root_sum(n: u32, r: u64) -> RadicalSum {
    let mut total = RadicalSum::zero();
    for b in 1..=n {
        total = total.add(&RadicalSum::from_parts(
            Rational::one(),
            BigUint::from(r),
            b,
        ));
    }
    total
}
