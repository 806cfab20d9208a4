//! The feasible chain regions: strictly decreasing `(b, d)` sequences with
//! `b_i <= d_i` (the search space of `F`), their sixfold refinement with
//! multiplicities `m_i`, validation that reports every violated condition,
//! and exhaustive enumeration of integer-valued chains.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use thiserror::Error;

use crate::arith::binomial;
use crate::rational::{ceil_to_int, format_rational, lex_rational, lex_uint, ParseError, Rational};

/// An element of the chain region: `pairs[0] = (n, n)` and the implicit
/// terminal pair is `(0, 0)`. The `b` coordinates may be rational; the
/// enumerators and solvers restrict to integral `b`, which suffices for
/// maximization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub n: u32,
    pub pairs: Vec<(Rational, u32)>,
}

/// A sixfold-refined element: a chain plus multiplicities `m_1 ... m_s`
/// (`m_0` is fixed to 1 and never stored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixfoldProfile {
    pub n: u32,
    pub pairs: Vec<(Rational, u32)>,
    pub m: Vec<u64>,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ChainViolation {
    #[error("n must be at least 1")]
    NTooSmall,
    #[error("chain has no pairs")]
    Empty,
    #[error("leading pair must be (n, n)")]
    LeadingPair,
    #[error("b not strictly decreasing at index {0}")]
    BNotDecreasing(usize),
    #[error("d not strictly decreasing at index {0}")]
    DNotDecreasing(usize),
    #[error("b must be positive at index {0}")]
    BNotPositive(usize),
    #[error("d must be positive at index {0}")]
    DNotPositive(usize),
    #[error("b exceeds d at index {0}")]
    BExceedsD(usize),
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ProfileViolation {
    #[error(transparent)]
    Chain(ChainViolation),
    #[error("expected {expected} multiplicities, found {found}")]
    MCount { expected: usize, found: usize },
    #[error("m must be positive at index {0}")]
    MNotPositive(usize),
    #[error("m exceeds its binomial cap at index {0}")]
    MExceedsBinomial(usize),
    #[error("b must be at most 2/m when d = 2, violated at index {0}")]
    BTooLargeForSurface(usize),
    #[error("d_1 must differ from n - 1")]
    FirstDimForbidden,
}

impl Chain {
    /// Chain with integral `b` given the steps after the leading `(n, n)`.
    pub fn integral(n: u32, steps: &[(u32, u32)]) -> Chain {
        let mut pairs = Vec::with_capacity(steps.len() + 1);
        pairs.push((Rational::from_integer(BigInt::from(n)), n));
        for &(b, d) in steps {
            pairs.push((Rational::from_integer(BigInt::from(b)), d));
        }
        Chain { n, pairs }
    }

    /// Number of non-leading steps `s`.
    pub fn s(&self) -> usize {
        self.pairs.len().saturating_sub(1)
    }

    /// The bracketed `b` column of the witness form, e.g. `"[6,4]"`.
    pub fn b_list(&self) -> String {
        bracketed(self.pairs.iter().map(|(b, _)| format_rational(b)))
    }

    /// The bracketed `d` column of the witness form.
    pub fn d_list(&self) -> String {
        bracketed(self.pairs.iter().map(|(_, d)| d.to_string()))
    }

    /// The `(b, d)` steps as integers when every `b` is integral.
    pub fn integral_steps(&self) -> Option<Vec<(u32, u32)>> {
        self.pairs
            .get(1..)
            .unwrap_or(&[])
            .iter()
            .map(|(b, d)| {
                if b.is_integer() && b.is_positive() {
                    u32::try_from(b.numer().to_biguint().unwrap())
                        .ok()
                        .map(|b| (b, *d))
                } else {
                    None
                }
            })
            .collect()
    }
}

impl SixfoldProfile {
    pub fn integral(n: u32, steps: &[(u32, u32)], m: &[u64]) -> SixfoldProfile {
        let chain = Chain::integral(n, steps);
        SixfoldProfile {
            n,
            pairs: chain.pairs,
            m: m.to_vec(),
        }
    }

    pub fn chain(&self) -> Chain {
        Chain {
            n: self.n,
            pairs: self.pairs.clone(),
        }
    }

    pub fn s(&self) -> usize {
        self.pairs.len().saturating_sub(1)
    }
}

/// Check every region condition; violations are data, not failures.
pub fn validate_chain(c: &Chain) -> Vec<ChainViolation> {
    let mut violations = Vec::new();
    if c.n == 0 {
        violations.push(ChainViolation::NTooSmall);
    }
    if c.pairs.is_empty() {
        violations.push(ChainViolation::Empty);
        return violations;
    }
    let n_rational = Rational::from_integer(BigInt::from(c.n));
    if c.pairs[0].0 != n_rational || c.pairs[0].1 != c.n {
        violations.push(ChainViolation::LeadingPair);
    }
    for i in 1..c.pairs.len() {
        let (b, d) = &c.pairs[i];
        let (prev_b, prev_d) = &c.pairs[i - 1];
        if b >= prev_b {
            violations.push(ChainViolation::BNotDecreasing(i));
        }
        if d >= prev_d {
            violations.push(ChainViolation::DNotDecreasing(i));
        }
        if !b.is_positive() {
            violations.push(ChainViolation::BNotPositive(i));
        }
        if *d == 0 {
            violations.push(ChainViolation::DNotPositive(i));
        }
        if b > &Rational::from_integer(BigInt::from(*d)) {
            violations.push(ChainViolation::BExceedsD(i));
        }
    }
    violations
}

/// Chain conditions plus the sixfold refinements: the binomial cap on
/// `m_i`, the surface rule `b_i <= 2/m_i` when `d_i = 2`, and `d_1 != n-1`.
pub fn validate_profile(p: &SixfoldProfile) -> Vec<ProfileViolation> {
    let mut violations: Vec<ProfileViolation> = validate_chain(&p.chain())
        .into_iter()
        .map(ProfileViolation::Chain)
        .collect();
    let s = p.s();
    if p.m.len() != s {
        violations.push(ProfileViolation::MCount {
            expected: s,
            found: p.m.len(),
        });
    }
    if !violations.is_empty() {
        return violations;
    }
    for i in 1..=s {
        let (b, d) = &p.pairs[i];
        let m = p.m[i - 1];
        if m == 0 {
            violations.push(ProfileViolation::MNotPositive(i));
            continue;
        }
        let ceil_b = u32::try_from(ceil_to_int(b).to_biguint().unwrap()).unwrap();
        if BigUint::from(m) > binomial(p.n - ceil_b, p.n - d) {
            violations.push(ProfileViolation::MExceedsBinomial(i));
        }
        if *d == 2 && b > &Rational::new(BigInt::from(2), BigInt::from(m)) {
            violations.push(ProfileViolation::BTooLargeForSurface(i));
        }
    }
    if s >= 1 && p.pairs[1].1 == p.n - 1 {
        violations.push(ProfileViolation::FirstDimForbidden);
    }
    violations
}

/// Depth-first enumeration of every valid chain with integral `b`,
/// decreasing `b` first and then decreasing `d`, each chain exactly once.
pub fn enumerate_integer_chains(n: u32) -> IntegerChains {
    assert!(n >= 1, "enumeration needs n >= 1");
    IntegerChains {
        n,
        stack: vec![Vec::new()],
    }
}

pub struct IntegerChains {
    n: u32,
    stack: Vec<Vec<(u32, u32)>>,
}

impl Iterator for IntegerChains {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        let steps = self.stack.pop()?;
        let (last_b, last_d) = steps.last().copied().unwrap_or((self.n, self.n));
        // Push in ascending order so the largest (b, d) pops first.
        for b in 1..last_b {
            for d in b..last_d {
                let mut child = steps.clone();
                child.push((b, d));
                self.stack.push(child);
            }
        }
        Some(Chain::integral(self.n, &steps))
    }
}

fn bracketed(items: impl Iterator<Item = String>) -> String {
    let mut out = String::from("[");
    for (i, item) in items.enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&item);
    }
    out.push(']');
    out
}

fn write_list<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    write!(f, "[")?;
    for (i, item) in items.enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, "]")
}

impl fmt::Display for Chain {
    /// Witness form `b=[6,4]; d=[6,4]`; `b` and `d` include the leading `n`,
    /// terminal zeros are implicit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b=")?;
        write_list(f, self.pairs.iter().map(|(b, _)| format_rational(b)))?;
        write!(f, "; d=")?;
        write_list(f, self.pairs.iter().map(|(_, d)| d))
    }
}

impl fmt::Display for SixfoldProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chain())?;
        write!(f, "; m=")?;
        write_list(f, self.m.iter())
    }
}

/// Parsed witness text: `b` entries, `d` entries, optional `m` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessText {
    pub b: Vec<Rational>,
    pub d: Vec<u32>,
    pub m: Option<Vec<u64>>,
}

const MAX_LIST_LEN: usize = 1024;

/// Parse the textual witness form `b=[..]; d=[..]` with an optional
/// `; m=[..]` tail. Values are structural only; region membership is
/// checked by the validators.
pub fn parse_witness(s: &str) -> Result<WitnessText, ParseError> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let b = parse_labeled_list(bytes, &mut pos, b"b=", |bytes, pos| {
        lex_rational(bytes, pos)
    })?;
    expect(bytes, &mut pos, b"; ")?;
    let d = parse_labeled_list(bytes, &mut pos, b"d=", |bytes, pos| {
        let (v, next) = lex_uint(bytes, pos)?;
        let v = u32::try_from(&v).map_err(|_| ParseError::TooLong(10))?;
        Ok((v, next))
    })?;
    let m = if pos < bytes.len() {
        expect(bytes, &mut pos, b"; ")?;
        Some(parse_labeled_list(bytes, &mut pos, b"m=", |bytes, pos| {
            let (v, next) = lex_uint(bytes, pos)?;
            let v = u64::try_from(&v).map_err(|_| ParseError::TooLong(20))?;
            Ok((v, next))
        })?)
    } else {
        None
    };
    if pos != bytes.len() {
        return Err(ParseError::Unexpected(pos));
    }
    if b.len() != d.len() {
        return Err(ParseError::List("b and d lengths differ".into()));
    }
    if b.is_empty() {
        return Err(ParseError::List("empty witness".into()));
    }
    if let Some(m) = &m {
        if m.len() + 1 != b.len() {
            return Err(ParseError::List("m must have one entry per step".into()));
        }
    }
    Ok(WitnessText { b, d, m })
}

fn expect(bytes: &[u8], pos: &mut usize, token: &[u8]) -> Result<(), ParseError> {
    if bytes[*pos..].starts_with(token) {
        *pos += token.len();
        Ok(())
    } else {
        Err(ParseError::Unexpected(*pos))
    }
}

fn parse_labeled_list<T>(
    bytes: &[u8],
    pos: &mut usize,
    label: &[u8],
    mut element: impl FnMut(&[u8], usize) -> Result<(T, usize), ParseError>,
) -> Result<Vec<T>, ParseError> {
    expect(bytes, pos, label)?;
    expect(bytes, pos, b"[")?;
    let mut items = Vec::new();
    if bytes.get(*pos) == Some(&b']') {
        *pos += 1;
        return Ok(items);
    }
    loop {
        let (item, next) = element(bytes, *pos)?;
        *pos = next;
        items.push(item);
        if items.len() > MAX_LIST_LEN {
            return Err(ParseError::List("list too long".into()));
        }
        match bytes.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b']') => {
                *pos += 1;
                return Ok(items);
            }
            _ => return Err(ParseError::Unexpected(*pos)),
        }
    }
}

impl FromStr for Chain {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = parse_witness(s)?;
        if text.m.is_some() {
            return Err(ParseError::List("chain must not carry m".into()));
        }
        Ok(Chain {
            n: text.d[0],
            pairs: text.b.into_iter().zip(text.d).collect(),
        })
    }
}

impl FromStr for SixfoldProfile {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = parse_witness(s)?;
        let m = text
            .m
            .ok_or_else(|| ParseError::List("profile needs m".into()))?;
        Ok(SixfoldProfile {
            n: text.d[0],
            pairs: text.b.into_iter().zip(text.d).collect(),
            m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn validate_chain_examples() {
        let ok = Chain::integral(3, &[(2, 2), (1, 1)]);
        assert!(validate_chain(&ok).is_empty());

        let bad_d = Chain::integral(3, &[(2, 2), (1, 2)]);
        assert_eq!(
            validate_chain(&bad_d),
            vec![ChainViolation::DNotDecreasing(2)]
        );

        let bad_b = Chain::integral(3, &[(2, 1)]);
        assert_eq!(validate_chain(&bad_b), vec![ChainViolation::BExceedsD(1)]);
    }

    #[test]
    fn validate_chain_structure() {
        let empty = Chain {
            n: 3,
            pairs: vec![],
        };
        assert_eq!(validate_chain(&empty), vec![ChainViolation::Empty]);

        let wrong_lead = Chain {
            n: 3,
            pairs: vec![(rat(2, 1), 3)],
        };
        assert!(validate_chain(&wrong_lead).contains(&ChainViolation::LeadingPair));

        let negative_b = Chain {
            n: 2,
            pairs: vec![(rat(2, 1), 2), (rat(-1, 2), 1)],
        };
        assert!(validate_chain(&negative_b).contains(&ChainViolation::BNotPositive(1)));
    }

    #[test]
    fn validate_profile_examples() {
        let ok = SixfoldProfile::integral(6, &[(4, 4)], &[1]);
        assert!(validate_profile(&ok).is_empty());

        let forbidden_dim = SixfoldProfile::integral(6, &[(4, 5)], &[1]);
        assert_eq!(
            validate_profile(&forbidden_dim),
            vec![ProfileViolation::FirstDimForbidden]
        );

        let surface = SixfoldProfile::integral(6, &[(1, 2)], &[3]);
        assert_eq!(
            validate_profile(&surface),
            vec![ProfileViolation::BTooLargeForSurface(1)]
        );

        let over_cap = SixfoldProfile::integral(6, &[(3, 4)], &[4]);
        assert_eq!(
            validate_profile(&over_cap),
            vec![ProfileViolation::MExceedsBinomial(1)]
        );

        // A profile over an invalid chain reports the chain violation.
        let broken = SixfoldProfile::integral(3, &[(2, 1)], &[1]);
        assert_eq!(
            validate_profile(&broken),
            vec![ProfileViolation::Chain(ChainViolation::BExceedsD(1))]
        );
    }

    #[test]
    fn rational_b_profile() {
        // b_1 = 2/5 with d_1 = 2, m_1 = 5: the surface rule holds with equality.
        let p = SixfoldProfile {
            n: 6,
            pairs: vec![(rat(6, 1), 6), (rat(2, 5), 2)],
            m: vec![5],
        };
        assert!(validate_profile(&p).is_empty());
    }

    #[test]
    fn enumerate_small() {
        let n1: Vec<_> = enumerate_integer_chains(1).collect();
        assert_eq!(n1, vec![Chain::integral(1, &[])]);

        let n2: Vec<_> = enumerate_integer_chains(2).collect();
        assert_eq!(
            n2,
            vec![Chain::integral(2, &[]), Chain::integral(2, &[(1, 1)])]
        );

        let n3: Vec<_> = enumerate_integer_chains(3).collect();
        assert_eq!(
            n3,
            vec![
                Chain::integral(3, &[]),
                Chain::integral(3, &[(2, 2)]),
                Chain::integral(3, &[(2, 2), (1, 1)]),
                Chain::integral(3, &[(1, 2)]),
                Chain::integral(3, &[(1, 1)]),
            ]
        );
    }

    /// Independent state-space count: c(b, d) = 1 + sum over next states.
    fn count_oracle(n: u32) -> u64 {
        fn c(b: u32, d: u32, memo: &mut std::collections::HashMap<(u32, u32), u64>) -> u64 {
            if let Some(&v) = memo.get(&(b, d)) {
                return v;
            }
            let mut total = 1;
            for nb in 1..b {
                for nd in nb..d {
                    total += c(nb, nd, memo);
                }
            }
            memo.insert((b, d), total);
            total
        }
        c(n, n, &mut std::collections::HashMap::new())
    }

    #[test]
    fn enumeration_count_matches_oracle() {
        let expected = [1u64, 2, 5, 14, 42, 132];
        for n in 1..=6u32 {
            let count = enumerate_integer_chains(n).count() as u64;
            assert_eq!(count, count_oracle(n), "count mismatch at n={n}");
            assert_eq!(count, expected[n as usize - 1]);
        }
    }

    #[test]
    fn enumerated_chains_validate() {
        for n in 1..=7u32 {
            for chain in enumerate_integer_chains(n) {
                assert!(
                    validate_chain(&chain).is_empty(),
                    "invalid chain {chain} at n={n}"
                );
            }
        }
    }

    #[test]
    fn witness_roundtrip() {
        let c = Chain::integral(6, &[(4, 4)]);
        assert_eq!(c.to_string(), "b=[6,4]; d=[6,4]");
        assert_eq!("b=[6,4]; d=[6,4]".parse::<Chain>().unwrap(), c);

        let p = SixfoldProfile::integral(6, &[(4, 4)], &[1]);
        assert_eq!(p.to_string(), "b=[6,4]; d=[6,4]; m=[1]");
        assert_eq!(
            "b=[6,4]; d=[6,4]; m=[1]".parse::<SixfoldProfile>().unwrap(),
            p
        );

        let q = SixfoldProfile {
            n: 6,
            pairs: vec![(rat(6, 1), 6), (rat(2, 5), 2)],
            m: vec![5],
        };
        assert_eq!(q.to_string(), "b=[6,2/5]; d=[6,2]; m=[5]");
        assert_eq!(q.to_string().parse::<SixfoldProfile>().unwrap(), q);
    }

    #[test]
    fn witness_parse_rejects() {
        for bad in [
            "",
            "b=[]; d=[]",
            "b=[1]; d=[1,2]",
            "d=[1]; b=[1]",
            "b=[1]; d=[1]; m=[1,2]",
            "b=[1]; d=[1]x",
            "b=[1; d=[1]",
        ] {
            assert!(parse_witness(bad).is_err(), "accepted {bad:?}");
        }
        assert!("b=[6,4]; d=[6,4]; m=[1]".parse::<Chain>().is_err());
        assert!("b=[6,4]; d=[6,4]".parse::<SixfoldProfile>().is_err());
    }

    #[test]
    fn integral_steps_extraction() {
        let c = Chain::integral(4, &[(2, 3), (1, 2)]);
        assert_eq!(c.integral_steps(), Some(vec![(2, 3), (1, 2)]));
        let q = Chain {
            n: 4,
            pairs: vec![(rat(4, 1), 4), (rat(1, 2), 2)],
        };
        assert_eq!(q.integral_steps(), None);
    }
}
