//! Exact maximization of the chain objective.
//!
//! `solve_f` runs a dynamic program over states `(b, d)` — `M(b, d)` is the
//! best completion value of a chain whose current pair is `(b, d)` — with
//! certified radical-sum comparisons; a cached 64-bit enclosure per state
//! screens most comparisons before the exact path runs. `solve_f_bruteforce`
//! is the independent oracle over the full integral enumeration; the two
//! must agree exactly. `solve_g_sixfold` maximizes over the sixfold
//! candidate set: integral profiles at maximal multiplicities plus the
//! non-integral surface vertices scored by their bounding expression.

use std::cmp::Ordering;
use std::fmt;
use std::io;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, to_u64};
use crate::chains::{enumerate_integer_chains, validate_chain, Chain, SixfoldProfile};
use crate::dyadic::DyadicInterval;
use crate::eval::{f_eval, g_bound_nonintegral, g_eval, term_value};
use crate::radical::RadicalSum;
use crate::rational::Rational;

const ENCLOSURE_BITS: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SolveError {
    #[error("brute force is limited to n <= {max}, got {n}")]
    SizeGuard { n: u32, max: u32 },
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct SolveStats {
    pub states: u64,
    pub candidates: u64,
}

/// The maximizer reported with a solve: a chain for `F`, and either an
/// integral profile or a non-integral vertex descriptor for the sixfold
/// search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Chain(Chain),
    Profile(SixfoldProfile),
    NonIntegral { prefix: Vec<(u32, u32)>, m: u64 },
}

impl Witness {
    /// The non-integral descriptor rendered as the profile it bounds:
    /// prefix multiplicities at their binomial caps, then `b_i = 2/m`,
    /// `d_i = 2`.
    fn display_string(&self, n: u32) -> String {
        match self {
            Witness::Chain(c) => c.to_string(),
            Witness::Profile(p) => p.to_string(),
            Witness::NonIntegral { prefix, m } => {
                let mut pairs: Vec<(Rational, u32)> = prefix
                    .iter()
                    .map(|&(b, d)| (Rational::from_integer(BigInt::from(b)), d))
                    .collect();
                pairs.push((Rational::new(BigInt::from(2), BigInt::from(*m)), 2));
                let mut ms: Vec<u64> = prefix[1..]
                    .iter()
                    .map(|&(b, d)| to_u64(&binomial(n - b, n - d)).expect("cap fits u64"))
                    .collect();
                ms.push(*m);
                SixfoldProfile { n, pairs, m: ms }.to_string()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: RadicalSum,
    pub witness: Witness,
    pub floor: BigInt,
    pub stats: SolveStats,
    n: u32,
}

impl SolveResult {
    pub fn witness_string(&self) -> String {
        self.witness.display_string(self.n)
    }
}

/// DP state entry: exact completion value, its cached enclosure, and the
/// maximizing suffix starting at this state's own pair.
struct Entry {
    value: RadicalSum,
    enc: DyadicInterval,
    suffix: Vec<(u32, u32)>,
}

/// Strict "candidate beats incumbent" under the order: larger value first,
/// then shorter suffix, then lexicographically smaller d-vector.
fn beats(
    cand_value: &RadicalSum,
    cand_enc: &DyadicInterval,
    cand_head: (u32, u32),
    cand_tail: Option<&Entry>,
    best: &Entry,
) -> bool {
    if cand_enc.lo() > best.enc.hi() {
        return true;
    }
    if cand_enc.hi() < best.enc.lo() {
        return false;
    }
    match cand_value.cmp(&best.value) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let cand_len = 1 + cand_tail.map_or(0, |e| e.suffix.len());
            match cand_len.cmp(&best.suffix.len()) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let cand_ds = std::iter::once(cand_head.1).chain(
                        cand_tail
                            .into_iter()
                            .flat_map(|e| e.suffix.iter().map(|p| p.1)),
                    );
                    let best_ds = best.suffix.iter().map(|p| p.1);
                    cand_ds.lt(best_ds)
                }
            }
        }
    }
}

/// `beats` between two finished entries, same order.
fn entry_beats(challenger: &Entry, incumbent: &Entry) -> bool {
    if challenger.enc.lo() > incumbent.enc.hi() {
        return true;
    }
    if challenger.enc.hi() < incumbent.enc.lo() {
        return false;
    }
    match challenger.value.cmp(&incumbent.value) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match challenger.suffix.len().cmp(&incumbent.suffix.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let challenger_ds = challenger.suffix.iter().map(|p| p.1);
                let incumbent_ds = incumbent.suffix.iter().map(|p| p.1);
                challenger_ds.lt(incumbent_ds)
            }
        },
    }
}

fn compose_suffix(head: (u32, u32), tail: Option<&Entry>) -> Vec<(u32, u32)> {
    let mut suffix = Vec::with_capacity(1 + tail.map_or(0, |e| e.suffix.len()));
    suffix.push(head);
    if let Some(tail) = tail {
        suffix.extend_from_slice(&tail.suffix);
    }
    suffix
}

/// Exact maximum of the chain objective over all integral chains, by
/// dynamic programming: `M(b, d) = max` over the next pair `(b', d')` with
/// `b' < b`, `b' <= d' < d` of `(b - b') * v(b, d) + M(b', d')`, the `b'=0`
/// stop contributing `b * v(b, d)`; the answer is `M(n, n)`.
pub fn solve_f(n: u32, r: u64) -> SolveResult {
    assert!(n >= 1, "n must be positive");
    assert!(r >= 1, "r must be positive");
    let mut stats = SolveStats::default();

    let term_for = |b: u32, d: u32| -> RadicalSum {
        term_value(&Rational::from_integer(BigInt::from(b)), d, n, r).expect("1 <= b <= d <= n")
    };

    // rows[b][d - b] for 1 <= b <= d <= n-1; argmax[b][dmax - b] is the
    // best d'' in [b, dmax] for that b.
    let mut rows: Vec<Vec<Entry>> = Vec::with_capacity(n as usize);
    let mut argmax: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
    rows.push(Vec::new()); // b = 0 unused
    argmax.push(Vec::new());

    for b in 1..n {
        let mut row = Vec::with_capacity((n - b) as usize);
        for d in b..n {
            stats.states += 1;
            let v = term_for(b, d);
            let v_enc = v.enclose(ENCLOSURE_BITS);
            // Stop: the chain ends here, contributing b * v.
            let mut best = Entry {
                value: v.scale_int(i64::from(b)),
                enc: v_enc.scale_int(i64::from(b)),
                suffix: vec![(b, d)],
            };
            stats.candidates += 1;
            for next_b in 1..b {
                let d_star = argmax[next_b as usize][(d - 1 - next_b) as usize];
                let tail = &rows[next_b as usize][(d_star - next_b) as usize];
                let gap = i64::from(b - next_b);
                stats.candidates += 1;
                let cand_enc = v_enc.scale_int(gap).add(&tail.enc);
                if cand_enc.hi() < best.enc.lo() {
                    continue;
                }
                let cand_value = v.scale_int(gap).add(&tail.value);
                if beats(&cand_value, &cand_enc, (b, d), Some(tail), &best) {
                    best = Entry {
                        value: cand_value,
                        enc: cand_enc,
                        suffix: compose_suffix((b, d), Some(tail)),
                    };
                }
            }
            row.push(best);
        }
        // Prefix argmax over d'' for this b.
        let mut arg_row = Vec::with_capacity(row.len());
        for d in b..n {
            let mut best_d = if d == b {
                b
            } else {
                arg_row[(d - 1 - b) as usize]
            };
            if d > b {
                let incumbent = &row[(best_d - b) as usize];
                let challenger = &row[(d - b) as usize];
                if entry_beats(challenger, incumbent) {
                    best_d = d;
                }
            }
            arg_row.push(best_d);
        }
        rows.push(row);
        argmax.push(arg_row);
    }

    // Top state (n, n).
    stats.states += 1;
    let v = term_for(n, n);
    let v_enc = v.enclose(ENCLOSURE_BITS);
    let mut best = Entry {
        value: v.scale_int(i64::from(n)),
        enc: v_enc.scale_int(i64::from(n)),
        suffix: vec![(n, n)],
    };
    stats.candidates += 1;
    for next_b in 1..n {
        let d_star = argmax[next_b as usize][(n - 1 - next_b) as usize];
        let tail = &rows[next_b as usize][(d_star - next_b) as usize];
        let gap = i64::from(n - next_b);
        stats.candidates += 1;
        let cand_enc = v_enc.scale_int(gap).add(&tail.enc);
        if cand_enc.hi() < best.enc.lo() {
            continue;
        }
        let cand_value = v.scale_int(gap).add(&tail.value);
        if beats(&cand_value, &cand_enc, (n, n), Some(tail), &best) {
            best = Entry {
                value: cand_value,
                enc: cand_enc,
                suffix: compose_suffix((n, n), Some(tail)),
            };
        }
    }

    let witness = Chain::integral(n, &best.suffix[1..]);
    let value = best.value;
    let recomputed = f_eval(&witness, r).expect("DP witness must validate");
    assert!(recomputed == value, "witness value certification failed");
    let floor = value.floor_certified();
    SolveResult {
        value,
        witness: Witness::Chain(witness),
        floor,
        stats,
        n,
    }
}

/// Exhaustive oracle for `solve_f`, same contract, guarded to `n <= 8`.
pub fn solve_f_bruteforce(n: u32, r: u64) -> Result<SolveResult, SolveError> {
    const MAX_N: u32 = 8;
    if n > MAX_N {
        return Err(SolveError::SizeGuard { n, max: MAX_N });
    }
    assert!(n >= 1 && r >= 1);
    let mut stats = SolveStats::default();
    let mut best: Option<(RadicalSum, Chain)> = None;
    for chain in enumerate_integer_chains(n) {
        stats.candidates += 1;
        let value = f_eval(&chain, r).expect("enumerated chains are valid");
        let replace = match &best {
            None => true,
            Some((best_value, best_chain)) => match value.cmp(best_value) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let key = |c: &Chain| {
                        (
                            c.pairs.len(),
                            c.pairs.iter().map(|p| p.1).collect::<Vec<_>>(),
                        )
                    };
                    key(&chain) < key(best_chain)
                }
            },
        };
        if replace {
            best = Some((value, chain));
        }
    }
    let (value, witness) = best.expect("at least the bare chain exists");
    let floor = value.floor_certified();
    Ok(SolveResult {
        value,
        witness: Witness::Chain(witness),
        floor,
        stats,
        n,
    })
}

/// Certified upper candidate maximum for the sixfold objective `G(n)`:
/// case (A) integral profiles with every multiplicity at its feasible
/// maximum, case (B) non-integral surface vertices `b_i = 2/m`, `d_i = 2`
/// scored by their bounding expression over all integral prefixes.
pub fn solve_g_sixfold(n: u32) -> SolveResult {
    assert!((2..=64).contains(&n), "sixfold search expects 2 <= n <= 64");
    let mut stats = SolveStats::default();
    let mut best: Option<(RadicalSum, Witness)> = None;

    let consider =
        |value: RadicalSum, witness: Witness, best: &mut Option<(RadicalSum, Witness)>| {
            let replace = match best {
                None => true,
                // First candidate in enumeration order wins ties.
                Some((best_value, _)) => value.cmp(best_value) == Ordering::Greater,
            };
            if replace {
                *best = Some((value, witness));
            }
        };

    // Case (A): integral profiles, multiplicities pinned to their caps.
    for chain in enumerate_integer_chains(n) {
        let steps = chain.integral_steps().expect("enumeration is integral");
        if matches!(steps.first(), Some(&(_, d1)) if d1 == n - 1) {
            continue;
        }
        stats.candidates += 1;
        let m: Vec<u64> = steps
            .iter()
            .map(|&(b, d)| {
                let cap = to_u64(&binomial(n - b, n - d)).expect("cap fits u64");
                if d == 2 {
                    cap.min(u64::from(2 / b))
                } else {
                    cap
                }
            })
            .collect();
        let profile = SixfoldProfile::integral(n, &steps, &m);
        let value = g_eval(&profile).expect("maximal profile is feasible");
        consider(value, Witness::Profile(profile), &mut best);
    }

    // Case (B): one distinguished non-integral index with d_i = 2.
    for chain in enumerate_integer_chains(n) {
        let steps = chain.integral_steps().expect("enumeration is integral");
        let (_, last_d) = steps.last().copied().unwrap_or((n, n));
        if last_d <= 2 {
            continue; // the distinguished index needs d_{i-1} > 2
        }
        if steps.is_empty() && n == 3 {
            continue; // d_1 would be 2 = n - 1
        }
        if matches!(steps.first(), Some(&(_, d1)) if d1 == n - 1) {
            continue;
        }
        let mut prefix = Vec::with_capacity(steps.len() + 1);
        prefix.push((n, n));
        prefix.extend_from_slice(&steps);
        for m in 3..=u64::from(n - 1) {
            stats.candidates += 1;
            let value = g_bound_nonintegral(n, &prefix, m).expect("prefix is a valid chain");
            consider(
                value,
                Witness::NonIntegral {
                    prefix: prefix.clone(),
                    m,
                },
                &mut best,
            );
        }
    }

    let (value, witness) = best.expect("case (A) always contains the bare chain");
    let floor = value.floor_certified();
    SolveResult {
        value,
        witness,
        floor,
        stats,
        n,
    }
}

/// One row of the reproduction table.
#[derive(Debug, Clone)]
pub struct TableCell {
    pub n: u32,
    pub r: u64,
    pub floor: BigInt,
    pub value: RadicalSum,
    pub witness: Chain,
}

/// Certified floors and exact values of `F(n, r)` for `n = 2 ..= n_max`
/// and each requested `r`.
pub fn build_table(n_max: u32, r_values: &[u64]) -> Vec<TableCell> {
    assert!(n_max >= 2, "table starts at n = 2");
    let mut cells = Vec::new();
    for n in 2..=n_max {
        for &r in r_values {
            let solved = solve_f(n, r);
            let witness = match solved.witness {
                Witness::Chain(c) => c,
                _ => unreachable!("solve_f witnesses are chains"),
            };
            debug_assert!(validate_chain(&witness).is_empty());
            cells.push(TableCell {
                n,
                r,
                floor: solved.floor,
                value: solved.value,
                witness,
            });
        }
    }
    cells
}

pub const TABLE_SCHEMA_VERSION: u32 = 1;

/// CSV schema: `n,r,floor_F,exact_value,witness_b,witness_d`.
pub fn write_table_csv<W: io::Write>(cells: &[TableCell], out: W) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(["n", "r", "floor_F", "exact_value", "witness_b", "witness_d"])
        .map_err(io::Error::other)?;
    for cell in cells {
        writer
            .write_record([
                cell.n.to_string(),
                cell.r.to_string(),
                cell.floor.to_string(),
                cell.value.to_string(),
                cell.witness.b_list(),
                cell.witness.d_list(),
            ])
            .map_err(io::Error::other)?;
    }
    writer.flush()
}

#[derive(Serialize)]
struct TableCellDto {
    n: u32,
    r: u64,
    floor_f: String,
    exact_value: String,
    witness_b: String,
    witness_d: String,
}

#[derive(Serialize)]
struct TableDoc {
    schema_version: u32,
    cells: Vec<TableCellDto>,
}

pub fn write_table_json<W: io::Write>(cells: &[TableCell], out: W) -> io::Result<()> {
    let doc = TableDoc {
        schema_version: TABLE_SCHEMA_VERSION,
        cells: cells
            .iter()
            .map(|cell| TableCellDto {
                n: cell.n,
                r: cell.r,
                floor_f: cell.floor.to_string(),
                exact_value: cell.value.to_string(),
                witness_b: cell.witness.b_list(),
                witness_d: cell.witness.d_list(),
            })
            .collect(),
    };
    serde_json::to_writer_pretty(out, &doc).map_err(io::Error::other)
}

impl fmt::Display for TableCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F({}, {}) = {} (floor {}), witness {}",
            self.n, self.r, self.value, self.floor, self.witness
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn radical(k: u64, d: u32) -> RadicalSum {
        RadicalSum::from_parts(Rational::one(), BigUint::from(k), d)
    }

    #[test]
    fn solve_f_small_values() {
        let s = solve_f(2, 1);
        assert_eq!(s.value, RadicalSum::from_int(2));
        assert_eq!(s.floor, BigInt::from(2));

        let s = solve_f(3, 1);
        assert_eq!(s.value, RadicalSum::from_int(2).add(&radical(2, 2)));
        assert_eq!(s.floor, BigInt::from(3));

        let s = solve_f(2, 2);
        assert_eq!(s.value, RadicalSum::from_int(2).add(&radical(2, 2)));
        assert_eq!(s.floor, BigInt::from(3));

        assert_eq!(solve_f(6, 1).floor, BigInt::from(8));
        assert_eq!(solve_f(1, 1).value, RadicalSum::from_int(1));
    }

    #[test]
    fn brute_force_matches_dp() {
        for n in 1..=5u32 {
            for r in 1..=3u64 {
                let dp = solve_f(n, r);
                let brute = solve_f_bruteforce(n, r).unwrap();
                assert_eq!(dp.value, brute.value, "value mismatch at n={n}, r={r}");
                assert_eq!(dp.floor, brute.floor);
                let Witness::Chain(dp_witness) = &dp.witness else {
                    panic!()
                };
                let Witness::Chain(brute_witness) = &brute.witness else {
                    panic!()
                };
                assert!(validate_chain(dp_witness).is_empty());
                // Both sides implement the same tie-break (shorter chain,
                // then lexicographically smaller d-vector), so even the
                // witnesses coincide.
                assert_eq!(
                    dp_witness, brute_witness,
                    "witness mismatch at n={n}, r={r}"
                );
            }
        }
    }

    #[test]
    fn brute_force_guard() {
        assert_eq!(
            solve_f_bruteforce(9, 1).unwrap_err(),
            SolveError::SizeGuard { n: 9, max: 8 }
        );
        let one = solve_f_bruteforce(1, 1).unwrap();
        assert_eq!(one.value, RadicalSum::from_int(1));
        assert_eq!(one.stats.candidates, 1);
        assert_eq!(solve_f_bruteforce(4, 1).unwrap().floor, BigInt::from(4));
    }

    #[test]
    fn monotone_in_r() {
        for n in 1..=10u32 {
            for r in 1..=3u64 {
                let lo = solve_f(n, r);
                let hi = solve_f(n, r + 1);
                assert!(lo.value < hi.value, "not increasing at n={n}, r={r}");
            }
        }
    }

    #[test]
    fn witness_is_deterministic_and_short() {
        // F(2, 1) is attained by both chains; the shorter wins.
        let s = solve_f(2, 1);
        let Witness::Chain(w) = &s.witness else {
            panic!()
        };
        assert_eq!(w, &Chain::integral(2, &[]));
        assert_eq!(s.witness_string(), "b=[2]; d=[2]");
    }

    #[test]
    fn sixfold_certificate_small() {
        let s = solve_g_sixfold(6);
        assert!(
            s.value < RadicalSum::from_int(8),
            "G(6) candidate max must be below 8"
        );
        assert!(s.value > RadicalSum::from_int(7));
        assert_eq!(s.floor, BigInt::from(7));

        // n = 2: only the bare chain survives condition (6).
        let s = solve_g_sixfold(2);
        assert_eq!(s.value, RadicalSum::from_int(2));

        // n = 3: the best candidate dominates every integral profile listed.
        let s = solve_g_sixfold(3);
        let base = g_eval(&SixfoldProfile::integral(3, &[], &[])).unwrap();
        assert!(s.value >= base);
    }

    #[test]
    fn table_small() {
        let cells = build_table(5, &[1]);
        let floors: Vec<BigInt> = cells.iter().map(|c| c.floor.clone()).collect();
        assert_eq!(
            floors,
            vec![2, 3, 4, 6]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );

        let cells = build_table(3, &[1]);
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].floor, BigInt::from(2));
        assert_eq!(cells[1].floor, BigInt::from(3));

        let mut csv_bytes = Vec::new();
        write_table_csv(&cells, &mut csv_bytes).unwrap();
        let csv_text = String::from_utf8(csv_bytes).unwrap();
        let expected = "\
n,r,floor_F,exact_value,witness_b,witness_d
2,1,2,2,[2],[2]
3,1,3,2 + 1 * 2^(1/2),\"[3,1]\",\"[3,2]\"
";
        assert_eq!(csv_text, expected);

        let mut json_bytes = Vec::new();
        write_table_json(&cells, &mut json_bytes).unwrap();
        let json_text = String::from_utf8(json_bytes).unwrap();
        assert!(json_text.contains("\"schema_version\": 1"));
        assert!(json_text.contains("\"exact_value\": \"2 + 1 * 2^(1/2)\""));
    }

    #[test]
    fn nonintegral_witness_rendering() {
        let w = Witness::NonIntegral {
            prefix: vec![(6, 6), (3, 4)],
            m: 5,
        };
        assert_eq!(w.display_string(6), "b=[6,3,2/5]; d=[6,4,2]; m=[3,5]");
    }
}
