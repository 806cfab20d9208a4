//! Cross-cutting solver invariants: dominance of the exact maximum over
//! every enumerated chain, the column-sum sandwich, table monotonicity,
//! and the integrality reduction probed with random rational chains.

use num_bigint::BigInt;
use proptest::prelude::*;

use fujita_bounds::chains::{enumerate_integer_chains, validate_chain, Chain};
use fujita_bounds::eval::{f_eval, root_sum, sumbound_upper};
use fujita_bounds::rational::Rational;
use fujita_bounds::solver::{build_table, solve_f};

#[test]
fn every_chain_is_dominated() {
    for n in 1..=7u32 {
        for r in 1..=3u64 {
            let best = solve_f(n, r).value;
            for chain in enumerate_integer_chains(n) {
                let value = f_eval(&chain, r).expect("enumerated chains are valid");
                assert!(
                    value <= best,
                    "chain {chain} beats the solver at n={n}, r={r}"
                );
            }
        }
    }
}

#[test]
fn column_sum_sandwich() {
    // root_sum <= F <= sumbound_upper, exactly.
    for n in 1..=17u32 {
        for r in [1u64, 2] {
            let solved = solve_f(n, r).value;
            assert!(
                root_sum(n, r) <= solved,
                "root sum exceeds F at n={n}, r={r}"
            );
            assert!(
                solved <= sumbound_upper(n, r),
                "F exceeds the column bound at n={n}, r={r}"
            );
        }
    }
}

#[test]
fn table_rows_are_nondecreasing() {
    let cells = build_table(17, &[1, 2]);
    for r in [1u64, 2] {
        let mut prev: Option<BigInt> = None;
        for cell in cells.iter().filter(|c| c.r == r) {
            if let Some(prev) = &prev {
                assert!(&cell.floor >= prev, "row r={r} decreases at n={}", cell.n);
            }
            prev = Some(cell.floor.clone());
        }
    }
}

/// Random valid chains with rational b (denominators dividing 16).
fn rational_chain_strategy() -> impl Strategy<Value = (Chain, u64)> {
    (2u32..=6, 1u64..=2).prop_flat_map(|(n, r)| {
        (1usize..=(n as usize - 1)).prop_flat_map(move |s| {
            let d_set = prop::collection::btree_set(1u32..n, s);
            let b_numerators = prop::collection::btree_set(1u32..=16 * (n - 1), s);
            (d_set, b_numerators).prop_filter_map("b_i <= d_i everywhere", move |(ds, bs)| {
                let ds: Vec<u32> = ds.into_iter().rev().collect();
                let bs: Vec<Rational> = bs
                    .into_iter()
                    .rev()
                    .map(|num| Rational::new(BigInt::from(num), BigInt::from(16)))
                    .collect();
                let mut pairs = vec![(Rational::from_integer(BigInt::from(n)), n)];
                for (b, d) in bs.into_iter().zip(ds) {
                    if b > Rational::from_integer(BigInt::from(d)) {
                        return None;
                    }
                    pairs.push((b, d));
                }
                Some((Chain { n, pairs }, r))
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rational-b chains never beat the integral maximum: the reduction to
    /// integral b loses nothing.
    #[test]
    fn rational_chains_never_beat_integral_maximum((chain, r) in rational_chain_strategy()) {
        prop_assert!(validate_chain(&chain).is_empty(), "strategy built an invalid chain");
        let value = f_eval(&chain, r).expect("valid chain");
        let best = solve_f(chain.n, r).value;
        prop_assert!(value <= best, "rational chain {} beats F({}, {})", chain, chain.n, r);
    }
}
