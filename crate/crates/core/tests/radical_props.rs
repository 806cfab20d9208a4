//! Property tests for the canonical radical arithmetic: trichotomy against
//! high-precision enclosures, canonical equality, enclosure arithmetic,
//! floor certificates, and serialization round-trips.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

use fujita_bounds::radical::RadicalSum;
use fujita_bounds::rational::Rational;

fn term_strategy() -> impl Strategy<Value = RadicalSum> {
    (
        (-30i64..=30).prop_filter("nonzero coefficient", |v| *v != 0),
        1i64..=12,
        1u64..=1000,
        1u32..=8,
    )
        .prop_map(|(num, den, k, d)| {
            RadicalSum::from_parts(
                Rational::new(BigInt::from(num), BigInt::from(den)),
                BigUint::from(k),
                d,
            )
        })
}

fn sum_strategy() -> impl Strategy<Value = RadicalSum> {
    prop::collection::vec(term_strategy(), 0..4)
        .prop_map(|terms| terms.iter().fold(RadicalSum::zero(), |acc, t| acc.add(t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trichotomy_agrees_with_enclosures(a in sum_strategy(), b in sum_strategy()) {
        let order = a.cmp(&b);
        let ea = a.enclose(128);
        let eb = b.enclose(128);
        if ea.hi() < eb.lo() {
            prop_assert_eq!(order, std::cmp::Ordering::Less);
        } else if eb.hi() < ea.lo() {
            prop_assert_eq!(order, std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn equality_is_canonical(a in sum_strategy(), b in sum_strategy()) {
        prop_assert_eq!(a.cmp(&a), std::cmp::Ordering::Equal);
        let structurally_equal = a == b;
        let compares_equal = a.cmp(&b) == std::cmp::Ordering::Equal;
        prop_assert_eq!(structurally_equal, compares_equal);
        // Distinct canonical forms separate at finite precision.
        if !structurally_equal {
            let diff = a.sub(&b);
            let mut separated = false;
            let mut bits = 64;
            while bits <= 4096 {
                let enc = diff.enclose(bits);
                if !enc.contains_zero() {
                    separated = true;
                    break;
                }
                bits *= 2;
            }
            prop_assert!(separated, "difference enclosure never excluded zero");
        }
    }

    #[test]
    fn addition_is_exact_on_enclosures(a in sum_strategy(), b in sum_strategy()) {
        for bits in [32u32, 64] {
            let sum_enclosure = a.add(&b).enclose(bits);
            let pointwise = a.enclose(bits).add(&b.enclose(bits));
            prop_assert!(sum_enclosure.overlaps(&pointwise));
        }
    }

    #[test]
    fn scaling_round_trips(a in sum_strategy()) {
        prop_assert!(a.add(&a.neg()).is_zero());
        let two = Rational::from_integer(BigInt::from(2));
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        prop_assert_eq!(a.scale(&two).scale(&half), a);
    }

    #[test]
    fn floor_certificates(a in sum_strategy()) {
        let (floor, certificate) = a.floor_with_certificate();
        match certificate {
            Some(enclosure) => {
                prop_assert!(enclosure.lo().floor_int() == floor);
                prop_assert!(enclosure.hi().floor_int() == floor);
            }
            None => {
                let q = a.to_rational().expect("symbolic path means rational");
                prop_assert_eq!(q.floor().to_integer(), floor);
            }
        }
    }

    #[test]
    fn serialization_round_trips(a in sum_strategy()) {
        let text = a.to_string();
        let parsed: RadicalSum = text.parse().expect("own output parses");
        prop_assert_eq!(parsed, a);
    }
}
