//! Integer helpers: exact binomials, factorization and primality.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Exact binomial coefficient over arbitrary-size integers.
/// Returns 0 when `k > n` and 1 when `k == 0` (in particular `binom(0, 0) == 1`).
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..u64::from(k) {
        res = res * BigUint::from(u64::from(n) - i) / BigUint::from(i + 1);
    }
    res
}

/// Default trial-division limit used by canonicalization.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Factor `k` into pairwise-coprime base/exponent pairs, bases ascending.
///
/// Trial division up to `limit`, then a perfect-power reduction and a
/// Miller-Rabin primality check on the remaining cofactor. A composite
/// cofactor that survives all of that (impossible for the radicands this
/// crate produces, whose prime factors are bounded by small binomials) is
/// kept as a single atomic base.
pub fn factorize(k: &BigUint, limit: u64) -> Vec<(BigUint, u64)> {
    let mut factors = Vec::new();
    let mut rest = k.clone();
    if rest <= BigUint::one() {
        return factors;
    }
    let mut push = |p: BigUint, e: u64| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    let mut exp = 0u64;
    while rest.is_even() {
        rest >>= 1;
        exp += 1;
    }
    push(BigUint::from(2u32), exp);
    let mut cand = 3u64;
    while cand <= limit {
        let c = BigUint::from(cand);
        if &c * &c > rest {
            break;
        }
        let mut e = 0u64;
        while (&rest % &c).is_zero() {
            rest /= &c;
            e += 1;
        }
        push(c, e);
        cand += 2;
    }
    if rest > BigUint::one() {
        let limit_sq = BigUint::from(limit) * BigUint::from(limit);
        if rest <= limit_sq {
            // All factors up to `limit` are gone, so a composite cofactor
            // would exceed limit^2.
            push(rest, 1);
        } else {
            let (base, e) = perfect_power(&rest);
            push(base, e);
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    factors
}

/// Write `c` as `base^e` with `e` maximal.
fn perfect_power(c: &BigUint) -> (BigUint, u64) {
    let mut base = c.clone();
    let mut total = 1u64;
    'outer: loop {
        let bits = base.bits();
        for e in (2..=bits.max(2) as u32).rev() {
            let root = base.nth_root(e);
            if root <= BigUint::one() {
                continue;
            }
            if root.pow(e) == base {
                base = root;
                total *= u64::from(e);
                continue 'outer;
            }
        }
        return (base, total);
    }
}

/// Deterministic Miller-Rabin for `n < 3.3e24`; for larger inputs the same
/// witness set is used and the answer is only probabilistic (error < 2^-128).
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `true` iff `k` fits in `u64`.
pub fn to_u64(k: &BigUint) -> Option<u64> {
    k.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(binomial(40, 20), "137846528820".parse().unwrap());
    }

    #[test]
    fn factorize_smooth() {
        let f = factorize(&BigUint::from(360u32), TRIAL_DIVISION_LIMIT);
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 3),
                (BigUint::from(3u32), 2),
                (BigUint::from(5u32), 1)
            ]
        );
        assert!(factorize(&BigUint::one(), TRIAL_DIVISION_LIMIT).is_empty());
    }

    #[test]
    fn factorize_large_prime_power() {
        // 1000003 is prime and exceeds a tiny trial limit, forcing the
        // perfect-power path.
        let p = BigUint::from(1_000_003u64);
        let f = factorize(&(&p * &p), 100);
        assert_eq!(f, vec![(p, 2)]);
    }

    #[test]
    fn primality() {
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(97u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        assert!(!is_prime(&BigUint::from(561u32))); // Carmichael
        let m61 = (BigUint::one() << 61u32) - BigUint::one();
        assert!(is_prime(&m61));
        assert!(!is_prime(&((BigUint::one() << 67u32) - BigUint::one())));
    }
}
