//! Certified elementary functions on dyadic intervals: `exp`, `log`,
//! `log log` and the constants `e` and `ln 2`, all by truncated series
//! with directed rounding and explicit tail bounds.

use std::cell::RefCell;

use num_bigint::BigInt;

use crate::dyadic::{Dyadic, DyadicInterval, Round};

const GUARD_BITS: u32 = 32;

/// Enclosure of `e^x` for a dyadic point. Relative width is far below
/// `2^-bits`.
pub fn exp_point(x: &Dyadic, bits: u32) -> DyadicInterval {
    if x.is_zero() {
        return DyadicInterval::exact(Dyadic::one(), bits);
    }
    // Halve the argument until |t| <= 1/2, then square back.
    let mut halvings = 0u32;
    let half = Dyadic::new(BigInt::from(1), -1);
    let mut t = x.clone();
    while t.clone().max(t.neg()) > half {
        t = t.shift(-1);
        halvings += 1;
    }
    let work = bits + GUARD_BITS + 2 * halvings;
    // Must sit above the 2^-work rounding quantum or tiny rounded terms
    // would never pass the convergence check.
    let threshold = Dyadic::new(BigInt::from(4), -i64::from(work));

    let t_int = DyadicInterval::exact(t, work);
    let mut sum = DyadicInterval::exact(Dyadic::one(), work);
    let mut term = DyadicInterval::exact(Dyadic::one(), work);
    let mut i = 1i64;
    loop {
        term = term
            .mul(&t_int)
            .div(&DyadicInterval::exact(Dyadic::from_int(i), work), work);
        sum = sum.add(&term).round_out(work);
        let magnitude = term.lo().neg().max(term.hi().clone());
        if magnitude <= threshold {
            break;
        }
        i += 1;
    }
    // Remaining terms form a series dominated by a geometric one with
    // ratio <= 1/2, so the tail is at most twice the threshold.
    let tail = threshold.shift(1);
    let mut enc = DyadicInterval::new(sum.lo().sub(&tail), sum.hi().add(&tail), work);
    for _ in 0..halvings {
        assert!(enc.lo().is_positive(), "exp enclosure must stay positive");
        enc = enc.mul(&enc).round_out(work);
    }
    enc
}

/// Enclosure of `e^x` over an interval (monotone).
pub fn exp_interval(x: &DyadicInterval, bits: u32) -> DyadicInterval {
    let lo = exp_point(x.lo(), bits);
    let hi = exp_point(x.hi(), bits);
    DyadicInterval::new(lo.lo().clone(), hi.hi().clone(), bits)
}

thread_local! {
    static LN2_CACHE: RefCell<Option<DyadicInterval>> = const { RefCell::new(None) };
    static E_CACHE: RefCell<Option<DyadicInterval>> = const { RefCell::new(None) };
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2(bits: u32) -> DyadicInterval {
    LN2_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().as_ref() {
            if hit.precision() >= bits {
                return hit.clone();
            }
        }
        let work = bits + GUARD_BITS;
        let threshold = Dyadic::new(BigInt::from(4), -i64::from(work));
        let mut lo = Dyadic::zero();
        let mut hi = Dyadic::zero();
        let mut pow3 = BigInt::from(3);
        let mut j = 0u64;
        loop {
            let den = &pow3 * BigInt::from(2 * j + 1);
            let term_lo = Dyadic::from_ratio(&BigInt::from(2), &den, work, Round::Down);
            let term_hi = Dyadic::from_ratio(&BigInt::from(2), &den, work, Round::Up);
            lo = lo.add(&term_lo);
            hi = hi.add(&term_hi);
            if term_hi <= threshold {
                break;
            }
            pow3 *= BigInt::from(9);
            j += 1;
        }
        // Geometric tail with ratio 1/9.
        let result = DyadicInterval::new(lo, hi.add(&threshold), bits);
        *cache.borrow_mut() = Some(result.clone());
        result
    })
}

/// Enclosure of Euler's number.
pub fn e_const(bits: u32) -> DyadicInterval {
    E_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().as_ref() {
            if hit.precision() >= bits {
                return hit.clone();
            }
        }
        let e = exp_point(&Dyadic::one(), bits);
        let result = DyadicInterval::new(e.lo().clone(), e.hi().clone(), bits);
        *cache.borrow_mut() = Some(result.clone());
        result
    })
}

/// Enclosure of `log x` for a positive dyadic point; exact `[0, 0]` at 1.
pub fn log_point(x: &Dyadic, bits: u32) -> DyadicInterval {
    assert!(x.is_positive(), "log needs a positive argument");
    if x == &Dyadic::one() {
        return DyadicInterval::exact(Dyadic::zero(), bits);
    }
    let work = bits + GUARD_BITS;
    // x = m * 2^k with m in [1, 2).
    let k = x.log2_floor();
    let m = x.shift(-k);
    let num = DyadicInterval::exact(m.sub(&Dyadic::one()), work);
    let den = DyadicInterval::exact(m.add(&Dyadic::one()), work);
    let z = num.div(&den, work);
    let atanh = atanh_small(&z, work);
    let log_m = atanh.scale_int(2);
    let scaled_ln2 = ln2(work).scale_int(k);
    log_m.add(&scaled_ln2).round_out(work)
}

/// Enclosure of `log` over a positive interval (monotone).
pub fn log_interval(x: &DyadicInterval, bits: u32) -> DyadicInterval {
    let lo = log_point(x.lo(), bits);
    let hi = log_point(x.hi(), bits);
    DyadicInterval::new(lo.lo().clone(), hi.hi().clone(), bits)
}

/// Enclosure of `log log n` for an integer `n >= 2`.
pub fn loglog(n: u64, bits: u32) -> DyadicInterval {
    assert!(n >= 2, "log log needs n >= 2");
    let inner = log_point(&Dyadic::from_bigint(BigInt::from(n)), bits + GUARD_BITS);
    assert!(inner.lo().is_positive());
    log_interval(&inner, bits)
}

/// atanh on `[0, 1/3]` by its odd power series, monotone evaluation at the
/// interval endpoints with a geometric tail bound.
fn atanh_small(z: &DyadicInterval, work: u32) -> DyadicInterval {
    debug_assert!(!z.lo().is_negative());
    debug_assert!(z.hi() < &Dyadic::new(BigInt::from(1), -1));
    let threshold = Dyadic::new(BigInt::from(4), -i64::from(work));

    // Truncating the all-positive series underestimates, so the lower
    // evaluation needs no tail; powers are rounded in the evaluation's own
    // direction to keep each bound one-sided.
    let eval = |point: &Dyadic, dir: Round| -> Dyadic {
        let mut acc = Dyadic::zero();
        let mut power = point.clone(); // point^(2j+1)
        let square = point.mul(point);
        let mut j = 0u64;
        loop {
            let term = power.div(&Dyadic::from_bigint(BigInt::from(2 * j + 1)), work, dir);
            acc = acc.add(&term).round(work, dir);
            if power <= threshold {
                break;
            }
            power = power.mul(&square).round(work, dir);
            j += 1;
        }
        acc
    };

    let lo = eval(z.lo(), Round::Down);
    let hi = eval(z.hi(), Round::Up);
    // Tail after stopping: the z^(2j+1) sum with z <= 1/2 stays below
    // twice the last power bound.
    DyadicInterval::new(lo, hi.add(&threshold.shift(1)), work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    /// Parse a decimal literal (optionally with an `e` exponent) into a
    /// rational.
    fn dec(s: &str) -> Rational {
        let (body, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().unwrap()),
            None => (s, 0),
        };
        let (sign, body) = match body.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, body),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        let base = Rational::new(
            digits * BigInt::from(sign),
            BigInt::from(10u32).pow(frac.len() as u32),
        );
        let scale = Rational::from_integer(BigInt::from(10u32).pow(exp.unsigned_abs()));
        if exp >= 0 {
            base * scale
        } else {
            base / scale
        }
    }

    /// The enclosure must land inside `value +- eps` — this certifies both
    /// the value and that the width is under control.
    fn assert_close(i: &DyadicInterval, value: &str, eps: &str) {
        let v = dec(value);
        let eps = dec(eps);
        let lo = i.lo().to_rational();
        let hi = i.hi().to_rational();
        assert!(
            lo >= &v - &eps && hi <= &v + &eps,
            "enclosure [{}, {}] not within {value} +- {eps}",
            lo,
            hi
        );
    }

    #[test]
    fn exp_values() {
        let one = exp_point(&Dyadic::zero(), 64);
        assert_eq!(one.lo(), one.hi());
        assert_eq!(one.lo(), &Dyadic::one());

        let e = exp_point(&Dyadic::one(), 96);
        assert_close(&e, "2.71828182845904523536028747135266249775", "1e-30");

        let big = exp_point(&Dyadic::from_int(10), 64);
        assert_close(&big, "22026.4657948067165169579006452842443663", "1e-12");

        let small = exp_point(&Dyadic::from_int(-3), 64);
        assert_close(&small, "0.04978706836786394297934241565006177663", "1e-15");
    }

    #[test]
    fn ln2_value() {
        assert_close(
            &ln2(96),
            "0.693147180559945309417232121458176568075",
            "1e-28",
        );
    }

    #[test]
    fn log_values() {
        let zero = log_point(&Dyadic::one(), 64);
        assert!(zero.lo().is_zero() && zero.hi().is_zero());

        let ten = log_point(&Dyadic::from_int(10), 96);
        assert_close(&ten, "2.30258509299404568401799145468436420760", "1e-28");

        let half = log_point(&Dyadic::new(BigInt::from(1), -1), 64);
        assert_close(&half, "-0.693147180559945309417232121458176568", "1e-15");
    }

    #[test]
    fn loglog_values() {
        assert_close(
            &loglog(2, 64),
            "-0.366512920581664327012439158232669469",
            "1e-15",
        );
        assert_close(
            &loglog(6, 64),
            "0.583198080782659297909468269363637488",
            "1e-15",
        );
        assert_close(
            &loglog(110, 64),
            "1.547664708981136024447137697962132052",
            "1e-15",
        );
    }

    #[test]
    fn exp_log_roundtrip() {
        for v in [2i64, 7, 100] {
            let l = log_point(&Dyadic::from_int(v), 80);
            let back = exp_interval(&l, 80);
            assert!(
                back.contains_dyadic(&Dyadic::from_int(v)),
                "roundtrip failed for {v}"
            );
        }
        let e = e_const(80);
        let log_e = log_interval(&e, 80);
        assert!(log_e.contains_dyadic(&Dyadic::one()));
    }
}
