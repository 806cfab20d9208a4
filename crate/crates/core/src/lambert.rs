//! Verified evaluation of the principal branch of Lambert's W, the inverse
//! of `u(w) = w e^w` on the nonnegative reals.
//!
//! `W(x)` is bracketed and bisected with certified enclosures of `u` at the
//! midpoints; for dyadic `m > 0` the value `u(m)` is transcendental, so an
//! undecidable midpoint just means the working precision must grow and the
//! loop always terminates.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use thiserror::Error;

use crate::dyadic::{Dyadic, DyadicInterval, Round};
use crate::elementary::exp_point;
use crate::radical::RadicalSum;
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum WError {
    #[error("Lambert W is only evaluated on x >= 0")]
    NegativeArgument,
    #[error("delta(b) needs b > 0")]
    NonPositiveB,
    #[error("delta(b) needs b <= n")]
    BAboveN,
}

const GUARD_BITS: u32 = 32;
const MAX_DECISION_BITS: u32 = 1 << 20;

/// Enclosure of `w * e^w`.
fn u_enclosure(w: &Dyadic, bits: u32) -> DyadicInterval {
    DyadicInterval::exact(w.clone(), bits).mul(&exp_point(w, bits))
}

/// Enclosure of `W(x)` for a dyadic point `x >= 0`, of width at most
/// `2^-bits`.
pub fn w_point(x: &Dyadic, bits: u32) -> DyadicInterval {
    assert!(!x.is_negative(), "w_point needs x >= 0");
    if x.is_zero() {
        return DyadicInterval::exact(Dyadic::zero(), bits);
    }
    let mut decision_bits = bits + GUARD_BITS;
    // Invariant: u(lo) <= x <= u(hi).
    let mut lo = Dyadic::zero();
    let mut hi = Dyadic::one();
    loop {
        let u = u_enclosure(&hi, decision_bits);
        if u.lo() >= x {
            break;
        }
        hi = hi.shift(1);
    }
    let width = Dyadic::new(BigInt::one(), -i64::from(bits));
    while hi.sub(&lo) > width {
        let mid = lo.add(&hi).shift(-1);
        loop {
            let u = u_enclosure(&mid, decision_bits);
            if u.hi() < x {
                lo = mid;
                break;
            }
            if u.lo() > x {
                hi = mid;
                break;
            }
            decision_bits = decision_bits.checked_mul(2).expect("precision overflow");
            assert!(
                decision_bits <= MAX_DECISION_BITS,
                "W bisection could not separate u(mid) from x"
            );
        }
    }
    DyadicInterval::new(lo, hi, bits)
}

/// Enclosure of `W` over an interval with `x.lo >= 0` (W is monotone).
pub fn lambert_w_interval(x: &DyadicInterval, bits: u32) -> Result<DyadicInterval, WError> {
    if x.lo().is_negative() {
        return Err(WError::NegativeArgument);
    }
    let lo = w_point(x.lo(), bits);
    let hi = w_point(x.hi(), bits);
    Ok(DyadicInterval::new(lo.lo().clone(), hi.hi().clone(), bits))
}

/// Enclosure of `W(x)` for a rational `x >= 0`.
pub fn lambert_w(x: &Rational, bits: u32) -> Result<DyadicInterval, WError> {
    if x.is_negative() {
        return Err(WError::NegativeArgument);
    }
    let work = bits + GUARD_BITS;
    let arg = DyadicInterval::new(
        Dyadic::from_ratio(x.numer(), x.denom(), work, Round::Down),
        Dyadic::from_ratio(x.numer(), x.denom(), work, Round::Up),
        work,
    );
    lambert_w_interval(&arg, bits)
}

/// Enclosure of `delta(b) = b * W(n / (b * r^(1/b)))` with `n` supplied as
/// an enclosure (so transcendental `n` can be probed in tests).
pub fn delta_interval(
    b: &Rational,
    n: &DyadicInterval,
    r: u64,
    bits: u32,
) -> Result<DyadicInterval, WError> {
    if !b.is_positive() {
        return Err(WError::NonPositiveB);
    }
    let work = bits + GUARD_BITS;
    // r^(1/b) = (r^denom)^(1/numer) for b = numer/denom.
    let numer =
        u32::try_from(b.numer().to_biguint().expect("b > 0")).expect("b numerator fits u32");
    let denom =
        u32::try_from(b.denom().to_biguint().expect("b > 0")).expect("b denominator fits u32");
    let root =
        RadicalSum::from_parts(Rational::one(), BigUint::from(r).pow(denom), numer).enclose(work);
    let scaled = root.scale_rational(b, work);
    let arg = n.div(&scaled, work);
    let w = lambert_w_interval(&arg, work)?;
    Ok(w.scale_rational(b, work).round_out(bits + 2))
}

/// `delta(b)` for integer `n`; domain error when `b <= 0` or `b > n`.
pub fn delta(b: &Rational, n: u64, r: u64, bits: u32) -> Result<DyadicInterval, WError> {
    if b > &Rational::from_integer(BigInt::from(n)) {
        return Err(WError::BAboveN);
    }
    delta_interval(
        b,
        &DyadicInterval::exact(Dyadic::from_bigint(BigInt::from(n)), bits),
        r,
        bits,
    )
}
