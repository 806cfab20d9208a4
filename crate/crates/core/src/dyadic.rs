//! Dyadic rationals (`mantissa * 2^exponent`) and outward-rounded interval
//! arithmetic. All rounding is directed; nothing here touches hardware
//! floats except for lossy display helpers.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Rounding direction for operations that cannot be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// An exact dyadic rational.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// `floor(log2(self))` for strictly positive values.
    pub fn log2_floor(&self) -> i64 {
        assert!(self.is_positive(), "log2_floor needs a positive value");
        self.mant.bits() as i64 - 1 + self.exp
    }

    /// `self * 2^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Round to an integer multiple of `2^-frac_bits`.
    pub fn round(&self, frac_bits: u32, dir: Round) -> Self {
        let target = -i64::from(frac_bits);
        if self.exp >= target || self.is_zero() {
            return self.clone();
        }
        let shift = (target - self.exp) as u64;
        let mant = match dir {
            // BigInt shr rounds toward negative infinity.
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
        };
        Dyadic::new(mant, target)
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }

    /// Directed evaluation of `num / den * 2^0` quantized at `frac_bits`.
    /// `den` must be positive.
    pub fn from_ratio(num: &BigInt, den: &BigInt, frac_bits: u32, dir: Round) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        let scaled = num << u64::from(frac_bits);
        let q = match dir {
            Round::Down => scaled.div_floor(den),
            Round::Up => scaled.div_ceil(den),
        };
        Dyadic::new(q, -i64::from(frac_bits))
    }

    /// Directed `self * q` quantized at `frac_bits`.
    pub fn mul_rational(&self, q: &Rational, frac_bits: u32, dir: Round) -> Self {
        if self.is_zero() || q.is_zero() {
            return Dyadic::zero();
        }
        let num = &self.mant * q.numer();
        let t = self.exp + i64::from(frac_bits);
        let (num, den) = if t >= 0 {
            (num << t as u64, q.denom().clone())
        } else {
            (num, q.denom() << (-t) as u64)
        };
        let mant = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => num.div_ceil(&den),
        };
        Dyadic::new(mant, -i64::from(frac_bits))
    }

    /// Directed `self / den` quantized at `frac_bits`; `den` must be nonzero.
    pub fn div(&self, den: &Dyadic, frac_bits: u32, dir: Round) -> Self {
        assert!(!den.is_zero(), "division by zero dyadic");
        // Negating both operands leaves the quotient unchanged.
        let (num, dmant) = if den.is_negative() {
            (-self.mant.clone(), -den.mant.clone())
        } else {
            (self.mant.clone(), den.mant.clone())
        };
        let t = self.exp - den.exp + i64::from(frac_bits);
        let (num, dmant) = if t >= 0 {
            (num << t as u64, dmant)
        } else {
            (num, dmant << (-t) as u64)
        };
        let mant = match dir {
            Round::Down => num.div_floor(&dmant),
            Round::Up => num.div_ceil(&dmant),
        };
        Dyadic::new(mant, -i64::from(frac_bits))
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Decimal rendering with `frac_digits` digits after the point, rounded
    /// in the given direction. Deterministic; used for report output.
    pub fn to_decimal(&self, frac_digits: u32, dir: Round) -> String {
        let scale = BigInt::from(10u32).pow(frac_digits);
        let scaled = Dyadic::new(&self.mant * &scale, self.exp);
        let int = match dir {
            Round::Down => scaled.floor_int(),
            Round::Up => scaled.ceil_int(),
        };
        let negative = int.is_negative();
        let digits = int.magnitude().to_string();
        let digits = if digits.len() <= frac_digits as usize {
            format!(
                "{}{}",
                "0".repeat(frac_digits as usize + 1 - digits.len()),
                digits
            )
        } else {
            digits
        };
        let split = digits.len() - frac_digits as usize;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&digits[..split]);
        if frac_digits > 0 {
            out.push('.');
            out.push_str(&digits[split..]);
        }
        out
    }

    fn cmp_dyadic(&self, other: &Dyadic) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) => return Ordering::Less,
            (Sign::NoSign, Sign::Plus) => return Ordering::Less,
            (Sign::Plus, Sign::Minus) | (Sign::Plus, Sign::NoSign) => return Ordering::Greater,
            (Sign::NoSign, Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        a.cmp(&b)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_dyadic(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_dyadic(other)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

/// A closed interval with dyadic endpoints guaranteed to contain the
/// represented real. `precision` records the request that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision: u32,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        DyadicInterval { lo, hi, precision }
    }

    pub fn exact(v: Dyadic, precision: u32) -> Self {
        DyadicInterval {
            lo: v.clone(),
            hi: v,
            precision,
        }
    }

    pub fn from_int(v: i64, precision: u32) -> Self {
        Self::exact(Dyadic::from_int(v), precision)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shift(-1)
    }

    pub fn add(&self, other: &DyadicInterval) -> Self {
        DyadicInterval::new(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.precision.min(other.precision),
        )
    }

    pub fn sub(&self, other: &DyadicInterval) -> Self {
        DyadicInterval::new(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.precision.min(other.precision),
        )
    }

    pub fn neg(&self) -> Self {
        DyadicInterval::new(self.hi.neg(), self.lo.neg(), self.precision)
    }

    pub fn mul(&self, other: &DyadicInterval) -> Self {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        DyadicInterval::new(lo, hi, self.precision.min(other.precision))
    }

    /// Scale by an exact integer.
    pub fn scale_int(&self, k: i64) -> Self {
        let a = self.lo.mul(&Dyadic::from_int(k));
        let b = self.hi.mul(&Dyadic::from_int(k));
        if k >= 0 {
            DyadicInterval::new(a, b, self.precision)
        } else {
            DyadicInterval::new(b, a, self.precision)
        }
    }

    /// Directed scale by a rational.
    pub fn scale_rational(&self, q: &Rational, frac_bits: u32) -> Self {
        if q.is_zero() {
            return DyadicInterval::exact(Dyadic::zero(), self.precision);
        }
        if q.is_positive() {
            DyadicInterval::new(
                self.lo.mul_rational(q, frac_bits, Round::Down),
                self.hi.mul_rational(q, frac_bits, Round::Up),
                self.precision,
            )
        } else {
            DyadicInterval::new(
                self.hi.mul_rational(q, frac_bits, Round::Down),
                self.lo.mul_rational(q, frac_bits, Round::Up),
                self.precision,
            )
        }
    }

    /// Interval division; the denominator must be strictly positive.
    pub fn div(&self, den: &DyadicInterval, frac_bits: u32) -> Self {
        assert!(
            den.lo.is_positive(),
            "interval division needs positive denominator"
        );
        let lo_candidates = [
            self.lo.div(&den.lo, frac_bits, Round::Down),
            self.lo.div(&den.hi, frac_bits, Round::Down),
        ];
        let hi_candidates = [
            self.hi.div(&den.lo, frac_bits, Round::Up),
            self.hi.div(&den.hi, frac_bits, Round::Up),
        ];
        DyadicInterval::new(
            lo_candidates.iter().min().unwrap().clone(),
            hi_candidates.iter().max().unwrap().clone(),
            self.precision.min(den.precision),
        )
    }

    /// Round both endpoints outward to `frac_bits` fractional bits.
    pub fn round_out(&self, frac_bits: u32) -> Self {
        DyadicInterval::new(
            self.lo.round(frac_bits, Round::Down),
            self.hi.round(frac_bits, Round::Up),
            self.precision,
        )
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max_with(&self, other: &DyadicInterval) -> Self {
        DyadicInterval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.precision.min(other.precision),
        )
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_dyadic(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `true` when every point of `self` is below every point of `other`.
    pub fn entirely_below(&self, other: &DyadicInterval) -> bool {
        self.hi < other.lo
    }

    pub fn overlaps(&self, other: &DyadicInterval) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(12, Round::Down),
            self.hi.to_decimal(12, Round::Up)
        )
    }
}

/// Cache key: (radicand, index, fractional bits); value: (floor mantissa,
/// whether the root is exact).
type RootCache = HashMap<(BigUint, u32, u32), (BigInt, bool)>;

thread_local! {
    static ROOT_CACHE: RefCell<RootCache> = RefCell::new(HashMap::new());
}

/// Certified enclosure of `k^(1/d)` with width `2^-frac_bits` (exact for
/// perfect powers), computed by integer root extraction.
pub fn root_enclosure(k: &BigUint, d: u32, frac_bits: u32) -> DyadicInterval {
    assert!(d >= 1);
    if k.is_zero() {
        return DyadicInterval::exact(Dyadic::zero(), frac_bits);
    }
    if k.is_one() {
        return DyadicInterval::exact(Dyadic::one(), frac_bits);
    }
    let (mant, is_exact) = ROOT_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().get(&(k.clone(), d, frac_bits)) {
            return hit.clone();
        }
        let shifted = k << (u64::from(d) * u64::from(frac_bits));
        let root = shifted.nth_root(d);
        let is_exact = root.pow(d) == shifted;
        let entry = (BigInt::from(root), is_exact);
        cache
            .borrow_mut()
            .insert((k.clone(), d, frac_bits), entry.clone());
        entry
    });
    let exp = -i64::from(frac_bits);
    let lo = Dyadic::new(mant.clone(), exp);
    if is_exact {
        DyadicInterval::exact(lo, frac_bits)
    } else {
        let hi = Dyadic::new(mant + BigInt::one(), exp);
        DyadicInterval::new(lo, hi, frac_bits)
    }
}
