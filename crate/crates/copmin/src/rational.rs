//! Exact scalars: arbitrary-precision rationals (always in lowest terms,
//! positive denominator) and integer-square-root based floor/ceil helpers
//! for expressions of the form `c ± sqrt(t)` with rational `c`, `t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use std::cmp::Ordering;

pub type Rational = num_rational::BigRational;

/// Shorthand constructor; normalizes sign and reduces.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// floor(sqrt(n)) for n >= 0.
pub fn isqrt_floor(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt_floor of negative integer");
    n.sqrt()
}

/// floor(sqrt(t)) for rational t >= 0.
// floor(sqrt(p/q)) = floor(isqrt(p*q) / q): any integer m with m <= sqrt(pq)/q
// satisfies mq <= isqrt(pq) because mq is an integer below sqrt(pq).
pub fn floor_sqrt(t: &Rational) -> BigInt {
    assert!(!t.is_negative(), "floor_sqrt of negative rational");
    let pq = t.numer() * t.denom();
    isqrt_floor(&pq).div_floor(t.denom())
}

/// ceil(sqrt(t)) for rational t >= 0.
pub fn ceil_sqrt(t: &Rational) -> BigInt {
    let f = floor_sqrt(t);
    if Rational::from_integer(&f * &f) == *t {
        f
    } else {
        f + 1
    }
}

/// Compares r with sqrt(t) exactly (t >= 0).
pub fn cmp_with_sqrt(r: &Rational, t: &Rational) -> Ordering {
    if r.is_negative() {
        return Ordering::Less;
    }
    (r * r).cmp(t)
}

/// Largest integer m with m <= c + sqrt(t), for t >= 0.
pub fn floor_plus_sqrt(c: &Rational, t: &Rational) -> BigInt {
    let base = c.floor().to_integer() + floor_sqrt(t);
    // base <= c + sqrt(t) and base + 2 > c + sqrt(t), so only base+1 needs a check.
    let candidate = &base + BigInt::one();
    let r = Rational::from_integer(candidate.clone()) - c;
    if cmp_with_sqrt(&r, t) != Ordering::Greater {
        candidate
    } else {
        base
    }
}

/// Smallest integer m with m >= c - sqrt(t), for t >= 0.
pub fn ceil_minus_sqrt(c: &Rational, t: &Rational) -> BigInt {
    let base = c.ceil().to_integer() - floor_sqrt(t);
    // base >= c - sqrt(t) and base - 2 < c - sqrt(t), so only base-1 needs a check.
    let candidate = &base - BigInt::one();
    let r = c - Rational::from_integer(candidate.clone());
    if cmp_with_sqrt(&r, t) != Ordering::Greater {
        candidate
    } else {
        base
    }
}

/// Nearest rational with denominator dividing `denom` (round half away from zero).
pub fn rationalize(x: f64, denom: u64) -> Rational {
    assert!(x.is_finite(), "rationalize of non-finite float");
    let scaled = x * denom as f64;
    let rounded = scaled.round();
    // f64 -> BigInt via string is exact for |v| < 2^53; the QP/SPN numerics stay far below that.
    let n = BigInt::from(rounded as i128);
    Rational::new(n, BigInt::from(denom))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
