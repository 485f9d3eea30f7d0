//! Fixed-point kernels on scaled integers.
//!
//! A value `x` at scale `s` is stored as the integer `round(x * 10^s)`.
//! Every kernel works a few digits past the requested scale and rounds once
//! at the end, so results are within one unit in the last place.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

const INTERNAL_GUARD: u32 = 10;

pub(crate) fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

/// Integer division rounding half away from zero.
pub(crate) fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(!den.is_zero());
    let (q, r) = num.div_rem(den);
    if r.abs() * 2u32 >= den.abs() {
        if num.is_negative() != den.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

pub(crate) fn rescale(raw: &BigInt, from: u32, to: u32) -> BigInt {
    if to >= from {
        raw * pow10(to - from)
    } else {
        div_round(raw, &pow10(from - to))
    }
}

pub(crate) fn mul(a: &BigInt, b: &BigInt, scale: u32) -> BigInt {
    div_round(&(a * b), &pow10(scale))
}

pub(crate) fn div(a: &BigInt, b: &BigInt, scale: u32) -> BigInt {
    div_round(&(a * pow10(scale)), b)
}

/// atan(1/x) by its alternating Taylor series.
fn atan_recip(x: u32, scale: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = pow10(scale) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    loop {
        let term = &power / (2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// Machin's formula: pi = 16 atan(1/5) - 4 atan(1/239).
pub(crate) fn pi(scale: u32) -> BigInt {
    let s = scale + INTERNAL_GUARD;
    let raw = atan_recip(5, s) * 16 - atan_recip(239, s) * 4;
    rescale(&raw, s, scale)
}

/// atanh(z) for |z| <= 1/3, z given at `scale`.
fn atanh_small(z: &BigInt, scale: u32) -> BigInt {
    let z2 = mul(z, z, scale);
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power = mul(&power, &z2, scale);
        k += 1;
    }
    sum
}

/// Natural logarithm of a positive fixed-point value.
pub(crate) fn ln(x: &BigInt, scale: u32) -> BigInt {
    assert!(x.is_positive(), "ln of a non-positive value");
    let s = scale + INTERNAL_GUARD;
    let one = pow10(s);
    let mut y = rescale(x, scale, s);
    let lower = &one * 2u32 / 3u32;
    let upper = &one * 4u32 / 3u32;
    let mut halvings: i64 = 0;
    while y > upper {
        y = div_round(&y, &BigInt::from(2u32));
        halvings += 1;
    }
    while y < lower {
        y *= 2u32;
        halvings -= 1;
    }
    let z = div(&(&y - &one), &(&y + &one), s);
    let mut raw = atanh_small(&z, s) * 2u32;
    if halvings != 0 {
        let ln2 = atanh_small(&(&one / 3u32), s) * 2u32;
        raw += ln2 * halvings;
    }
    rescale(&raw, s, scale)
}

/// Number of decimal digits in the integer part of `|x|`, at least 1.
pub(crate) fn integer_digits(x: &BigInt) -> u32 {
    let s = x.abs().to_str_radix(10);
    s.len() as u32
}
