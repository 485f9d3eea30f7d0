//! High-precision evaluation of the hyperbolic constants.
//!
//! `v_oct = 8 Λ(π/4)` is the volume of the regular ideal octahedron and
//! `v_tet = 2 Λ(π/6)` the volume of the regular ideal tetrahedron. Both are
//! computed from a series with an explicit tail bound, never from
//! transcribed digits, so any working precision can be requested.

mod exact;
pub(crate) mod fixed;
mod lobachevsky;

use std::sync::RwLock;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use exact::ExactReal;

use crate::error::{Error, Result};

/// Working precision, in decimal digits after the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 20;
    pub const DEFAULT_DIGITS: u32 = 30;
    /// Extra digits carried by every evaluation before the final rounding.
    pub const GUARD_DIGITS: u32 = 5;
    /// Comparisons treat values closer than `10^-(digits - 3)` as equal.
    pub const TOLERANCE_GUARD: u32 = 3;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Precision {
                digits,
                minimum: Self::MIN_DIGITS,
            });
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Scale at which kernels run before rounding to `digits`.
    pub fn working_scale(&self) -> u32 {
        self.digits + Self::GUARD_DIGITS
    }

    pub fn tolerance(&self) -> BigDecimal {
        BigDecimal::new(BigInt::one(), i64::from(self.digits - Self::TOLERANCE_GUARD))
    }

    /// Rounds half away from zero to `digits` places.
    pub fn round(&self, x: &BigDecimal) -> BigDecimal {
        from_raw(&to_raw(x, self.digits), self.digits)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

/// An angle in radians, either an exact rational multiple of pi or a decimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Angle {
    PiMultiple(BigRational),
    Radians(BigDecimal),
}

impl Angle {
    pub fn pi_over(q: i64) -> Self {
        Angle::PiMultiple(BigRational::new(BigInt::one(), BigInt::from(q)))
    }

    fn to_raw(&self, scale: u32) -> Result<BigInt> {
        match self {
            Angle::PiMultiple(q) => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                if !q.is_positive() || q > &half {
                    return Err(Error::AngleOutOfDomain(format!("{q}*pi")));
                }
                let pi = fixed::pi(scale);
                Ok(fixed::div_round(&(pi * q.numer()), q.denom()))
            }
            Angle::Radians(x) => {
                let raw = to_raw(x, scale);
                let half_pi = fixed::pi(scale) / 2u32;
                if !x.is_positive() || raw > half_pi + 1u32 {
                    return Err(Error::AngleOutOfDomain(x.to_plain_string()));
                }
                Ok(raw.min(fixed::pi(scale) / 2u32).max(BigInt::zero()))
            }
        }
    }
}

/// Λ(θ) = -∫₀^θ ln|2 sin t| dt for 0 < θ ≤ π/2.
pub fn lobachevsky(theta: &Angle, ctx: &PrecisionContext) -> Result<BigDecimal> {
    let scale = ctx.working_scale();
    let raw = lobachevsky::lobachevsky_raw(&theta.to_raw(scale)?, scale);
    Ok(from_raw(&fixed::rescale(&raw, scale, ctx.digits), ctx.digits))
}

pub fn v_oct(ctx: &PrecisionContext) -> BigDecimal {
    let (oct, _) = constants_raw(ctx.digits);
    from_raw(&oct, ctx.digits)
}

pub fn v_tet(ctx: &PrecisionContext) -> BigDecimal {
    let (_, tet) = constants_raw(ctx.digits);
    from_raw(&tet, ctx.digits)
}

pub fn pi(ctx: &PrecisionContext) -> BigDecimal {
    from_raw(&fixed::pi(ctx.digits), ctx.digits)
}

struct ConstantCache {
    scale: u32,
    oct: BigInt,
    tet: BigInt,
}

static CONSTANTS: RwLock<Option<ConstantCache>> = RwLock::new(None);

/// `(v_oct, v_tet)` at `scale`, each within one unit in the last place.
pub(crate) fn constants_raw(scale: u32) -> (BigInt, BigInt) {
    {
        let cache = CONSTANTS.read().unwrap_or_else(|p| p.into_inner());
        if let Some(c) = cache.as_ref() {
            if c.scale >= scale {
                return (
                    fixed::rescale(&c.oct, c.scale, scale),
                    fixed::rescale(&c.tet, c.scale, scale),
                );
            }
        }
    }
    // round the cached precision up so nearby requests reuse it
    let cached_scale = scale.div_ceil(16) * 16 + 16;
    let inner = cached_scale + 5;
    let pi = fixed::pi(inner);
    let oct = lobachevsky::lobachevsky_raw(&(&pi / 4u32), inner) * 8u32;
    let tet = lobachevsky::lobachevsky_raw(&(&pi / 6u32), inner) * 2u32;
    let entry = ConstantCache {
        scale: cached_scale,
        oct: fixed::rescale(&oct, inner, cached_scale),
        tet: fixed::rescale(&tet, inner, cached_scale),
    };
    let out = (
        fixed::rescale(&entry.oct, cached_scale, scale),
        fixed::rescale(&entry.tet, cached_scale, scale),
    );
    let mut cache = CONSTANTS.write().unwrap_or_else(|p| p.into_inner());
    if cache.as_ref().is_none_or(|c| c.scale < entry.scale) {
        *cache = Some(entry);
    }
    out
}

/// Fixed-point integer for `x` at `scale`, rounded half away from zero.
pub(crate) fn to_raw(x: &BigDecimal, scale: u32) -> BigInt {
    let (digits, exponent) = x.as_bigint_and_exponent();
    let target = i64::from(scale);
    if exponent <= target {
        digits * fixed::pow10((target - exponent) as u32)
    } else {
        fixed::div_round(&digits, &fixed::pow10((exponent - target) as u32))
    }
}

pub(crate) fn from_raw(raw: &BigInt, scale: u32) -> BigDecimal {
    BigDecimal::new(raw.clone(), i64::from(scale))
}

/// Exact rational value of a decimal.
pub fn decimal_to_rational(x: &BigDecimal) -> BigRational {
    let (digits, exponent) = x.as_bigint_and_exponent();
    if exponent >= 0 {
        BigRational::new(digits, fixed::pow10(exponent as u32))
    } else {
        BigRational::from_integer(digits * fixed::pow10((-exponent) as u32))
    }
}

/// `x / n` rounded to `digits` places.
pub fn decimal_div(x: &BigDecimal, n: &BigInt, digits: u32) -> BigDecimal {
    let scale = digits + PrecisionContext::GUARD_DIGITS;
    let raw = fixed::div_round(&to_raw(x, scale), n);
    from_raw(&fixed::rescale(&raw, scale, digits), digits)
}

/// Parses `p/q` or an integer `p`.
pub(crate) fn parse_rational_strict(text: &str) -> std::result::Result<BigRational, String> {
    let text = text.trim();
    let (p, q) = text.split_once('/').unwrap_or((text, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| format!("`{text}` is not of the form p/q"))?;
    let q: BigInt = q.trim().parse().map_err(|_| format!("`{text}` is not of the form p/q"))?;
    if q.is_zero() {
        return Err(format!("`{text}` has a zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

/// Fixed-width decimal text with exactly `digits` places.
pub fn format_decimal(x: &BigDecimal, digits: u32) -> String {
    from_raw(&to_raw(x, digits), digits).to_plain_string()
}
