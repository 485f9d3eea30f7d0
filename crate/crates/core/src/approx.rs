//! Belted-sum recipes that approximate a target density.
//!
//! Mixing `k` copies of `L1` with `l` copies of `L2` gives
//!
//! ```text
//! vd~(k, l) = (k ã1 vd~1 + l ã2 vd~2) / (k ã1 + l ã2)
//! ```
//!
//! which equals `α vd~1 + (1 - α) vd~2` exactly when `k/l = r` with
//! `r = ã2 α / (ã1 (1 - α))`. Continued-fraction convergents of `r` give the
//! pairs `(k, l)`. Replicating the mixture `m` times then moves `vd` to within
//! `vd~ / (m ã + 1)` of `vd~`.

use std::cmp::Ordering;
use std::fmt;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::calculus::{self, Composition, DensityValue};
use crate::catalog::BaseLink;
use crate::error::{Error, Result};
use crate::numerics::{self, fixed, ExactReal, PrecisionContext};

/// A quantity that is either known exactly or only to working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(BigDecimal),
}

impl Scalar {
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Exact(q) => q.clone(),
            Scalar::Approx(x) => numerics::decimal_to_rational(x),
        }
    }

    pub fn to_decimal(&self, digits: u32) -> BigDecimal {
        let q = self.to_rational();
        let scale = digits + PrecisionContext::GUARD_DIGITS;
        let raw = fixed::div_round(&(q.numer() * fixed::pow10(scale)), q.denom());
        numerics::from_raw(&fixed::rescale(&raw, scale, digits), digits)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Approx(x) => write!(f, "{}", x.to_plain_string()),
        }
    }
}

/// Digits carried by approximate `α` and `r`, enough that convergents with
/// denominators up to `max_denominator` are exact.
fn ratio_digits(ctx: &PrecisionContext, max_denominator: u64) -> u32 {
    let cap_digits = max_denominator.checked_ilog10().unwrap_or(0) + 1;
    ctx.working_scale().max(2 * cap_digits + 12)
}

/// α = (d - v2) / (v1 - v2), the weight on `v1` that reproduces `d`.
///
/// Exact when `d - v2` is a rational multiple of `v1 - v2`; otherwise a decimal
/// carried to `digits` places.
pub fn alpha_for_target(
    d: &ExactReal,
    v1: &ExactReal,
    v2: &ExactReal,
    digits: u32,
    ctx: &PrecisionContext,
) -> Result<Scalar> {
    if v1 == v2 {
        return Err(Error::DegeneratePair);
    }
    let (lower, upper) = if v1.cmp_exact(v2, ctx)? == Ordering::Less {
        (v1, v2)
    } else {
        (v2, v1)
    };
    if d.cmp_exact(lower, ctx)? == Ordering::Less || d.cmp_exact(upper, ctx)? == Ordering::Greater
    {
        return Err(Error::TargetOutOfRange {
            target: numerics::format_decimal(&d.evaluate(ctx), ctx.digits()),
            lower: numerics::format_decimal(&lower.evaluate(ctx), ctx.digits()),
            upper: numerics::format_decimal(&upper.evaluate(ctx), ctx.digits()),
        });
    }
    let numerator = d - v2;
    let denominator = v1 - v2;
    if let Some(alpha) = numerator.ratio_to(&denominator) {
        return Ok(Scalar::Exact(alpha));
    }
    let scale = digits + PrecisionContext::GUARD_DIGITS + 10;
    let n = numerator.eval_raw(2 * scale);
    let m = denominator.eval_raw(scale);
    let raw = fixed::rescale(&fixed::div_round(&n, &m), scale, digits);
    Ok(Scalar::Approx(numerics::from_raw(&raw, digits)))
}

/// r = ã2 α / (ã1 (1 - α)), the copy ratio `k/l` that realizes `α`.
pub fn target_ratio(alpha: &Scalar, atilde1: u64, atilde2: u64, digits: u32) -> Result<Scalar> {
    let a = alpha.to_rational();
    if !a.is_positive() || a >= BigRational::one() {
        return Err(Error::EndpointAlpha(alpha.to_string()));
    }
    if atilde1 == 0 || atilde2 == 0 {
        return Err(Error::NonPositive("modified augmentation count"));
    }
    let r = BigRational::from_integer(atilde2.into()) * &a
        / (BigRational::from_integer(atilde1.into()) * (BigRational::one() - &a));
    Ok(match alpha {
        Scalar::Exact(_) => Scalar::Exact(r),
        Scalar::Approx(_) => Scalar::Approx(Scalar::Exact(r).to_decimal(digits)),
    })
}

/// A fraction `numerator / denominator` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Convergent {
    pub numerator: u64,
    pub denominator: u64,
}

impl Convergent {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.into(), self.denominator.into())
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Continued-fraction convergents of `r` with denominator at most
/// `max_denominator`, by increasing denominator.
///
/// Each returned fraction is a best approximation of the second kind. Two
/// candidates are dropped for that reason: `0/1`, and the leading `a0/1` when
/// the next partial quotient is 1 (then `(a0 + 1)/1` is closer). The
/// expansion also stops once a term no longer fits in `u64`.
pub fn best_rational_approximations(r: &BigRational, max_denominator: u64) -> Vec<Convergent> {
    let mut out: Vec<Convergent> = Vec::new();
    if !r.is_positive() || max_denominator == 0 {
        return out;
    }
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut x = r.clone();
    loop {
        let a = x.floor().to_integer();
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        let (Some(num), Some(den)) = (p_next.to_u64(), q_next.to_u64()) else {
            break;
        };
        if den > max_denominator {
            break;
        }
        if num > 0 {
            if out.last().is_some_and(|c| c.denominator == den) {
                out.pop();
            }
            out.push(Convergent {
                numerator: num,
                denominator: den,
            });
        }
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    debug_assert!(out.iter().all(|c| c.numerator.gcd(&c.denominator) == 1));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DensityMode {
    Vd,
    #[default]
    VdMod,
}

impl fmt::Display for DensityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityMode::Vd => "vd",
            DensityMode::VdMod => "vdmod",
        })
    }
}

impl std::str::FromStr for DensityMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vd" => Ok(DensityMode::Vd),
            "vdmod" | "vd_mod" => Ok(DensityMode::VdMod),
            other => Err(Error::Parse {
                what: "density mode",
                reason: format!("`{other}` is not vd or vdmod"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxOptions {
    pub max_denominator: u64,
}

impl ApproxOptions {
    pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000_000;
}

impl Default for ApproxOptions {
    fn default() -> Self {
        Self {
            max_denominator: Self::DEFAULT_MAX_DENOMINATOR,
        }
    }
}

/// `k` copies of `first` and `l` copies of `second`, all replicated `m` times.
///
/// One of `k`, `l` is zero when the target sits at an endpoint.
#[derive(Debug, Clone)]
pub struct Recipe {
    pub mode: DensityMode,
    pub first: String,
    pub second: String,
    pub k: u64,
    pub l: u64,
    pub m: u64,
    pub target: ExactReal,
    pub achieved_vd_mod: DensityValue,
    pub achieved_vd: DensityValue,
    /// |achieved - target| for the density selected by `mode`.
    pub error: ExactReal,
    pub error_decimal: BigDecimal,
    pub composition: Composition,
}

impl Recipe {
    pub fn achieved(&self) -> &DensityValue {
        match self.mode {
            DensityMode::Vd => &self.achieved_vd,
            DensityMode::VdMod => &self.achieved_vd_mod,
        }
    }

    /// The expanded composition as text accepted by [`calculus::parse_recipe`].
    pub fn recipe_string(&self) -> String {
        self.composition.recipe_string()
    }
}

fn check_tolerance(eps: &BigDecimal) -> Result<BigRational> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveTolerance(eps.to_plain_string()));
    }
    Ok(numerics::decimal_to_rational(eps))
}

fn abs_exact(x: ExactReal, ctx: &PrecisionContext) -> Result<ExactReal> {
    Ok(if x.signum(ctx)? == Ordering::Less { -x } else { x })
}

/// |x| < eps, decided exactly.
fn within(x: &ExactReal, eps: &BigRational, ctx: &PrecisionContext) -> Result<bool> {
    let bound = ExactReal::from_rational(eps.clone());
    Ok((x - &bound).signum(ctx)? == Ordering::Less && (x + &bound).signum(ctx)? == Ordering::Greater)
}

fn mixture(first: &BaseLink, second: &BaseLink, k: u64, l: u64) -> Result<Composition> {
    Composition::new(
        [(first.clone(), k), (second.clone(), l)]
            .into_iter()
            .filter(|&(_, n)| n > 0),
    )
}

/// Smallest convergent-based `(k, l)` with |vd~(k, l) - target| < eps.
fn search_pair(
    target: &ExactReal,
    first: &BaseLink,
    second: &BaseLink,
    eps: &BigRational,
    ctx: &PrecisionContext,
    options: &ApproxOptions,
) -> Result<(u64, u64)> {
    let v1 = first.modified_density();
    let v2 = second.modified_density();
    let range_error = || -> Result<Error> {
        let (lower, upper) = if v1.cmp_exact(&v2, ctx)? == Ordering::Greater {
            (&v2, &v1)
        } else {
            (&v1, &v2)
        };
        Ok(Error::TargetOutOfRange {
            target: numerics::format_decimal(&target.evaluate(ctx), ctx.digits()),
            lower: numerics::format_decimal(&lower.evaluate(ctx), ctx.digits()),
            upper: numerics::format_decimal(&upper.evaluate(ctx), ctx.digits()),
        })
    };
    if v1 == v2 {
        if target == &v1 {
            return Ok((1, 0));
        }
        return Err(range_error()?);
    }
    let digits = ratio_digits(ctx, options.max_denominator);
    let alpha = alpha_for_target(target, &v1, &v2, digits, ctx)?;

    let gap1 = abs_exact(&v1 - target, ctx)?;
    let gap2 = abs_exact(&v2 - target, ctx)?;
    let near1 = within(&gap1, eps, ctx)?;
    let near2 = within(&gap2, eps, ctx)?;
    if near1 || near2 {
        let first_is_closer = gap1.cmp_exact(&gap2, ctx)? != Ordering::Greater;
        return Ok(if near1 && (first_is_closer || !near2) {
            (1, 0)
        } else {
            (0, 1)
        });
    }

    let ratio = target_ratio(
        &alpha,
        first.modified_augmentations(),
        second.modified_augmentations(),
        digits,
    )?;
    for c in best_rational_approximations(&ratio.to_rational(), options.max_denominator) {
        let composition = mixture(first, second, c.numerator, c.denominator)?;
        let vd_mod = calculus::weighted_average_vd_mod(&composition);
        if within(&(&vd_mod - target), eps, ctx)? {
            return Ok((c.numerator, c.denominator));
        }
    }
    Err(Error::DenominatorCapExceeded {
        cap: options.max_denominator,
    })
}

fn build_recipe(
    mode: DensityMode,
    target: &ExactReal,
    first: &BaseLink,
    second: &BaseLink,
    (k, l, m): (u64, u64, u64),
    ctx: &PrecisionContext,
) -> Result<Recipe> {
    let composition = mixture(first, second, k, l)?.replicate(m)?;
    let achieved_vd_mod = calculus::vd_mod(&composition, ctx);
    let achieved_vd = calculus::vd(&composition, ctx);
    let achieved = match mode {
        DensityMode::Vd => achieved_vd.exact(),
        DensityMode::VdMod => achieved_vd_mod.exact(),
    };
    let error = abs_exact(&achieved - target, ctx)?;
    Ok(Recipe {
        mode,
        first: first.name().to_string(),
        second: second.name().to_string(),
        k,
        l,
        m,
        target: target.clone(),
        error_decimal: error.evaluate(ctx),
        error,
        achieved_vd_mod,
        achieved_vd,
        composition,
    })
}

/// A recipe with `m = 1` whose vd~ lies within `eps` of `target`.
pub fn approximate_vd_mod(
    target: &ExactReal,
    first: &BaseLink,
    second: &BaseLink,
    eps: &BigDecimal,
    ctx: &PrecisionContext,
    options: &ApproxOptions,
) -> Result<Recipe> {
    let eps = check_tolerance(eps)?;
    let (k, l) = search_pair(target, first, second, &eps, ctx, options)?;
    build_recipe(DensityMode::VdMod, target, first, second, (k, l, 1), ctx)
}

/// Least `m >= 1` with vd~ / (m ã + 1) < bound.
fn least_replication(vd_mod: &ExactReal, atilde: u128, bound: &BigRational, ctx: &PrecisionContext) -> Result<u64> {
    let gap_below = |m: u64| -> Result<bool> {
        let denominator = BigInt::from(atilde) * m + 1u32;
        let gap = vd_mod.scale(&BigRational::new(BigInt::one(), denominator));
        Ok(gap.cmp_exact(&ExactReal::from_rational(bound.clone()), ctx)? == Ordering::Less)
    };
    // closed form m = floor((vd~/bound - 1)/ã) + 1, from a rational
    // approximation of vd~ and then corrected exactly
    let estimate = numerics::decimal_to_rational(&vd_mod.evaluate(ctx)) / bound;
    let estimate = ((estimate - BigRational::one()) / BigRational::from_integer(atilde.into()))
        .floor()
        .to_integer()
        + 1u32;
    let mut m = estimate
        .max(BigInt::one())
        .to_u64()
        .ok_or(Error::Overflow("replication count"))?;
    while m > 1 && gap_below(m - 1)? {
        m -= 1;
    }
    while !gap_below(m)? {
        m = m.checked_add(1).ok_or(Error::Overflow("replication count"))?;
    }
    Ok(m)
}

/// A recipe whose vd lies within `eps` of `target`.
///
/// `eps` is split evenly: the pair `(k, l)` gets vd~ within `eps/2`, and `m`
/// is the least replication count that brings vd within `eps/2` of vd~.
pub fn approximate_vd(
    target: &ExactReal,
    first: &BaseLink,
    second: &BaseLink,
    eps: &BigDecimal,
    ctx: &PrecisionContext,
    options: &ApproxOptions,
) -> Result<Recipe> {
    let half = check_tolerance(eps)? / BigInt::from(2);
    let (k, l) = search_pair(target, first, second, &half, ctx, options)?;
    let pair = mixture(first, second, k, l)?;
    let vd_mod = calculus::weighted_average_vd_mod(&pair);
    let atilde = calculus::modified_augmentations(&pair);
    let m = least_replication(&vd_mod, atilde, &half, ctx)?;
    k.checked_mul(m)
        .and(l.checked_mul(m))
        .ok_or(Error::Overflow("recipe multiplicity"))?;
    build_recipe(DensityMode::Vd, target, first, second, (k, l, m), ctx)
}

pub fn approximate(
    mode: DensityMode,
    target: &ExactReal,
    first: &BaseLink,
    second: &BaseLink,
    eps: &BigDecimal,
    ctx: &PrecisionContext,
    options: &ApproxOptions,
) -> Result<Recipe> {
    match mode {
        DensityMode::Vd => approximate_vd(target, first, second, eps, ctx, options),
        DensityMode::VdMod => approximate_vd_mod(target, first, second, eps, ctx, options),
    }
}
