use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{constants_raw, decimal_to_rational, fixed, from_raw, PrecisionContext};
use crate::error::{Error, Result};

/// Highest precision tried when deciding a sign numerically.
const MAX_SIGN_DIGITS: u32 = 160;

/// An exact real of the form `oct*v_oct + tet*v_tet + rational`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactReal {
    pub oct: BigRational,
    pub tet: BigRational,
    pub rational: BigRational,
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(oct: BigRational, tet: BigRational, rational: BigRational) -> Self {
        Self { oct, tet, rational }
    }

    pub fn v_oct() -> Self {
        Self::new(BigRational::one(), BigRational::zero(), BigRational::zero())
    }

    pub fn v_tet() -> Self {
        Self::new(BigRational::zero(), BigRational::one(), BigRational::zero())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), q)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_decimal(x: &BigDecimal) -> Self {
        Self::from_rational(decimal_to_rational(x))
    }

    pub fn is_zero(&self) -> bool {
        self.oct.is_zero() && self.tet.is_zero() && self.rational.is_zero()
    }

    /// True when no hyperbolic constant is involved.
    pub fn is_rational(&self) -> bool {
        self.oct.is_zero() && self.tet.is_zero()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(
            &self.oct * factor,
            &self.tet * factor,
            &self.rational * factor,
        )
    }

    /// `c` such that `self = c * other`, when one exists.
    pub fn ratio_to(&self, other: &ExactReal) -> Option<BigRational> {
        let pairs = [
            (&self.oct, &other.oct),
            (&self.tet, &other.tet),
            (&self.rational, &other.rational),
        ];
        let mut ratio: Option<BigRational> = None;
        for (a, b) in pairs {
            if b.is_zero() {
                if !a.is_zero() {
                    return None;
                }
                continue;
            }
            let r = a / b;
            match &ratio {
                Some(existing) if existing != &r => return None,
                _ => ratio = Some(r),
            }
        }
        ratio
    }

    /// Fixed-point value at `scale`, within one unit in the last place.
    pub(crate) fn eval_raw(&self, scale: u32) -> BigInt {
        let weight = (self.oct.abs() + self.tet.abs()).ceil().to_integer() + 2u32;
        let s = scale + fixed::integer_digits(&weight) + 1;
        let (oct, tet) = constants_raw(s);
        let mut raw = fixed::div_round(&(self.rational.numer() * fixed::pow10(s)), self.rational.denom());
        if !self.oct.is_zero() {
            raw += fixed::div_round(&(oct * self.oct.numer()), self.oct.denom());
        }
        if !self.tet.is_zero() {
            raw += fixed::div_round(&(tet * self.tet.numer()), self.tet.denom());
        }
        fixed::rescale(&raw, s, scale)
    }

    /// Decimal value rounded to the context's digits.
    pub fn evaluate(&self, ctx: &PrecisionContext) -> BigDecimal {
        let scale = ctx.working_scale();
        let raw = self.eval_raw(scale);
        from_raw(&fixed::rescale(&raw, scale, ctx.digits()), ctx.digits())
    }

    /// Sign of the value.
    ///
    /// Decided symbolically when all coefficients agree in sign, otherwise by
    /// evaluation at increasing precision until the error bound excludes zero.
    pub fn signum(&self, ctx: &PrecisionContext) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let coefficients = [&self.oct, &self.tet, &self.rational];
        if coefficients.iter().all(|c| !c.is_negative()) {
            return Ok(Ordering::Greater);
        }
        if coefficients.iter().all(|c| !c.is_positive()) {
            return Ok(Ordering::Less);
        }
        let mut scale = ctx.working_scale();
        loop {
            let raw = self.eval_raw(scale);
            if raw.abs() >= BigInt::from(2) {
                return Ok(if raw.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                });
            }
            if scale >= MAX_SIGN_DIGITS {
                return Err(Error::Undecided(self.to_string(), scale));
            }
            scale = (scale * 2).min(MAX_SIGN_DIGITS);
        }
    }

    pub fn cmp_exact(&self, other: &ExactReal, ctx: &PrecisionContext) -> Result<Ordering> {
        (self - other).signum(ctx)
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        ExactReal::new(
            &self.oct + &rhs.oct,
            &self.tet + &rhs.tet,
            &self.rational + &rhs.rational,
        )
    }
}

impl Add for ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: ExactReal) -> ExactReal {
        &self + &rhs
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        ExactReal::new(
            &self.oct - &rhs.oct,
            &self.tet - &rhs.tet,
            &self.rational - &rhs.rational,
        )
    }
}

impl Sub for ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: ExactReal) -> ExactReal {
        &self - &rhs
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal::new(-self.oct, -self.tet, -self.rational)
    }
}

impl Mul<&BigRational> for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &BigRational) -> ExactReal {
        self.scale(rhs)
    }
}

impl Div<&BigRational> for &ExactReal {
    type Output = ExactReal;
    fn div(self, rhs: &BigRational) -> ExactReal {
        self.scale(&rhs.recip())
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Renders as `p/q*voct+r/s*vtet+t/u`, dropping zero terms.
impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms = [
            (&self.oct, Some("voct")),
            (&self.tet, Some("vtet")),
            (&self.rational, None),
        ];
        let mut first = true;
        for (coefficient, symbol) in terms {
            if coefficient.is_zero() {
                continue;
            }
            if coefficient.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            write_coefficient(f, &coefficient.abs())?;
            if let Some(symbol) = symbol {
                write!(f, "*{symbol}")?;
            }
            first = false;
        }
        Ok(())
    }
}

fn parse_error(reason: impl Into<String>) -> Error {
    Error::Parse {
        what: "exact real",
        reason: reason.into(),
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| parse_error(format!("bad numerator in `{text}`")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| parse_error(format!("bad denominator in `{text}`")))?;
        if q.is_zero() {
            return Err(parse_error(format!("zero denominator in `{text}`")));
        }
        Ok(BigRational::new(p, q))
    } else {
        let d = BigDecimal::from_str(text).map_err(|_| parse_error(format!("bad number `{text}`")))?;
        Ok(decimal_to_rational(&d))
    }
}

enum Symbol {
    Oct,
    Tet,
}

fn symbol(text: &str) -> Option<Symbol> {
    match text.trim() {
        "voct" | "v_oct" => Some(Symbol::Oct),
        "vtet" | "v_tet" => Some(Symbol::Tet),
        _ => None,
    }
}

/// Splits at top-level `+`/`-`, keeping exponent signs such as `1e-5`.
fn split_terms(text: &str) -> Vec<(bool, &str)> {
    let mut terms = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let mut leading = true;
    for (i, b) in text.bytes().enumerate() {
        if b != b'+' && b != b'-' {
            continue;
        }
        let before = text[..i].trim_end();
        let in_exponent = before.ends_with(['e', 'E'])
            && before[..before.len() - 1]
                .chars()
                .last()
                .is_some_and(|c| c.is_ascii_digit() || c == '.');
        if in_exponent {
            continue;
        }
        let current = text[start..i].trim();
        if !(leading && current.is_empty()) {
            terms.push((negative, current));
        }
        leading = false;
        negative = b == b'-';
        start = i + 1;
    }
    terms.push((negative, text[start..].trim()));
    terms
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(parse_error("empty expression"));
        }
        let mut value = ExactReal::zero();
        for (negative, term) in split_terms(text) {
            if term.is_empty() {
                return Err(parse_error(format!("empty term in `{text}`")));
            }
            let (coefficient, sym) = match term.split_once('*') {
                Some((left, right)) => match (symbol(left), symbol(right)) {
                    (None, Some(s)) => (parse_rational(left)?, Some(s)),
                    (Some(s), None) => (parse_rational(right)?, Some(s)),
                    _ => return Err(parse_error(format!("bad term `{term}`"))),
                },
                None => match symbol(term) {
                    Some(s) => (BigRational::one(), Some(s)),
                    None => (parse_rational(term)?, None),
                },
            };
            let coefficient = if negative { -coefficient } else { coefficient };
            match sym {
                Some(Symbol::Oct) => value.oct += coefficient,
                Some(Symbol::Tet) => value.tet += coefficient,
                None => value.rational += coefficient,
            }
        }
        Ok(value)
    }
}
