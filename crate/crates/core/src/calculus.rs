//! Belted sums and volume densities.
//!
//! A belted sum of base links is stored as a multiset. Volumes add under
//! belted sum, and the modified augmentation count `ã = a - 1` adds as well:
//!
//! ```text
//! vol(c) = Σ k_i vol(L_i)      ã(c) = Σ k_i ã(L_i)      a(c) = ã(c) + 1
//! vd(c)  = vol(c) / a(c)       vd~(c) = vol(c) / ã(c)
//! ```
//!
//! so `vd~` of a sum is the `ã`-weighted average of the parts' `vd~`.

use std::collections::BTreeMap;
use std::fmt;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::catalog::{BaseLink, Catalog, ExactVolume};
use crate::error::{Error, Result};
use crate::numerics::{self, ExactReal, PrecisionContext};

/// An iterated belted sum, as a multiset of base links.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: BTreeMap<BaseLink, u64>,
}

impl Composition {
    /// Collects parts, merging repeated links. Fails on an empty input or a
    /// zero multiplicity.
    pub fn new(parts: impl IntoIterator<Item = (BaseLink, u64)>) -> Result<Self> {
        let mut map: BTreeMap<BaseLink, u64> = BTreeMap::new();
        for (link, k) in parts {
            if k == 0 {
                return Err(Error::NonPositive("multiplicity"));
            }
            let slot = map.entry(link).or_insert(0);
            *slot = slot.checked_add(k).ok_or(Error::Overflow("multiplicity"))?;
        }
        if map.is_empty() {
            return Err(Error::InvalidRecipe("a composition needs at least one part".into()));
        }
        Ok(Self { parts: map })
    }

    pub fn single(link: BaseLink) -> Self {
        Self {
            parts: BTreeMap::from([(link, 1)]),
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = (&BaseLink, u64)> {
        self.parts.iter().map(|(l, &k)| (l, k))
    }

    pub fn multiplicity(&self, name: &str) -> u64 {
        self.parts
            .iter()
            .filter(|(l, _)| l.name() == name)
            .map(|(_, &k)| k)
            .sum()
    }

    /// The `m`-fold belted sum of this composition with itself.
    pub fn replicate(&self, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositive("replication count"));
        }
        let parts = self
            .parts
            .iter()
            .map(|(l, &k)| {
                k.checked_mul(m)
                    .map(|km| (l.clone(), km))
                    .ok_or(Error::Overflow("multiplicity"))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self { parts })
    }

    /// `name*k` terms joined by commas, in name order.
    pub fn recipe_string(&self) -> String {
        self.parts
            .iter()
            .map(|(l, k)| format!("{}*{}", l.name(), k))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.recipe_string())
    }
}

/// Multiset union. The choice of cut circles does not affect any value
/// tracked here, so the sum carries none.
pub fn belted_sum(x: &Composition, y: &Composition) -> Composition {
    let mut parts = x.parts.clone();
    for (link, &k) in &y.parts {
        let slot = parts.entry(link.clone()).or_insert(0);
        *slot = slot.checked_add(k).expect("multiplicity overflow in belted sum");
    }
    Composition { parts }
}

pub fn volume(c: &Composition) -> ExactVolume {
    let mut parts = c.parts.iter();
    let (first, &k) = parts.next().expect("compositions are nonempty");
    parts.fold(first.volume().times(u128::from(k)), |acc, (l, &k)| {
        acc.add(&l.volume().times(u128::from(k)))
    })
}

/// ã(c) = Σ k_i (a_i - 1).
pub fn modified_augmentations(c: &Composition) -> u128 {
    c.parts
        .iter()
        .map(|(l, &k)| u128::from(k) * u128::from(l.modified_augmentations()))
        .sum()
}

/// a(c) = ã(c) + 1.
pub fn augmentations(c: &Composition) -> u128 {
    modified_augmentations(c) + 1
}

/// A density `numerator / denominator`, kept exact alongside its decimal value.
#[derive(Debug, Clone)]
pub struct DensityValue {
    numerator: ExactVolume,
    denominator: u128,
    evaluated: BigDecimal,
}

impl DensityValue {
    pub fn new(numerator: ExactVolume, denominator: u128, ctx: &PrecisionContext) -> Self {
        assert!(denominator > 0, "density denominator must be positive");
        let mut value = Self {
            numerator,
            denominator,
            evaluated: BigDecimal::zero(),
        };
        value.evaluated = value.exact().evaluate(ctx);
        value
    }

    pub fn numerator(&self) -> &ExactVolume {
        &self.numerator
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    pub fn evaluated(&self) -> &BigDecimal {
        &self.evaluated
    }

    pub fn exact(&self) -> ExactReal {
        self.numerator
            .to_exact()
            .scale(&BigRational::new(BigInt::one(), self.denominator.into()))
    }

    /// Equality of the exact values, ignoring how each fraction is written.
    pub fn exact_eq(&self, other: &DensityValue) -> bool {
        self.exact() == other.exact()
    }
}

impl PartialEq for DensityValue {
    fn eq(&self, other: &Self) -> bool {
        self.exact_eq(other)
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.exact(), self.evaluated.to_plain_string())
    }
}

/// vol(c) / a(c).
pub fn vd(c: &Composition, ctx: &PrecisionContext) -> DensityValue {
    DensityValue::new(volume(c), augmentations(c), ctx)
}

/// vol(c) / ã(c).
pub fn vd_mod(c: &Composition, ctx: &PrecisionContext) -> DensityValue {
    DensityValue::new(volume(c), modified_augmentations(c), ctx)
}

/// Σ k_i ã_i vd~_i / Σ k_i ã_i, summed part by part.
pub fn weighted_average_vd_mod(c: &Composition) -> ExactReal {
    let mut numerator = ExactReal::zero();
    let mut weight = BigInt::zero();
    for (link, k) in c.parts() {
        let w = BigInt::from(k) * link.modified_augmentations();
        numerator = numerator + link.modified_density().scale(&BigRational::from_integer(w.clone()));
        weight += w;
    }
    numerator.scale(&BigRational::new(BigInt::one(), weight))
}

/// The weighted average evaluated in decimal arithmetic from each part's
/// rounded `vd~`.
pub fn weighted_average_vd_mod_decimal(c: &Composition, ctx: &PrecisionContext) -> BigDecimal {
    let wide = PrecisionContext::new(ctx.working_scale()).expect("wider than minimum");
    let mut numerator = BigDecimal::zero();
    let mut weight = BigInt::zero();
    for (link, k) in c.parts() {
        let w = BigInt::from(k) * link.modified_augmentations();
        numerator += link.modified_density().evaluate(&wide) * BigDecimal::from(w.clone());
        weight += w;
    }
    numerics::decimal_div(&numerator, &weight, ctx.digits())
}

/// `k` copies of `link` joined by belted sum.
pub fn self_sum(link: &BaseLink, k: u64) -> Result<Composition> {
    if k == 0 {
        return Err(Error::NonPositive("copy count"));
    }
    Composition::new([(link.clone(), k)])
}

/// vd~(c) / (m ã(c) + 1), which is exactly vd~(c^(m)) - vd(c^(m)).
pub fn replication_gap(c: &Composition, m: u64) -> Result<ExactReal> {
    if m == 0 {
        return Err(Error::NonPositive("replication count"));
    }
    let atilde = modified_augmentations(c);
    let denominator = BigInt::from(atilde) * BigInt::from(m) + 1u32;
    let vd_mod = volume(c)
        .to_exact()
        .scale(&BigRational::new(BigInt::one(), atilde.into()));
    Ok(vd_mod.scale(&BigRational::new(BigInt::one(), denominator)))
}

pub fn replication_error(c: &Composition, m: u64, ctx: &PrecisionContext) -> Result<BigDecimal> {
    Ok(replication_gap(c, m)?.evaluate(ctx))
}

/// Parses `name*k,name*k,...` against a catalog. A missing `*k` means one copy.
pub fn parse_recipe(text: &str, catalog: &Catalog) -> Result<Composition> {
    let mut parts = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::InvalidRecipe(format!("empty term in `{text}`")));
        }
        let (name, k) = match item.split_once('*') {
            Some((name, k)) => {
                let k: u64 = k.trim().parse().map_err(|_| {
                    Error::InvalidRecipe(format!("bad multiplicity `{}` in `{item}`", k.trim()))
                })?;
                (name.trim(), k)
            }
            None => (item, 1),
        };
        if k == 0 {
            return Err(Error::InvalidRecipe(format!("zero multiplicity in `{item}`")));
        }
        parts.push((catalog.get(name)?.clone(), k));
    }
    Composition::new(parts)
}
