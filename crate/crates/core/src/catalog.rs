//! Base links and the catalog file.
//!
//! A catalog is a JSON document:
//!
//! ```json
//! {"links": [{"name": "L41", "c_oct": "2/1", "c_tet": "0/1", "remainder": "0", "a": 2, "note": "..."}]}
//! ```
//!
//! `c_oct`, `c_tet` and `remainder` default to `"0"`. The built-in `L41`
//! entry is added to every loaded catalog unless the file defines its own.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, ExactReal, PrecisionContext};

pub const FIGURE_EIGHT: &str = "L41";

/// A volume `c_oct*v_oct + c_tet*v_tet + remainder` with nonnegative parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactVolume {
    c_oct: BigRational,
    c_tet: BigRational,
    remainder: BigDecimal,
}

impl ExactVolume {
    pub fn new(c_oct: BigRational, c_tet: BigRational, remainder: BigDecimal) -> Result<Self> {
        if c_oct.is_negative() || c_tet.is_negative() || remainder.is_negative() {
            return Err(Error::InvalidVolume(
                "coefficients and remainder must be nonnegative".into(),
            ));
        }
        if c_oct.is_zero() && c_tet.is_zero() && remainder.is_zero() {
            return Err(Error::InvalidVolume("volume must be positive".into()));
        }
        Ok(Self {
            c_oct,
            c_tet,
            remainder: remainder.normalized(),
        })
    }

    pub fn octahedra(c: BigRational) -> Result<Self> {
        Self::new(c, BigRational::zero(), BigDecimal::zero())
    }

    pub fn tetrahedra(c: BigRational) -> Result<Self> {
        Self::new(BigRational::zero(), c, BigDecimal::zero())
    }

    /// Converts an exact real whose rational part is a terminating decimal.
    pub fn from_exact(x: &ExactReal) -> Result<Self> {
        let remainder = terminating_decimal(&x.rational).ok_or_else(|| {
            Error::InvalidVolume(format!("remainder {} is not a terminating decimal", x.rational))
        })?;
        Self::new(x.oct.clone(), x.tet.clone(), remainder)
    }

    pub fn c_oct(&self) -> &BigRational {
        &self.c_oct
    }

    pub fn c_tet(&self) -> &BigRational {
        &self.c_tet
    }

    pub fn remainder(&self) -> &BigDecimal {
        &self.remainder
    }

    pub fn to_exact(&self) -> ExactReal {
        ExactReal::new(
            self.c_oct.clone(),
            self.c_tet.clone(),
            numerics::decimal_to_rational(&self.remainder),
        )
    }

    pub fn evaluate(&self, ctx: &PrecisionContext) -> BigDecimal {
        self.to_exact().evaluate(ctx)
    }

    pub(crate) fn add(&self, other: &ExactVolume) -> ExactVolume {
        ExactVolume {
            c_oct: &self.c_oct + &other.c_oct,
            c_tet: &self.c_tet + &other.c_tet,
            remainder: (&self.remainder + &other.remainder).normalized(),
        }
    }

    pub(crate) fn times(&self, n: u128) -> ExactVolume {
        let factor = BigInt::from(n);
        ExactVolume {
            c_oct: &self.c_oct * BigRational::from_integer(factor.clone()),
            c_tet: &self.c_tet * BigRational::from_integer(factor.clone()),
            remainder: (&self.remainder * BigDecimal::from(factor)).normalized(),
        }
    }
}

impl fmt::Display for ExactVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_exact().fmt(f)
    }
}

fn terminating_decimal(q: &BigRational) -> Option<BigDecimal> {
    let mut den = q.denom().clone();
    let mut scale = 0i64;
    let mut multiplier = BigInt::one();
    for (p, other) in [(2u32, 5u32), (5, 2)] {
        let p = BigInt::from(p);
        while den.is_multiple_of(&p) {
            den /= &p;
            multiplier *= other;
            scale += 1;
        }
    }
    if !den.is_one() {
        return None;
    }
    Some(BigDecimal::new(q.numer() * multiplier, scale).normalized())
}

/// A fully augmented link known only through its volume and augmentation count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseLink {
    name: String,
    volume: ExactVolume,
    augmentations: u64,
    note: String,
}

impl BaseLink {
    pub fn new(
        name: impl Into<String>,
        volume: ExactVolume,
        augmentations: u64,
        note: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',' || c == '*') {
            return Err(Error::InvalidLink {
                name,
                reason: "names must be nonempty and free of whitespace, ',' and '*'".into(),
            });
        }
        if augmentations < 2 {
            return Err(Error::InvalidLink {
                name,
                reason: format!("augmentation count {augmentations} is below the minimum of 2"),
            });
        }
        Ok(Self {
            name,
            volume,
            augmentations,
            note: note.into(),
        })
    }

    /// The fully augmented figure-eight knot: volume 2 v_oct, two augmentations.
    pub fn figure_eight() -> Self {
        Self {
            name: FIGURE_EIGHT.into(),
            volume: ExactVolume::octahedra(BigRational::from_integer(2.into()))
                .expect("positive volume"),
            augmentations: 2,
            note: "fully augmented figure-eight knot; vd = v_oct, modified vd = 2 v_oct".into(),
        }
    }

    /// A hypothetical link with the given modified density, volume stored as
    /// a decimal remainder.
    pub fn synthetic(name: &str, modified_density: &BigDecimal, augmentations: u64) -> Result<Self> {
        if augmentations < 2 {
            return Err(Error::TooFewAugmentations(augmentations));
        }
        let volume = modified_density * BigDecimal::from(augmentations - 1);
        Self::new(
            name,
            ExactVolume::new(BigRational::zero(), BigRational::zero(), volume)?,
            augmentations,
            "synthetic entry",
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn volume(&self) -> &ExactVolume {
        &self.volume
    }

    pub fn augmentations(&self) -> u64 {
        self.augmentations
    }

    pub fn modified_augmentations(&self) -> u64 {
        self.augmentations - 1
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    /// vol / a, exactly.
    pub fn density(&self) -> ExactReal {
        self.volume
            .to_exact()
            .scale(&BigRational::new(BigInt::one(), self.augmentations.into()))
    }

    /// vol / (a - 1), exactly.
    pub fn modified_density(&self) -> ExactReal {
        self.volume.to_exact().scale(&BigRational::new(
            BigInt::one(),
            self.modified_augmentations().into(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// vd < v_oct.
    BelowSpectrum,
    /// vd >= 10 v_tet.
    AtOrAboveUpperBound,
    /// vol < 2 (a - 1) v_oct.
    BelowVolumeBound,
    /// A comparison could not be decided numerically.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub link: String,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning: {}: {}", self.link, self.message)
    }
}

/// Soft checks against the known spectrum bounds. Never fails; synthetic
/// entries outside the bounds only produce warnings.
pub fn validate_entry(link: &BaseLink, ctx: &PrecisionContext) -> Vec<Diagnostic> {
    let a = BigRational::from_integer(link.augmentations.into());
    let vol = link.volume.to_exact();
    let lower = ExactReal::v_oct().scale(&a);
    let upper = ExactReal::v_tet().scale(&(&a * BigRational::from_integer(10.into())));
    let bound = ExactReal::v_oct().scale(&BigRational::from_integer(
        (2 * link.modified_augmentations()).into(),
    ));

    let checks = [
        (
            vol.cmp_exact(&lower, ctx).map(|o| o.is_lt()),
            DiagnosticKind::BelowSpectrum,
            "density is below v_oct",
        ),
        (
            vol.cmp_exact(&upper, ctx).map(|o| o.is_ge()),
            DiagnosticKind::AtOrAboveUpperBound,
            "density is at or above 10 v_tet, which no link attains",
        ),
        (
            vol.cmp_exact(&bound, ctx).map(|o| o.is_lt()),
            DiagnosticKind::BelowVolumeBound,
            "volume is below 2 (a - 1) v_oct",
        ),
    ];
    let mut out = Vec::new();
    for (outcome, kind, message) in checks {
        match outcome {
            Ok(false) => {}
            Ok(true) => out.push(Diagnostic {
                link: link.name.clone(),
                kind,
                message: message.into(),
            }),
            Err(e) => out.push(Diagnostic {
                link: link.name.clone(),
                kind: DiagnosticKind::Undecided,
                message: e.to_string(),
            }),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    entries: BTreeMap<String, BaseLink>,
}

impl Catalog {
    /// A catalog holding only the figure-eight entry.
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(FIGURE_EIGHT.to_string(), BaseLink::figure_eight());
        Self { entries }
    }

    pub fn from_links(links: impl IntoIterator<Item = BaseLink>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for link in links {
            if entries.contains_key(&link.name) {
                return Err(Error::DuplicateName(link.name));
            }
            entries.insert(link.name.clone(), link);
        }
        Ok(Self { entries })
    }

    /// Adds the figure-eight entry unless a link of that name exists.
    pub fn with_builtin(mut self) -> Self {
        self.entries
            .entry(FIGURE_EIGHT.to_string())
            .or_insert_with(BaseLink::figure_eight);
        self
    }

    pub fn get(&self, name: &str) -> Result<&BaseLink> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownLink(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &BaseLink> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> String {
        let file = CatalogFile {
            links: self.iter().map(LinkRecord::from).collect(),
        };
        serde_json::to_string_pretty(&file).expect("catalog serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    links: Vec<LinkRecord>,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkRecord {
    name: String,
    #[serde(default = "zero_string")]
    c_oct: String,
    #[serde(default = "zero_string")]
    c_tet: String,
    #[serde(default = "zero_string")]
    remainder: String,
    a: u64,
    #[serde(default)]
    note: String,
}

impl From<&BaseLink> for LinkRecord {
    fn from(link: &BaseLink) -> Self {
        let ratio = |q: &BigRational| format!("{}/{}", q.numer(), q.denom());
        LinkRecord {
            name: link.name.clone(),
            c_oct: ratio(&link.volume.c_oct),
            c_tet: ratio(&link.volume.c_tet),
            remainder: link.volume.remainder.to_plain_string(),
            a: link.augmentations,
            note: link.note.clone(),
        }
    }
}

impl LinkRecord {
    fn into_link(self) -> Result<BaseLink> {
        let field = |what: &str, text: &str| -> Result<BigRational> {
            crate::numerics::parse_rational_strict(text).map_err(|reason| Error::InvalidLink {
                name: self.name.clone(),
                reason: format!("{what}: {reason}"),
            })
        };
        let c_oct = field("c_oct", &self.c_oct)?;
        let c_tet = field("c_tet", &self.c_tet)?;
        let remainder = BigDecimal::from_str(self.remainder.trim()).map_err(|_| Error::InvalidLink {
            name: self.name.clone(),
            reason: format!("remainder `{}` is not a decimal", self.remainder),
        })?;
        let volume = ExactVolume::new(c_oct, c_tet, remainder).map_err(|e| Error::InvalidLink {
            name: self.name.clone(),
            reason: e.to_string(),
        })?;
        BaseLink::new(self.name, volume, self.a, self.note)
    }
}

/// Parses a catalog document and adds the built-in entry.
pub fn load_catalog(source: &str) -> Result<Catalog> {
    let file: CatalogFile = serde_json::from_str(source).map_err(|e| Error::Parse {
        what: "catalog",
        reason: e.to_string(),
    })?;
    let links = file
        .links
        .into_iter()
        .map(LinkRecord::into_link)
        .collect::<Result<Vec<_>>>()?;
    Ok(Catalog::from_links(links)?.with_builtin())
}
