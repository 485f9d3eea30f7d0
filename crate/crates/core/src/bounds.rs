//! Lower bounds, finiteness certificates, window classification and scans.
//!
//! Cutting a link complement along its reflection surface leaves two pieces
//! with Euler characteristic `1 - a`, so the volume bound for manifolds with
//! geodesic boundary gives
//!
//! ```text
//! vol(L) >= 2 (a - 1) v_oct        vd(L) >= 2 v_oct (a - 1) / a
//! ```
//!
//! The density bound increases to `2 v_oct`, so below `2 v_oct` only finitely
//! many augmentation counts are possible.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::calculus::{self, Composition, DensityValue};
use crate::catalog::{BaseLink, Catalog};
use crate::error::{Error, Result};
use crate::numerics::{self, fixed, ExactReal, PrecisionContext};

fn check_augmentations(a: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::TooFewAugmentations(a));
    }
    Ok(())
}

/// χ(N_L) = 1 - a.
pub fn euler_characteristic(a: u64) -> Result<i128> {
    check_augmentations(a)?;
    Ok(1 - i128::from(a))
}

/// 2 (a - 1) v_oct, exactly.
pub fn miyamoto_volume_bound(a: u64) -> Result<ExactReal> {
    check_augmentations(a)?;
    Ok(ExactReal::v_oct().scale(&BigRational::from_integer(BigInt::from(a - 1) * 2)))
}

pub fn miyamoto_volume_lower_bound(a: u64, ctx: &PrecisionContext) -> Result<BigDecimal> {
    Ok(miyamoto_volume_bound(a)?.evaluate(ctx))
}

/// 2 v_oct (a - 1) / a, exactly. Accepts `a` beyond `u64` for certificates
/// near `2 v_oct`.
pub fn vd_bound(a: u128) -> Result<ExactReal> {
    if a < 2 {
        return Err(Error::TooFewAugmentations(a.min(u128::from(u64::MAX)) as u64));
    }
    Ok(ExactReal::v_oct().scale(&BigRational::new(
        BigInt::from(a - 1) * 2,
        BigInt::from(a),
    )))
}

pub fn vd_lower_bound(a: u64, ctx: &PrecisionContext) -> Result<BigDecimal> {
    Ok(vd_bound(a.into())?.evaluate(ctx))
}

/// The three points that split the density line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Boundary {
    VOct,
    TwoVOct,
    TenVTet,
}

impl Boundary {
    pub const ALL: [Boundary; 3] = [Boundary::VOct, Boundary::TwoVOct, Boundary::TenVTet];

    pub fn value(&self) -> ExactReal {
        match self {
            Boundary::VOct => ExactReal::v_oct(),
            Boundary::TwoVOct => ExactReal::v_oct().scale(&BigRational::from_integer(2.into())),
            Boundary::TenVTet => ExactReal::v_tet().scale(&BigRational::from_integer(10.into())),
        }
    }

    /// The class that contains the boundary point itself.
    fn class_at(&self) -> WindowClass {
        match self {
            Boundary::VOct => WindowClass::DiscreteWindow,
            Boundary::TwoVOct => WindowClass::DenseWindow,
            Boundary::TenVTet => WindowClass::AtOrAboveUpperBound,
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::VOct => "v_oct",
            Boundary::TwoVOct => "2*v_oct",
            Boundary::TenVTet => "10*v_tet",
        })
    }
}

/// Half-open windows `(-inf, v_oct)`, `[v_oct, 2 v_oct)`, `[2 v_oct, 10 v_tet)`
/// and `[10 v_tet, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WindowClass {
    BelowSpectrum,
    DiscreteWindow,
    DenseWindow,
    AtOrAboveUpperBound,
}

impl fmt::Display for WindowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: WindowClass,
    /// Set when the input lies on a boundary, or for decimal inputs within
    /// the context tolerance of one.
    pub near_boundary: Option<Boundary>,
}

/// Places `d` in its window.
///
/// Inputs involving `v_oct` or `v_tet` are compared symbolically. Pure
/// decimals within the context tolerance of a boundary are treated as lying
/// on it.
pub fn classify(d: &ExactReal, ctx: &PrecisionContext) -> Result<Classification> {
    if d.is_rational() {
        let tolerance = numerics::decimal_to_rational(&ctx.tolerance());
        for boundary in Boundary::ALL {
            let gap = &boundary.value() - d;
            let low = ExactReal::from_rational(-tolerance.clone());
            let high = ExactReal::from_rational(tolerance.clone());
            if gap.cmp_exact(&low, ctx)? != Ordering::Less
                && gap.cmp_exact(&high, ctx)? != Ordering::Greater
            {
                return Ok(Classification {
                    class: boundary.class_at(),
                    near_boundary: Some(boundary),
                });
            }
        }
    }
    let mut class = WindowClass::BelowSpectrum;
    let mut near_boundary = None;
    for boundary in Boundary::ALL {
        match d.cmp_exact(&boundary.value(), ctx)? {
            Ordering::Less => break,
            Ordering::Equal => {
                class = boundary.class_at();
                near_boundary = Some(boundary);
                break;
            }
            Ordering::Greater => class = boundary.class_at(),
        }
    }
    Ok(Classification {
        class,
        near_boundary,
    })
}

/// Every link with vd ≤ `threshold` has at most `max_augmentations`
/// augmentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub threshold: ExactReal,
    pub threshold_decimal: BigDecimal,
    pub max_augmentations: u128,
    pub statement: String,
    pub near_boundary: Option<Boundary>,
}

const MAX_ESTIMATE_SCALE: u32 = 2000;

/// Largest `a` with 2 v_oct (a - 1) / a ≤ `d`, that is `floor(2 v_oct / (2 v_oct - d))`.
fn largest_count(d: &ExactReal, ctx: &PrecisionContext) -> Result<u128> {
    let two_oct = Boundary::TwoVOct.value();
    let slack = &two_oct - d;
    let estimate = match two_oct.ratio_to(&slack) {
        Some(q) => q.floor().to_integer(),
        None => {
            let mut scale = ctx.working_scale();
            loop {
                let raw = slack.eval_raw(scale);
                if raw.abs() >= fixed::pow10(scale / 2) {
                    break two_oct.eval_raw(scale).div_floor(&raw);
                }
                if scale >= MAX_ESTIMATE_SCALE {
                    return Err(Error::Undecided(slack.to_string(), scale));
                }
                scale *= 2;
            }
        }
    };
    let mut n = estimate
        .max(BigInt::from(2))
        .to_u128()
        .ok_or(Error::Overflow("augmentation bound"))?;
    let fits = |a: u128| -> Result<bool> {
        Ok(vd_bound(a)?.cmp_exact(d, ctx)? != Ordering::Greater)
    };
    while n > 2 && !fits(n)? {
        n -= 1;
    }
    while fits(n.checked_add(1).ok_or(Error::Overflow("augmentation bound"))?)? {
        n += 1;
    }
    Ok(n)
}

/// The finiteness certificate for a threshold in `[v_oct, 2 v_oct)`.
pub fn max_augmentations_below(d: &ExactReal, ctx: &PrecisionContext) -> Result<Certificate> {
    let classification = classify(d, ctx)?;
    let shown = numerics::format_decimal(&d.evaluate(ctx), ctx.digits());
    match classification.class {
        WindowClass::BelowSpectrum => return Err(Error::BelowSpectrum(shown)),
        WindowClass::DenseWindow | WindowClass::AtOrAboveUpperBound => {
            return Err(Error::NoFiniteCertificate(shown))
        }
        WindowClass::DiscreteWindow => {}
    }
    let effective = match classification.near_boundary {
        Some(boundary) => boundary.value(),
        None => d.clone(),
    };
    let n = largest_count(&effective, ctx)?;
    Ok(Certificate {
        threshold: d.clone(),
        statement: format!("every FAL with vd(L) <= {shown} has a(L) <= {n}"),
        threshold_decimal: d.evaluate(ctx),
        max_augmentations: n,
        near_boundary: classification.near_boundary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub row_cap: u128,
}

impl ScanOptions {
    pub const DEFAULT_ROW_CAP: u128 = 1_000_000;
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            row_cap: Self::DEFAULT_ROW_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub composition: Composition,
    pub a: u128,
    pub atilde: u128,
    pub vd: DensityValue,
    pub vd_mod: DensityValue,
}

/// Number of nonempty multisets with Σ k_i w_i ≤ budget, counted by dynamic
/// programming over totals.
fn count_by_table(weights: &[u64], budget: usize) -> u128 {
    let mut ways = vec![0u128; budget + 1];
    ways[0] = 1;
    for &w in weights {
        let w = w as usize;
        for t in w..=budget {
            ways[t] = ways[t].saturating_add(ways[t - w]);
        }
    }
    ways.iter().fold(0u128, |acc, &x| acc.saturating_add(x)) - 1
}

/// The same count by enumeration, giving up once it passes `limit`.
fn count_by_walk(weights: &[u64], budget: u64, limit: u128) -> u128 {
    fn walk(weights: &[u64], budget: u64, limit: u128, total: &mut u128) {
        let Some((&w, rest)) = weights.split_first() else {
            *total += 1;
            return;
        };
        if rest.is_empty() {
            *total += u128::from(budget / w) + 1;
            return;
        }
        let mut used = 0;
        while used <= budget && *total <= limit {
            walk(rest, budget - used, limit, total);
            used += w;
        }
    }
    let mut total = 0;
    walk(weights, budget, limit, &mut total);
    total.saturating_sub(1)
}

const TABLE_LIMIT: u64 = 10_000_000;

/// Estimated row count of a scan.
pub fn scan_size(catalog: &Catalog, budget: u64, options: &ScanOptions) -> u128 {
    let mut weights: Vec<u64> = catalog.iter().map(BaseLink::modified_augmentations).collect();
    let g = weights.iter().fold(0u64, |g, &w| g.gcd(&w));
    if g == 0 {
        return 0;
    }
    weights.iter_mut().for_each(|w| *w /= g);
    let budget = budget / g;
    if budget <= TABLE_LIMIT {
        count_by_table(&weights, budget as usize)
    } else {
        count_by_walk(&weights, budget, options.row_cap)
    }
}

/// Compares by the raw evaluation, falling back to exact comparison when the
/// two values are within rounding of each other, and to the recipe text on
/// exact ties.
fn compare_rows(
    x: &(BigInt, ScanRow),
    y: &(BigInt, ScanRow),
    ctx: &PrecisionContext,
) -> Ordering {
    let by_text = || x.1.composition.recipe_string().cmp(&y.1.composition.recipe_string());
    if (&x.0 - &y.0).abs() > BigInt::from(2) {
        return x.0.cmp(&y.0);
    }
    match x.1.vd.exact().cmp_exact(&y.1.vd.exact(), ctx) {
        Ok(Ordering::Equal) | Err(_) => by_text(),
        Ok(order) => order,
    }
}

/// Every multiset of catalog entries with Σ k_i ã_i ≤ `budget`, sorted by vd.
pub fn spectrum_scan(
    catalog: &Catalog,
    budget: u64,
    ctx: &PrecisionContext,
    options: &ScanOptions,
) -> Result<Vec<ScanRow>> {
    if budget == 0 {
        return Err(Error::NonPositive("scan budget"));
    }
    let estimate = scan_size(catalog, budget, options);
    if estimate > options.row_cap {
        return Err(Error::ScanTooLarge {
            estimate,
            cap: options.row_cap,
        });
    }
    let links: Vec<&BaseLink> = catalog.iter().collect();
    let mut chosen: Vec<(BaseLink, u64)> = Vec::new();
    let mut compositions = Vec::new();
    enumerate(&links, budget, &mut chosen, &mut compositions)?;

    let scale = ctx.working_scale();
    let mut rows: Vec<(BigInt, ScanRow)> = compositions
        .into_iter()
        .map(|composition| {
            let vd = calculus::vd(&composition, ctx);
            let key = vd.exact().eval_raw(scale);
            let row = ScanRow {
                a: calculus::augmentations(&composition),
                atilde: calculus::modified_augmentations(&composition),
                vd_mod: calculus::vd_mod(&composition, ctx),
                vd,
                composition,
            };
            (key, row)
        })
        .collect();
    rows.sort_by(|x, y| compare_rows(x, y, ctx));
    Ok(rows.into_iter().map(|(_, row)| row).collect())
}

fn enumerate(
    links: &[&BaseLink],
    budget: u64,
    chosen: &mut Vec<(BaseLink, u64)>,
    out: &mut Vec<Composition>,
) -> Result<()> {
    let Some((link, rest)) = links.split_first() else {
        if !chosen.is_empty() {
            out.push(Composition::new(chosen.iter().cloned())?);
        }
        return Ok(());
    };
    let w = link.modified_augmentations();
    enumerate(rest, budget, chosen, out)?;
    let mut k = 1;
    while k * w <= budget {
        chosen.push(((*link).clone(), k));
        enumerate(rest, budget - k * w, chosen, out)?;
        chosen.pop();
        k += 1;
    }
    Ok(())
}

pub const SCAN_COLUMNS: [&str; 7] = [
    "recipe",
    "a",
    "atilde",
    "vd_exact",
    "vd_decimal",
    "vdmod_exact",
    "vdmod_decimal",
];

impl ScanRow {
    /// Cells in [`SCAN_COLUMNS`] order.
    pub fn cells(&self, digits: u32) -> [String; 7] {
        [
            self.composition.recipe_string(),
            self.a.to_string(),
            self.atilde.to_string(),
            self.vd.exact().to_string(),
            numerics::format_decimal(self.vd.evaluated(), digits),
            self.vd_mod.exact().to_string(),
            numerics::format_decimal(self.vd_mod.evaluated(), digits),
        ]
    }
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], writer: W, ctx: &PrecisionContext) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(SCAN_COLUMNS)?;
    for row in rows {
        out.write_record(row.cells(ctx.digits()))?;
    }
    out.flush()?;
    Ok(())
}
