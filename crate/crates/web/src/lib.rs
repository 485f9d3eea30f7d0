//! WebAssembly bindings for the browser demo.
//!
//! Each export takes plain strings, returns a JSON document and throws the
//! error message as a string on failure. The same functions are callable
//! from native Rust, which is how they are tested.

use std::str::FromStr;

use bigdecimal::BigDecimal;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use fal_spectrum::approx::{self, ApproxOptions, DensityMode};
use fal_spectrum::bounds::{self, Boundary, ScanOptions};
use fal_spectrum::catalog::{self, Catalog};
use fal_spectrum::numerics::{self, ExactReal, PrecisionContext};

/// Link `T` has 50 v_tet of volume over 6 augmentations, so its modified
/// density is 10 v_tet and together with L41 it spans the whole dense window.
const DEMO_CATALOG: &str =
    r#"{"links":[{"name":"T","c_tet":"50","a":6,"note":"modified density 10 v_tet"}]}"#;

/// Scans larger than this are refused so the page stays responsive.
const MAX_SCAN_ROWS: u128 = 20_000;

type Outcome = Result<String, String>;

fn fail(e: impl ToString) -> String {
    e.to_string()
}

fn context(digits: u32) -> Result<PrecisionContext, String> {
    PrecisionContext::new(digits).map_err(fail)
}

fn demo_catalog() -> Catalog {
    catalog::load_catalog(DEMO_CATALOG).expect("demo catalog is valid")
}

fn real(text: &str) -> Result<ExactReal, String> {
    ExactReal::from_str(text.trim()).map_err(fail)
}

fn show(x: &ExactReal, ctx: &PrecisionContext) -> String {
    numerics::format_decimal(&x.evaluate(ctx), ctx.digits())
}

fn boundary(b: Option<Boundary>) -> Value {
    b.map_or(Value::Null, |b| Value::String(b.to_string()))
}

/// Finds a belted sum of L41 and T whose density is within `eps` of `target`.
/// `mode` is `vd` or `vdmod`.
#[wasm_bindgen]
pub fn approximate(target: &str, eps: &str, mode: &str, digits: u32) -> Outcome {
    let ctx = context(digits)?;
    let target = real(target)?;
    let eps = BigDecimal::from_str(eps.trim()).map_err(|e| format!("eps: {e}"))?;
    let mode = DensityMode::from_str(mode).map_err(fail)?;
    let catalog = demo_catalog();
    let recipe = approx::approximate(
        mode,
        &target,
        catalog.get("L41").map_err(fail)?,
        catalog.get("T").map_err(fail)?,
        &eps,
        &ctx,
        &ApproxOptions::default(),
    )
    .map_err(fail)?;
    let digits = ctx.digits();
    Ok(json!({
        "mode": recipe.mode.to_string(),
        "k": recipe.k,
        "l": recipe.l,
        "m": recipe.m,
        "target": show(&recipe.target, &ctx),
        "vd_exact": recipe.achieved_vd.exact().to_string(),
        "vd": numerics::format_decimal(recipe.achieved_vd.evaluated(), digits),
        "vdmod_exact": recipe.achieved_vd_mod.exact().to_string(),
        "vdmod": numerics::format_decimal(recipe.achieved_vd_mod.evaluated(), digits),
        "error": numerics::format_decimal(&recipe.error_decimal, digits),
        "recipe": recipe.recipe_string(),
    })
    .to_string())
}

/// Places a density on the line and, below 2 v_oct, bounds the augmentation
/// count of every FAL at or below it.
#[wasm_bindgen]
pub fn classify(density: &str, digits: u32) -> Outcome {
    let ctx = context(digits)?;
    let d = real(density)?;
    let classification = bounds::classify(&d, &ctx).map_err(fail)?;
    let certificate = match bounds::max_augmentations_below(&d, &ctx) {
        Ok(c) => json!({
            "max_augmentations": c.max_augmentations.to_string(),
            "statement": c.statement,
        }),
        Err(_) => Value::Null,
    };
    Ok(json!({
        "density": show(&d, &ctx),
        "class": classification.class.to_string(),
        "near_boundary": boundary(classification.near_boundary),
        "certificate": certificate,
        "boundaries": Boundary::ALL
            .iter()
            .map(|b| json!({"name": b.to_string(), "value": show(&b.value(), &ctx)}))
            .collect::<Vec<_>>(),
    })
    .to_string())
}

/// Lists every belted sum of L41 and T with modified augmentation count at
/// most `budget`, sorted by vd.
#[wasm_bindgen]
pub fn scan(budget: u32, digits: u32) -> Outcome {
    let ctx = context(digits)?;
    let options = ScanOptions {
        row_cap: MAX_SCAN_ROWS,
    };
    let rows = bounds::spectrum_scan(&demo_catalog(), u64::from(budget), &ctx, &options)
        .map_err(fail)?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let cells = r.cells(ctx.digits());
            Value::Object(
                bounds::SCAN_COLUMNS
                    .iter()
                    .zip(cells)
                    .map(|(k, v)| (k.to_string(), Value::String(v)))
                    .collect(),
            )
        })
        .collect();
    Ok(Value::Array(rows).to_string())
}
