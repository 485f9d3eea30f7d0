//! Acceptance criteria, one line of output each.
//!
//! Runs without the libtest harness so every criterion reports PASS or FAIL
//! even when an earlier one fails. The process exits nonzero on any failure.

mod support;

use std::cmp::Ordering;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::time::{Duration, Instant};

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fal_spectrum::approx::{self, ApproxOptions};
use fal_spectrum::bounds::{self, ScanOptions, WindowClass};
use fal_spectrum::calculus::{self, Composition};
use fal_spectrum::catalog::{BaseLink, Catalog, ExactVolume};
use fal_spectrum::numerics::{self, ExactReal, PrecisionContext};

use support::oracle;

type Outcome = Result<String, String>;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn dec(s: &str) -> BigDecimal {
    BigDecimal::from_str(s).unwrap()
}

fn voct(p: i64, d: i64) -> ExactReal {
    ExactReal::v_oct().scale(&q(p, d))
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn constants() -> Outcome {
    let start = Instant::now();
    let c = ctx();
    let oct = numerics::v_oct(&c);
    let tet = numerics::v_tet(&c);
    let elapsed = start.elapsed();

    let oct_ref = oracle::lobachevsky_quadrature(1, 4, 30) * BigDecimal::from(8);
    let tet_ref = oracle::lobachevsky_quadrature(1, 6, 30) * BigDecimal::from(2);
    let tolerance = dec("1e-25");
    ensure((&oct - &oct_ref).abs() < tolerance, || format!("v_oct {oct} vs oracle {oct_ref}"))?;
    ensure((&tet - &tet_ref).abs() < tolerance, || format!("v_tet {tet} vs oracle {tet_ref}"))?;
    let oct_text = numerics::format_decimal(&oct, 30);
    let tet_text = numerics::format_decimal(&tet, 30);
    ensure(oct_text.starts_with("3.6638623767"), || oct_text.clone())?;
    ensure(tet_text.starts_with("1.0149416064"), || tet_text.clone())?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("v_oct={oct_text} v_tet={tet_text} in {elapsed:?}"))
}

fn identities() -> Outcome {
    let c = ctx();
    let l41 = BaseLink::figure_eight();
    let one = Composition::single(l41.clone());
    ensure(calculus::vd(&one, &c).exact() == ExactReal::v_oct(), || "vd(L41) != v_oct".into())?;
    ensure(calculus::vd_mod(&one, &c).exact() == voct(2, 1), || "vd~(L41) != 2 v_oct".into())?;
    for k in [1u64, 10, 1000] {
        let sum = calculus::self_sum(&l41, k).map_err(|e| e.to_string())?;
        ensure(calculus::vd_mod(&sum, &c).exact() == l41.modified_density(), || {
            format!("vd~ changed at k = {k}")
        })?;
        let expected = u128::from(k) * u128::from(l41.modified_augmentations()) + 1;
        ensure(calculus::augmentations(&sum) == expected, || format!("a wrong at k = {k}"))?;
    }
    Ok("vd, vd~, self-sum invariance and a(L^(k)) hold with zero tolerance".into())
}

fn random_link(rng: &mut ChaCha8Rng, id: usize) -> BaseLink {
    loop {
        let d = rng.gen_range(1..=12i64);
        let oct = q(rng.gen_range(0..=40), d);
        let tet = q(rng.gen_range(0..=40), d);
        let remainder = if rng.gen_bool(0.5) {
            BigDecimal::new(BigInt::from(rng.gen_range(0..10_000_000u64)), rng.gen_range(0..=9))
        } else {
            BigDecimal::zero()
        };
        let a = rng.gen_range(2..=12u64);
        if let Ok(volume) = ExactVolume::new(oct, tet, remainder) {
            return BaseLink::new(format!("R{id}"), volume, a, "").unwrap();
        }
    }
}

fn random_composition(rng: &mut ChaCha8Rng) -> Composition {
    let parts = rng.gen_range(1..=6);
    Composition::new((0..parts).map(|i| (random_link(rng, i), rng.gen_range(1..=20u64)))).unwrap()
}

fn weighted_average() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tolerance = dec("1e-25");
    let mut worst = BigDecimal::zero();
    for i in 0..500 {
        let composition = random_composition(&mut rng);
        let direct = calculus::vd_mod(&composition, &c);
        ensure(direct.exact() == calculus::weighted_average_vd_mod(&composition), || {
            format!("sample {i}: exact mismatch for {composition}")
        })?;
        let decimal = calculus::weighted_average_vd_mod_decimal(&composition, &c);
        let gap = (direct.evaluated() - &decimal).abs();
        ensure(gap < tolerance, || format!("sample {i}: decimal gap {gap}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("500 compositions, exact equality, worst decimal gap {worst}"))
}

fn replication_gap() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let composition = random_composition(&mut rng);
        let m = rng.gen_range(1..=1_000_000u64);
        let replicated = composition.replicate(m).map_err(|e| e.to_string())?;
        let observed = calculus::vd_mod(&replicated, &c).exact() - calculus::vd(&replicated, &c).exact();
        let atilde = BigInt::from(calculus::modified_augmentations(&composition));
        let expected = calculus::vd_mod(&composition, &c)
            .exact()
            .scale(&BigRational::new(BigInt::one(), atilde * m + 1u32));
        ensure(observed == expected, || format!("sample {i}: gap mismatch at m = {m}"))?;
        ensure(calculus::replication_gap(&composition, m).unwrap() == expected, || {
            format!("sample {i}: replication_gap disagrees")
        })?;
    }
    Ok("100 (c, m) pairs with m <= 1e6 match vd~/(m ã + 1) exactly".into())
}

fn convergents() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut compared = 0;
    for i in 0..50 {
        let r = BigRational::new(
            BigInt::from(rng.gen_range(1..100_000_000_000u64)),
            BigInt::from(1_000_000_000u64),
        );
        let emitted: Vec<(u64, u64)> = approx::best_rational_approximations(&r, 1_000_000_000)
            .into_iter()
            .filter(|c| c.denominator <= 50)
            .map(|c| (c.numerator, c.denominator))
            .collect();
        let brute = oracle::brute_force_best_approximations(&r, 50);
        ensure(emitted == brute, || format!("sample {i} r = {r}: {emitted:?} vs {brute:?}"))?;
        compared += emitted.len();
    }
    Ok(format!("50 targets, {compared} convergents match the brute-force search"))
}

fn near_upper_link() -> BaseLink {
    let wide = PrecisionContext::new(80).unwrap();
    let ten_tet = numerics::v_tet(&wide) * BigDecimal::from(10);
    BaseLink::synthetic("L2", &(ten_tet - dec("1e-6")), 6).unwrap()
}

fn sweep_targets() -> Vec<ExactReal> {
    let lo = voct(2, 1) + ExactReal::from_rational(q(1, 100));
    let hi = ExactReal::v_tet().scale(&q(10, 1)) - ExactReal::from_rational(q(1, 100));
    (0..100).map(|i| &lo + &(&hi - &lo).scale(&q(i, 99))).collect()
}

/// The sweep's recipes, one line per target.
fn run_sweep() -> Result<Vec<String>, String> {
    let c = ctx();
    let first = BaseLink::figure_eight();
    let second = near_upper_link();
    let catalog = Catalog::from_links([second.clone()]).unwrap().with_builtin();
    let eps = dec("1e-6");
    let eps_exact = ExactReal::from_decimal(&eps);
    let mut lines = Vec::new();
    for (i, target) in sweep_targets().iter().enumerate() {
        let recipe = approx::approximate_vd(target, &first, &second, &eps, &c, &ApproxOptions::default())
            .map_err(|e| format!("target {i}: {e}"))?;
        let parsed = calculus::parse_recipe(&recipe.recipe_string(), &catalog).map_err(|e| e.to_string())?;
        let vd = calculus::vd(&parsed, &c).exact();
        ensure(vd == recipe.achieved_vd.exact(), || format!("target {i}: calculus disagrees"))?;
        let error = &vd - target;
        let inside = error.cmp_exact(&eps_exact, &c).map_err(|e| e.to_string())? == Ordering::Less
            && (-error).cmp_exact(&eps_exact, &c).map_err(|e| e.to_string())? == Ordering::Less;
        ensure(inside, || format!("target {i}: error {} not below 1e-6", recipe.error_decimal))?;
        lines.push(format!(
            "{} k={} l={} m={} err={}",
            recipe.recipe_string(),
            recipe.k,
            recipe.l,
            recipe.m,
            numerics::format_decimal(&recipe.error_decimal, 30)
        ));
    }
    Ok(lines)
}

fn density_sweep() -> Outcome {
    let start = Instant::now();
    let lines = run_sweep()?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("{} targets within 1e-6, re-verified, in {elapsed:?}", lines.len()))
}

fn certificates() -> Outcome {
    let c = ctx();
    for (d, n) in [(voct(1, 1), 2u128), (voct(3, 2), 4), (voct(19, 10), 20)] {
        let cert = bounds::max_augmentations_below(&d, &c).map_err(|e| e.to_string())?;
        ensure(cert.max_augmentations == n, || format!("certify({d}) = {}", cert.max_augmentations))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let oct = numerics::v_oct(&PrecisionContext::new(40).unwrap());
    for i in 0..1000 {
        let raw = rng.gen_range(0..1_000_000_000i64);
        // alternate symbolic and decimal thresholds
        let d = if i % 2 == 0 {
            &ExactReal::v_oct() + &ExactReal::v_oct().scale(&q(raw, 1_000_000_000))
        } else {
            let u = BigDecimal::new(raw.into(), 9);
            ExactReal::from_decimal(&(&oct * (BigDecimal::one() + u)).with_scale(35))
        };
        let class = bounds::classify(&d, &c).map_err(|e| e.to_string())?.class;
        if class != WindowClass::DiscreteWindow {
            continue;
        }
        let cert = bounds::max_augmentations_below(&d, &c).map_err(|e| format!("sample {i}: {e}"))?;
        let n = cert.max_augmentations;
        let sound = bounds::vd_bound(n + 1).unwrap().cmp_exact(&d, &c).unwrap() == Ordering::Greater;
        let tight = bounds::vd_bound(n).unwrap().cmp_exact(&d, &c).unwrap() != Ordering::Greater;
        ensure(sound && tight, || format!("sample {i}: n = {n} sound={sound} tight={tight}"))?;
    }
    Ok("n = 2, 4, 20; 1000 sampled thresholds sound and tight".into())
}

fn classification() -> Outcome {
    let c = ctx();
    let cases = [
        (ExactReal::v_oct(), WindowClass::DiscreteWindow),
        (voct(2, 1), WindowClass::DenseWindow),
        (ExactReal::v_tet().scale(&q(10, 1)), WindowClass::AtOrAboveUpperBound),
        (ExactReal::from_integer(9), WindowClass::DenseWindow),
        (ExactReal::v_oct() - ExactReal::from_rational(q(1, 10i64.pow(15))), WindowClass::BelowSpectrum),
        (voct(2, 1) - ExactReal::from_rational(q(1, 10i64.pow(15))), WindowClass::DiscreteWindow),
        (
            ExactReal::v_tet().scale(&q(10, 1)) - ExactReal::from_rational(q(1, 10i64.pow(15))),
            WindowClass::DenseWindow,
        ),
    ];
    for (d, expected) in cases {
        let got = bounds::classify(&d, &c).map_err(|e| e.to_string())?.class;
        ensure(got == expected, || format!("{d}: {got} instead of {expected}"))?;
    }
    Ok("v_oct, 2 v_oct, 10 v_tet land in their half-open windows".into())
}

fn scan_csv() -> Result<String, String> {
    let c = ctx();
    let rows = bounds::spectrum_scan(&Catalog::builtin(), 50, &c, &ScanOptions::default())
        .map_err(|e| e.to_string())?;
    let mut buffer = Vec::new();
    bounds::write_scan_csv(&rows, &mut buffer, &c).map_err(|e| e.to_string())?;
    String::from_utf8(buffer).map_err(|e| e.to_string())
}

fn scan() -> Outcome {
    let c = ctx();
    let rows = bounds::spectrum_scan(&Catalog::builtin(), 50, &c, &ScanOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(rows.len() == 50, || format!("{} rows", rows.len()))?;
    let two_oct = voct(2, 1);
    for (i, row) in rows.iter().enumerate() {
        let m = i as i64 + 1;
        ensure(row.vd.exact() == voct(2 * m, m + 1), || format!("row {m}: vd = {}", row.vd.exact()))?;
        ensure(row.vd.exact().cmp_exact(&two_oct, &c).unwrap() == Ordering::Less, || {
            format!("row {m} not below 2 v_oct")
        })?;
        if i > 0 {
            let gap = row.vd.exact() - rows[i - 1].vd.exact();
            // vd_M - vd_(M-1) = 2 v_oct / (M (M + 1))
            ensure(gap == voct(2, m * (m + 1)), || format!("gap ending at row {m}: {gap}"))?;
            ensure(gap.signum(&c).unwrap() == Ordering::Greater, || "not increasing".into())?;
        }
    }
    Ok("50 rows, vd = 2 v_oct M/(M+1), vd_M - vd_(M-1) = 2 v_oct/(M(M+1))".into())
}

fn determinism() -> Outcome {
    let sweep = (run_sweep()?, run_sweep()?);
    ensure(sweep.0 == sweep.1, || "sweep output differs between runs".into())?;
    let scan = (scan_csv()?, scan_csv()?);
    ensure(scan.0 == scan.1, || "scan output differs between runs".into())?;
    Ok(format!(
        "sweep ({} bytes) and scan ({} bytes) identical across runs",
        sweep.0.join("\n").len(),
        scan.0.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("constants", constants),
        ("exact identities", identities),
        ("weighted average", weighted_average),
        ("replication gap", replication_gap),
        ("convergent oracle", convergents),
        ("density sweep", density_sweep),
        ("certificates", certificates),
        ("classification", classification),
        ("scan", scan),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let message = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {message}"))
            });
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
