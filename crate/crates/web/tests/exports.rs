use fal_spectrum_web::{approximate, classify, scan};
use serde_json::Value;

fn parse(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn approximate_hits_the_target() {
    let out = parse(&approximate("8", "1e-6", "vdmod", 30).unwrap());
    let error: f64 = out["error"].as_str().unwrap().parse().unwrap();
    assert!(error < 1e-6);
    assert!(out["recipe"].as_str().unwrap().contains("L41*"));

    let vd = parse(&approximate("9", "1e-4", "vd", 30).unwrap());
    let achieved: f64 = vd["vd"].as_str().unwrap().parse().unwrap();
    assert!((achieved - 9.0).abs() < 1e-4);
}

#[test]
fn approximate_reports_bad_input() {
    assert!(approximate("3", "1e-3", "vdmod", 30).is_err());
    assert!(approximate("8", "abc", "vdmod", 30).is_err());
    assert!(approximate("8", "1e-3", "volume", 30).is_err());
    assert!(approximate("8", "1e-3", "vd", 5).is_err());
}

#[test]
fn classify_reports_windows_and_certificates() {
    let dense = parse(&classify("9.0", 30).unwrap());
    assert_eq!(dense["class"], "DenseWindow");
    assert_eq!(dense["certificate"], Value::Null);
    assert_eq!(dense["boundaries"].as_array().unwrap().len(), 3);

    let low = parse(&classify("19/10*voct", 30).unwrap());
    assert_eq!(low["certificate"]["max_augmentations"], "20");
    assert_eq!(parse(&classify("1*voct", 30).unwrap())["near_boundary"], "v_oct");
}

#[test]
fn scan_rows_are_sorted() {
    let rows = parse(&scan(12, 30).unwrap());
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    let vd: Vec<f64> = rows
        .iter()
        .map(|r| r["vd_decimal"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!(vd.windows(2).all(|w| w[0] <= w[1]));
    assert!(scan(0, 30).is_err());
}
