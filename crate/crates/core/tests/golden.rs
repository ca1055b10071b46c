use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use framelet::coeff::rat;
use framelet::{
    build_boxspline_bank, reduce_bank, verify_tight_bank, BankMode, DirectionMatrix, FilterBank,
    ReduceMode,
};
use num_rational::BigRational;
use num_traits::Zero;

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    fs::read_to_string(path).unwrap()
}

fn matrix(name: &str) -> DirectionMatrix {
    DirectionMatrix::parse(&fixture(name)).unwrap()
}

#[test]
fn banks_match_golden_files() {
    let ex1 = build_boxspline_bank(&matrix("ex1.txt"), BankMode::Combined).unwrap();
    let ex2 = build_boxspline_bank(&matrix("ex2.txt"), BankMode::Combined).unwrap();
    let ex2r = reduce_bank(&ex2, ReduceMode::EqualWeightPairs).unwrap();
    for (bank, name) in [
        (&ex1, "ex1_combined.json"),
        (&ex2, "ex2_combined.json"),
        (&ex2r, "ex2_pairs.json"),
    ] {
        assert_eq!(bank.to_json().unwrap() + "\n", fixture(name), "{name}");
        let parsed = FilterBank::from_json(&fixture(name)).unwrap();
        assert_eq!(&parsed, bank);
        assert!(verify_tight_bank(&parsed).unwrap().pass, "{name}");
    }
}

/// Buckets the two-tap filters by (parity of lower endpoint, displacement)
/// directly from the tap lists and sums squared weights per bucket.
fn class_energies(bank: &FilterBank) -> HashMap<(Vec<i64>, Vec<i64>), BigRational> {
    let mut out: HashMap<_, BigRational> = HashMap::new();
    for f in bank.highpass() {
        let taps: Vec<_> = f.taps().collect();
        assert_eq!(taps.len(), 2);
        let (x, cx) = taps[0];
        let (y, cy) = taps[1];
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        assert_eq!(cx.square(), cy.square());
        let parity = lo.entries().iter().map(|v| v.rem_euclid(2)).collect();
        let disp = hi
            .entries()
            .iter()
            .zip(lo.entries())
            .map(|(a, b)| a - b)
            .collect();
        *out.entry((parity, disp)).or_insert_with(BigRational::zero) += cx.square();
    }
    out
}

#[test]
fn full_reduction_keeps_one_filter_per_class() {
    let ex2 = build_boxspline_bank(&matrix("ex2.txt"), BankMode::Combined).unwrap();
    let classes = class_energies(&ex2);
    let full = reduce_bank(&ex2, ReduceMode::FullClass).unwrap();
    assert_eq!(full.highpass().len(), classes.len());
    assert_eq!(classes.len(), 30);
    assert_eq!(class_energies(&full), classes);
    assert!(verify_tight_bank(&full).unwrap().pass);
}

#[test]
fn example_two_energy_by_class() {
    let ex2 = build_boxspline_bank(&matrix("ex2.txt"), BankMode::Combined).unwrap();
    let total: BigRational = class_energies(&ex2).values().sum();
    // 4/64 + 4*2/64 + 16*2/256 + 6/256 + 6/64
    assert_eq!(
        total,
        rat(4, 64) + rat(8, 64) + rat(32, 256) + rat(6, 256) + rat(6, 64)
    );
}
