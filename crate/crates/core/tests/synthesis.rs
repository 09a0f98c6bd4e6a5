//! Synthesis end to end: oracles go in, terms over the target basis come out, and the terms agree
//! with the oracles on every small structure of the class plus random larger ones.

use relalg::oracle::Oracle;
use relalg::synth::{enumerate_types, estimate_radius, synthesize, Mode, ValidationBounds};
use relalg::terms::parse_term;
use relalg::Error;

const FORWARD_CATALOG: [&str; 10] = [
    "dom(f)",
    "~g ; f",
    "f ; g",
    "f |> g",
    "f & g",
    "f <+ g",
    "(f <+ g) <+ (f ; g)",
    "f \\ g",
    "dom(f) ; g",
    "~(f ; g)",
];

fn fg() -> Vec<String> {
    vec!["f".into(), "g".into()]
}

fn op(s: &str) -> Oracle {
    Oracle::parse(s).unwrap()
}

fn radius_of(text: &str, mode: Mode, max_m: usize) -> usize {
    let bounds = ValidationBounds::new(mode.class());
    let est = estimate_radius(&op(text), &fg(), mode, max_m, &bounds, 7).unwrap();
    let m = est.radius.unwrap_or_else(|| panic!("{text}: {:?}", est.attempts));
    assert!(est.result.unwrap().term.is_over(mode.basis()), "{text}");
    m
}

#[test]
fn forward_catalog_validates_within_radius_two() {
    let radii: Vec<usize> = FORWARD_CATALOG.iter().map(|t| radius_of(t, Mode::Forward, 2)).collect();
    assert_eq!(radii, [1, 1, 2, 2, 1, 1, 1, 1, 1, 2]);
}

#[test]
fn injective_radius_one_oracles() {
    for text in ["f^", "ran(f)", "dom(f) ; g^", "~f ; g^", "f & g"] {
        assert_eq!(radius_of(text, Mode::LocalInjective, 1), 1, "{text}");
    }
}

#[test]
fn type_counts_for_two_symbols() {
    let count = |m, oriented| enumerate_types(2, m, oriented, 100_000).unwrap().len();
    assert_eq!(count(0, false), 1);
    assert_eq!(count(1, false), 10);
    assert_eq!(count(2, false), 888);
    assert_eq!(count(1, true), 63);
}

#[test]
fn synthesis_is_deterministic() {
    let a = synthesize(&op("f <+ g"), &fg(), 1, Mode::Forward).unwrap();
    let b = synthesize(&op("f <+ g"), &fg(), 1, Mode::Forward).unwrap();
    assert_eq!(a.term, b.term);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.types_considered, 10);
}

#[test]
fn formula_oracles_synthesize_too() {
    let res = synthesize(&op("fo: exists z. (f(x,z) & g(z,y))"), &fg(), 2, Mode::Forward).unwrap();
    let v = relalg::synth::validate_synthesis(&op("f ; g"), &res.term, &fg(), &ValidationBounds::new(Mode::Forward.class()), 3).unwrap();
    assert!(v.passed);
}

#[test]
fn radius_too_small_is_reported_as_unbounded() {
    let e = synthesize(&op("f ; g"), &fg(), 1, Mode::Forward).unwrap_err();
    assert!(matches!(e, Error::NotBounded(_)), "{e}");
}

#[test]
fn validation_report_records_bounds() {
    let bounds = ValidationBounds::new(Mode::Forward.class());
    let res = synthesize(&op("dom(f)"), &fg(), 1, Mode::Forward).unwrap();
    let v = relalg::synth::validate_synthesis(&op("dom(f)"), &res.term, &fg(), &bounds, 11).unwrap();
    let j = v.to_json();
    assert_eq!(j["bounds"]["max_size"], 4);
    assert_eq!(j["bounds"]["samples"], 1000);
    assert_eq!(j["bounds"]["sample_max_size"], 12);
    assert_eq!(j["random_checked"], 1000);
    // (k+1)^(2k) partial-function pairs for k = 1..4
    assert_eq!(j["exhaustive_checked"], 4 + 81 + 4096 + 390_625);
    let wrong = relalg::synth::validate_synthesis(&op("g"), &parse_term("f").unwrap(), &fg(), &bounds, 11).unwrap();
    assert!(!wrong.passed);
}
