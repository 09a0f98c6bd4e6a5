//! Rank-bounded game equivalence against enumerated structures and first-order sentences.

use relalg::constructions::{build_cm_vee, build_counterexample};
use relalg::games::{check_fv_disjoint_union, ef_equiv, min_distinguishing_rank};
use relalg::logic::{eval_formula, parse_formula};
use relalg::structures::{disjoint_union, enumerate_structures, random_structure, EnumerateOptions, Structure, StructureClass};
use std::collections::HashMap;

fn e() -> Vec<String> {
    vec!["E".to_string()]
}

fn small_structures() -> Vec<Structure> {
    enumerate_structures(&e(), EnumerateOptions::new(2, StructureClass::All)).unwrap().collect()
}

#[test]
fn reflexive_and_antitone_on_random_structures() {
    for seed in 0..60 {
        let a = random_structure(seed, 1 + seed as usize % 4, &e(), StructureClass::All);
        let b = random_structure(seed + 1000, 1 + (seed as usize / 4) % 4, &e(), StructureClass::All);
        for r in 0..=3 {
            assert!(ef_equiv(&a, &[], &a, &[], r).unwrap());
            if ef_equiv(&a, &[], &b, &[], r + 1).unwrap() {
                assert!(ef_equiv(&a, &[], &b, &[], r).unwrap(), "seed {seed} rank {r}");
            }
        }
    }
}

#[test]
fn equivalent_structures_agree_on_rank_two_sentences() {
    let sentences = [
        "exists x. E(x,x)",
        "forall x. exists y. E(x,y)",
        "exists x. forall y. E(x,y)",
        "exists x. exists y. (E(x,y) & !E(y,x))",
        "forall x. forall y. (E(x,y) -> x = y)",
        "exists x. exists y. (x != y & !E(x,y) & !E(y,x))",
        "forall x. (E(x,x) | exists y. E(y,x))",
    ];
    let formulas: Vec<_> = sentences.iter().map(|s| parse_formula(s).unwrap()).collect();
    let structures = small_structures();
    let empty = HashMap::new();
    let verdicts: Vec<Vec<bool>> = structures
        .iter()
        .map(|s| formulas.iter().map(|f| eval_formula(f, s, &empty).unwrap()).collect())
        .collect();
    let mut equivalent_pairs = 0;
    for (i, a) in structures.iter().enumerate() {
        for (j, b) in structures.iter().enumerate() {
            if ef_equiv(a, &[], b, &[], 2).unwrap() {
                equivalent_pairs += 1;
                assert_eq!(verdicts[i], verdicts[j], "{} vs {}", a.to_json(), b.to_json());
            }
        }
    }
    assert!(equivalent_pairs > structures.len());
}

#[test]
fn pebbled_positions() {
    let a = Structure::from_lists(&["1", "2"], &[("E", &[("1", "2")])]).unwrap();
    assert!(ef_equiv(&a, &["1"], &a, &["1"], 2).unwrap());
    assert!(!ef_equiv(&a, &["1"], &a, &["2"], 1).unwrap());
    assert!(ef_equiv(&a, &["1"], &a, &["2"], 0).unwrap());
}

#[test]
fn cycle_gadgets_at_low_rank() {
    let (c2, c3) = (build_cm_vee(2).unwrap(), build_cm_vee(3).unwrap());
    assert_eq!(min_distinguishing_rank(&c2, &c3, 2).unwrap(), None);
    let doubled = disjoint_union(&c2, &c2).unwrap();
    assert_eq!(min_distinguishing_rank(&c2, &doubled, 2).unwrap(), None);
    // the bundle's left half is C_2^∨ itself
    let bundle = build_counterexample(2, 3).unwrap();
    assert!(ef_equiv(&bundle.c, &[], &disjoint_union(&c2, &c3).unwrap(), &[], 2).unwrap());
}

#[test]
fn disjoint_union_preserves_equivalence_at_rank_two() {
    let rep = check_fv_disjoint_union(2, 100, 4, 0).unwrap();
    assert!(rep.passed(), "{}", rep.to_json());
    assert_eq!(rep.checked + rep.skipped, 100);
    assert!(rep.nontrivial > 0, "{}", rep.to_json());
}
