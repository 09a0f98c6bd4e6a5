use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relalg::structures::{random_structure, Relation, Structure, StructureClass};
use relalg::terms::{
    check_definitional_identities, check_law, closure_is_closed, eval, normalize_fp, parse_term, random_term, semantic_closure,
    simplify, Basis, ClosureOptions, Op,
};
use std::collections::BTreeMap;

fn fg() -> Vec<String> {
    vec!["f".into(), "g".into()]
}

fn term(seed: u64, basis: Basis, size: usize) -> relalg::terms::Term {
    random_term(&mut ChaCha8Rng::seed_from_u64(seed), basis, &fg(), size)
}

#[test]
fn definitional_identities_hold_up_to_three() {
    for c in check_definitional_identities(3).unwrap() {
        assert!(c.holds(), "{}", c.to_json());
    }
}

#[test]
fn known_non_identities_fail() {
    for (l, r) in [("R ; S", "S ; R"), ("R^ ; R", "id"), ("-(R ; S)", "-R ; -S"), ("R <+ S", "S <+ R")] {
        let c = check_law(l, &parse_term(l).unwrap(), &parse_term(r).unwrap(), 3).unwrap();
        assert!(!c.holds(), "{l} = {r}");
    }
}

/// Pointwise subrelation of `a` with each pair kept by a coin from `seed`.
fn thinned(a: &Structure, seed: u64) -> Structure {
    let mut x = seed | 1;
    let mut rels = BTreeMap::new();
    for (name, r) in a.relations() {
        let mut out = Relation::empty(a.size());
        for (i, j) in r.pairs() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            if x & 1 == 1 {
                out.insert(i, j);
            }
        }
        rels.insert(name.to_string(), out);
    }
    Structure::from_parts(a.domain().clone(), rels)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_round_trips(seed in any::<u64>(), size in 1usize..12) {
        let t = term(seed, Basis::of(&Op::ALL), size);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn normalizer_yields_partial_functions(seed in any::<u64>(), size in 1usize..10, k in 1usize..5) {
        let t = term(seed, Basis::of(&Op::ALL), size);
        let a = random_structure(seed ^ 0xa5a5, k, &fg(), StructureClass::All);
        let (v, nv) = (eval(&t, &a).unwrap(), eval(&normalize_fp(&t), &a).unwrap());
        prop_assert!(nv.is_partial_function());
        if v.is_partial_function() {
            prop_assert_eq!(v, nv);
        }
    }

    #[test]
    fn simplify_preserves_meaning(seed in any::<u64>(), size in 1usize..10, k in 1usize..5) {
        let t = term(seed, Basis::of(&Op::ALL), size);
        let a = random_structure(seed ^ 0x5a5a, k, &fg(), StructureClass::All);
        prop_assert_eq!(eval(&simplify(&t), &a).unwrap(), eval(&t, &a).unwrap());
    }

    #[test]
    fn homsafe_terms_are_monotone(seed in any::<u64>(), size in 1usize..10, k in 1usize..5) {
        let t = term(seed, Basis::homsafe(), size);
        let b = random_structure(seed ^ 0x1234, k, &fg(), StructureClass::All);
        let a = thinned(&b, seed);
        prop_assert!(eval(&t, &a).unwrap().is_subset(&eval(&t, &b).unwrap()));
    }

    #[test]
    fn closures_are_closed(seed in any::<u64>(), k in 1usize..4) {
        let a = random_structure(seed, k, &fg(), StructureClass::PartialFunctions);
        let c = semantic_closure(&a, &fg(), Basis::fa(), &ClosureOptions::default()).unwrap();
        prop_assert!(c.complete);
        prop_assert!(closure_is_closed(&a, &c, Basis::fa()));
    }
}
