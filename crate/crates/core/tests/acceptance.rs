//! Acceptance run: one PASS/FAIL line per criterion, each with the numbers behind it.
//!
//! Runs without the test harness so the lines always reach stdout. Criteria listed in
//! `DOCUMENTED_FAILURES` are reported but do not fail the run; the README
//! explains each one. Every other criterion must pass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relalg::constructions::{build_counterexample, replay_fig2, sink_extension, verify_claim2, Claim2Options};
use relalg::games::{check_fv_disjoint_union, ef_equiv, min_distinguishing_rank};
use relalg::oracle::Oracle;
use relalg::structures::{enumerate_structures, random_structure, random_structure_with, EnumerateOptions, Structure, StructureClass};
use relalg::synth::{chi_term, enumerate_types, estimate_radius, neighborhood_type, Mode, ValidationBounds};
use relalg::terms::{check_definitional_identities, eval, normalize_fp, random_term, Basis, CompiledTerm, Op};
use relalg::translate::{compile_posex, random_posex, verify_compilation, VerifyOptions};
use std::time::Instant;

/// The expected operation table marks complement as not ⊆-safe, but a quantifier-free operation is preserved under
/// induced substructures; the checker finds no witness and the row is reported as a mismatch.
const DOCUMENTED_FAILURES: [usize; 1] = [2];

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

const INJECTIVE_CATALOG: [&str; 8] = ["f^", "ran(f)", "dom(f) ; g^", "f ; g", "f^ ; g", "f <# g", "~f ; g^", "f & g"];

type Outcome = (bool, String);
type Criterion = (usize, &'static str, fn() -> Outcome);

fn identities() -> Outcome {
    let checks = check_definitional_identities(3).unwrap();
    let failed: Vec<String> = checks.iter().filter(|c| !c.holds()).map(|c| c.name.clone()).collect();
    let structures: u128 = checks.iter().map(|c| c.structures).sum();
    (
        failed.is_empty(),
        format!("{} identities, {structures} structure comparisons, failing: {failed:?}", checks.len()),
    )
}

fn table1() -> Outcome {
    let report = relalg::checkers::table1_matrix(Some(3), 0).unwrap();
    let mismatched: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.matches())
        .map(|r| format!("{} expected {:?} observed {:?}", r.name, r.expected, r.observed()))
        .collect();
    let witnesses = report.witnesses_within(4);
    (
        mismatched.is_empty() && witnesses,
        format!("witnesses within 4: {witnesses}; mismatched rows: {mismatched:?}"),
    )
}

fn compiler() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pool: Vec<String> = ["f", "g", "h"].iter().map(|s| s.to_string()).collect();
    let mut failures = Vec::new();
    for k in 0..200u64 {
        let symbols = &pool[..rng.gen_range(1..=3)];
        let f = random_posex(&mut rng, symbols, 4);
        let t = compile_posex(&f).unwrap();
        if !t.is_over(Basis::homsafe()) {
            failures.push(format!("{f}: basis"));
            continue;
        }
        let opts = VerifyOptions { seed: k, ..VerifyOptions::default() };
        if !verify_compilation(&f, &t, &opts).unwrap().passed() {
            failures.push(format!("{f}"));
        }
    }
    (failures.is_empty(), format!("200 formulas, failures: {failures:?}"))
}

fn separation() -> Outcome {
    let bundle = build_counterexample(2, 3).unwrap();
    let fa = verify_claim2(&bundle, Basis::fa(), &Claim2Options::default()).unwrap();
    let names: Vec<&str> = fa.members.iter().filter_map(|(_, x)| *x).collect();
    let closure_is_x = fa.passed() && fa.members.len() == 8 && names.len() == 8;
    let sep = bundle.separating_value().unwrap();
    let sep_ok = sep.len() == 6
        && sep.pairs().all(|(i, j)| i == j && bundle.c.name(i).starts_with("L:a"))
        && bundle.x_member(&sep).is_none();
    let conv = verify_claim2(&bundle, Basis::fa().with(Op::Converse), &Claim2Options::default()).unwrap();
    let escapes = !conv.passed() && conv.escapee.is_some();
    (
        closure_is_x && sep_ok && escapes,
        format!(
            "FA closure {} members {names:?}; separating relation outside X: {sep_ok}; with converse escapes via {}",
            fa.members.len(),
            conv.escapee.map(|t| t.to_string()).unwrap_or_default()
        ),
    )
}

fn sink() -> Outcome {
    let bundle = build_counterexample(2, 3).unwrap();
    let ext = sink_extension(&bundle).unwrap();
    let s = &ext.structure;
    let n = bundle.c.size();
    let total = s.in_class(StructureClass::TotalFunctions) && s.signature().len() == 3;
    let embed: Vec<Option<usize>> = (0..n).map(Some).collect();
    let recovered = ["f", "g"]
        .iter()
        .all(|sym| eval(&ext.recovery[*sym], s).unwrap() == bundle.c.relation(sym).unwrap().remap(&embed, n + 1));
    let value = eval(&ext.total_separating, s).unwrap();
    let sep = bundle.separating_value().unwrap().remap(&embed, n + 1);
    let mut expected = sep.clone();
    for x in 0..=n {
        if !sep.has_successor(x) {
            expected.insert(x, n);
        }
    }
    let predicted = value.is_total_function() && value == expected;
    (
        total && recovered && predicted,
        format!("three total functions: {total}; recovery exact: {recovered}; separating value total and as predicted: {predicted}"),
    )
}

fn normalizer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let symbols: Vec<String> = vec!["f".into(), "g".into()];
    let all = Basis::of(&Op::ALL);
    let (mut already, mut bad) = (0, Vec::new());
    for _ in 0..1000 {
        let size = rng.gen_range(1..=8);
        let t = random_term(&mut rng, all, &symbols, size);
        let k = rng.gen_range(1..=4);
        let a = random_structure_with(&mut rng, k, &symbols, StructureClass::All);
        let (v, nv) = (eval(&t, &a).unwrap(), eval(&normalize_fp(&t), &a).unwrap());
        let ok = nv.is_partial_function() && (!v.is_partial_function() || v == nv);
        if v.is_partial_function() {
            already += 1;
        }
        if !ok {
            bad.push(t.to_string());
        }
    }
    (bad.is_empty(), format!("1000 cases, {already} already partial functions, failures: {bad:?}"))
}

fn synthesis(catalog: &[&str], mode: Mode) -> Outcome {
    let symbols: Vec<String> = vec!["f".into(), "g".into()];
    let bounds = ValidationBounds::new(mode.class());
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, text) in catalog.iter().enumerate() {
        let est = estimate_radius(&Oracle::parse(text).unwrap(), &symbols, mode, 2, &bounds, k as u64).unwrap();
        match (est.radius, est.result) {
            (Some(m), Some(res)) if res.term.is_over(mode.basis()) => {
                lines.push(format!("{text}@{m}"));
            }
            _ => {
                ok = false;
                lines.push(format!("{text}: FAILED {}", est.attempts.last().and_then(|a| a.failure.clone()).unwrap_or_default()));
            }
        }
    }
    (ok, format!("{} oracles [{}]", catalog.len(), lines.join(", ")))
}

fn fig2() -> Outcome {
    let replays: Vec<_> = (1..=3).map(|m| replay_fig2(m).unwrap()).collect();
    let ok = replays.iter().all(|r| r.confirmed());
    let detail = replays
        .iter()
        .map(|r| format!("m={}: psi(A)={} psi(B)={} balls iso={}", r.m, r.psi_in_a, r.psi_in_b, r.balls_isomorphic))
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

fn games() -> Outcome {
    let e = vec!["E".to_string()];
    let mut laws = true;
    for seed in 0..200u64 {
        let a = random_structure(seed, 1 + seed as usize % 4, &e, StructureClass::All);
        let b = random_structure(seed + 10_000, 1 + (seed as usize / 4) % 4, &e, StructureClass::All);
        for r in 0..=2 {
            laws &= ef_equiv(&a, &[], &a, &[], r).unwrap();
            if ef_equiv(&a, &[], &b, &[], r + 1).unwrap() {
                laws &= ef_equiv(&a, &[], &b, &[], r).unwrap();
            }
        }
    }
    let fv = check_fv_disjoint_union(2, 100, 4, 0).unwrap();
    let lp = Structure::from_lists(&["1"], &[("E", &[("1", "1")])]).unwrap();
    let no = Structure::from_lists(&["1"], &[("E", &[])]).unwrap();
    let rank = min_distinguishing_rank(&lp, &no, 3).unwrap();
    (
        laws && fv.passed() && rank == Some(1),
        format!(
            "reflexivity/antitonicity: {laws}; FV: {} checked, {} skipped, {} violations; loop vs no-loop rank {rank:?}",
            fv.checked,
            fv.skipped,
            fv.violations.len()
        ),
    )
}

fn chi() -> Outcome {
    let f = vec!["f".to_string()];
    let structures: Vec<Structure> = enumerate_structures(&f, EnumerateOptions::new(5, StructureClass::PartialFunctions))
        .unwrap()
        .collect();
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for m in 0..=2 {
        let types = enumerate_types(1, m, false, 10_000).unwrap();
        let chis: Vec<CompiledTerm> = types.iter().map(|t| CompiledTerm::new(&chi_term(t, &f))).collect();
        for s in &structures {
            let values: Vec<_> = chis.iter().map(|c| c.eval(s).unwrap()).collect();
            for a in 0..s.size() {
                let own = neighborhood_type(s, s.name(a), m, false, &f).unwrap();
                for (t, v) in types.iter().zip(&values) {
                    checked += 1;
                    let inside = v.successors(a).all(|b| b == a);
                    if (v.contains(a, a) != (*t == own)) || !inside {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    (
        mismatches == 0,
        format!("{} structures, {checked} (element, type) checks, {mismatches} mismatches", structures.len()),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "definitional identities, domain <= 3", identities),
        (2, "operation/property matrix, witnesses within 4", table1),
        (3, "positive-existential compiler, 200 formulas", compiler),
        (4, "separation replay at (2,3)", separation),
        (5, "sink extension to total functions", sink),
        (6, "normalizer, 1000 cases", normalizer),
        (7, "forward synthesis catalog", || synthesis(&FORWARD_CATALOG, Mode::Forward)),
        (8, "local injective synthesis catalog", || synthesis(&INJECTIVE_CATALOG, Mode::LocalInjective)),
        (9, "bounded-radius counterexample replay, m = 1..3", fig2),
        (10, "games: laws, FV check, loop rank", games),
        (11, "chi characterization, size <= 5", chi),
    ];
    let mut unexpected = Vec::new();
    for (k, name, run) in criteria {
        let start = Instant::now();
        let (passed, detail) = run();
        println!(
            "criterion {k:>2}: {} - {name} ({:.1}s) - {detail}",
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        if !passed && !DOCUMENTED_FAILURES.contains(&k) {
            unexpected.push(k);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria failed: {unexpected:?}");
        std::process::exit(1);
    }
}
