//! Term synthesis from semantic oracles: forward function-preserving operations become terms over
//! `{∘, ~, ∩, ⊔}`, local injective ones terms over `{∘, ~, ∩, ˘, ⊔¹}`.
//!
//! Each neighborhood type of the chosen radius is realized as a small structure, the oracle is
//! asked where the anchor goes, and the answers are stitched together with the type's
//! characteristic term.

mod search;
mod types;

pub use search::{Atom, Emission};
pub use types::{chi_term, enumerate_types, identity_term, neighborhood_type, path_term, NeighborhoodType};

use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::sliced::compare_on;
use crate::structures::{enumerate_structures, random_structure_with, EnumerateOptions, Relation, Structure, StructureClass};
use crate::terms::{Basis, CompiledTerm, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use search::{word_name, Search};
use types::balanced;

/// Largest number of types a synthesis run will enumerate.
pub const DEFAULT_TYPE_BUDGET: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Forward paths, combined with `⊔`, over partial functions.
    Forward,
    /// Oriented paths, combined with `⊔¹`, over injective partial functions.
    LocalInjective,
}

impl Mode {
    pub fn oriented(self) -> bool {
        self == Mode::LocalInjective
    }

    pub fn class(self) -> StructureClass {
        match self {
            Mode::Forward => StructureClass::PartialFunctions,
            Mode::LocalInjective => StructureClass::InjectivePartialFunctions,
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Mode::Forward => Basis::fwd(),
            Mode::LocalInjective => Basis::inj(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Forward => "forward",
            Mode::LocalInjective => "local-injective",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub term: Term,
    pub mode: Mode,
    pub radius: usize,
    pub symbols: Vec<String>,
    pub types_considered: usize,
    /// Number of types on which the oracle is defined at the anchor.
    pub positive_types: usize,
    /// Groups of positive types sharing a decided prefix and a target word, in canonical order.
    pub emissions: Vec<Emission>,
}

impl SynthesisResult {
    pub fn to_json(&self) -> Value {
        let emissions: Vec<Value> = self
            .emissions
            .iter()
            .map(|e| {
                json!({
                    "atoms": e.atoms.iter().map(|a| a.render(&self.symbols)).collect::<Vec<_>>(),
                    "word": word_name(&e.word, &self.symbols),
                    "types": e.types,
                })
            })
            .collect();
        json!({
            "schema": 1,
            "mode": self.mode.name(),
            "radius": self.radius,
            "symbols": self.symbols,
            "term": self.term.to_string(),
            "term_size": self.term.size(),
            "types_considered": self.types_considered,
            "positive_types": self.positive_types,
            "emissions": emissions,
        })
    }
}

/// Synthesizes a term equivalent to `oracle` on the mode's class, assuming the oracle's answer at
/// an element depends only on the element's radius-`m` view.
///
/// `symbols` fixes the letters; it must contain the oracle's symbols.
pub fn synthesize(oracle: &Oracle, symbols: &[String], m: usize, mode: Mode) -> Result<SynthesisResult> {
    synthesize_with_budget(oracle, symbols, m, mode, DEFAULT_TYPE_BUDGET)
}

pub fn synthesize_forward(oracle: &Oracle, symbols: &[String], m: usize) -> Result<SynthesisResult> {
    synthesize(oracle, symbols, m, Mode::Forward)
}

pub fn synthesize_local_injective(oracle: &Oracle, symbols: &[String], m: usize) -> Result<SynthesisResult> {
    synthesize(oracle, symbols, m, Mode::LocalInjective)
}

pub fn synthesize_with_budget(oracle: &Oracle, symbols: &[String], m: usize, mode: Mode, budget: usize) -> Result<SynthesisResult> {
    if let Some(s) = oracle.symbols().into_iter().find(|s| !symbols.contains(s)) {
        return Err(Error::InvalidParameter(format!("oracle symbol {s} is not among the synthesis symbols")));
    }
    if symbols.is_empty() {
        return Err(Error::InvalidParameter("at least one symbol is required".into()));
    }
    let op = oracle.compile()?;
    let mut search = Search::new(&op, symbols, m, mode.oriented(), budget);
    let emissions = search.run()?;
    let join: fn(Term, Term) -> Term = match mode {
        Mode::Forward => Term::pref,
        Mode::LocalInjective => Term::inj_union,
    };
    let parts = emissions
        .iter()
        .map(|e| {
            let guard = balanced(e.atoms.iter().map(|a| a.term(symbols)).collect(), Term::meet);
            match (guard, e.word.is_empty()) {
                (None, _) => path_term(&e.word, symbols),
                (Some(g), true) => g,
                (Some(g), false) => g.then(path_term(&e.word, symbols)),
            }
        })
        .collect();
    let first = Term::sym(&symbols[0]);
    let term = balanced(parts, join).unwrap_or_else(|| first.clone().anti().then(first));
    debug_assert!(term.is_over(mode.basis()));
    Ok(SynthesisResult {
        term,
        mode,
        radius: m,
        symbols: symbols.to_vec(),
        types_considered: search.leaves,
        positive_types: search.positive,
        emissions,
    })
}

/// Exhaustive size and random sampling used to compare a synthesized term with its oracle.
#[derive(Clone, Debug)]
pub struct ValidationBounds {
    pub max_size: usize,
    pub samples: usize,
    pub sample_max_size: usize,
    pub class: StructureClass,
}

impl ValidationBounds {
    pub fn new(class: StructureClass) -> Self {
        ValidationBounds {
            max_size: 4,
            samples: 1000,
            sample_max_size: 12,
            class,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub passed: bool,
    /// Structure, pair, and whether the oracle and the term contain the pair.
    pub counterexample: Option<(Structure, (String, String), bool, bool)>,
    pub exhaustive_checked: u64,
    pub random_checked: u64,
    pub bounds: ValidationBounds,
    pub seed: u64,
}

impl ValidationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "status": if self.passed { "pass-bounded" } else { "fail" },
            "counterexample": self.counterexample.as_ref().map(|(s, (a, b), o, t)| json!({
                "structure": s.to_json_value(),
                "pair": [a, b],
                "oracle_holds": o,
                "term_holds": t,
            })),
            "bounds": {
                "max_size": self.bounds.max_size,
                "samples": self.bounds.samples,
                "sample_max_size": self.bounds.sample_max_size,
                "class": self.bounds.class,
            },
            "exhaustive_checked": self.exhaustive_checked,
            "random_checked": self.random_checked,
            "seed": self.seed,
        })
    }
}

/// Compares `term` with `oracle` on every structure of the class up to `max_size` over
/// `symbols`, then on seeded random structures.
pub fn validate_synthesis(oracle: &Oracle, term: &Term, symbols: &[String], bounds: &ValidationBounds, seed: u64) -> Result<ValidationReport> {
    let mut sig: Vec<String> = symbols.to_vec();
    for s in oracle.symbols().into_iter().chain(term.signature()) {
        if !sig.contains(&s) {
            sig.push(s);
        }
    }
    sig.sort();
    let right = Oracle::Term(term.clone());
    let stream = enumerate_structures(&sig, EnumerateOptions::new(bounds.max_size, bounds.class))?;
    let (d, exhaustive) = compare_on(oracle, &right, &sig, stream)?;
    let report = |counterexample, random| ValidationReport {
        passed: false,
        counterexample: Some(counterexample),
        exhaustive_checked: exhaustive,
        random_checked: random,
        bounds: bounds.clone(),
        seed,
    };
    if let Some(d) = d {
        let s = d.structure;
        let pair = (s.name(d.pair.0).to_string(), s.name(d.pair.1).to_string());
        return Ok(report((s, pair, d.left, d.right), 0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Structure> = (0..bounds.samples)
        .map(|_| {
            let size = rng.gen_range(1..=bounds.sample_max_size.max(1));
            random_structure_with(&mut rng, size, &sig, bounds.class)
        })
        .collect();
    let (lo, ro) = (oracle.compile()?, CompiledTerm::new(&term.expand_injective_union()));
    let hit = samples
        .par_iter()
        .enumerate()
        .map(|(k, s)| -> Result<Option<(usize, Relation, Relation)>> {
            let (a, b) = (lo.eval(s)?, ro.eval(s)?);
            Ok((a != b).then_some((k, a, b)))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match hit {
        Some(Err(e)) => Err(e),
        Some(Ok(Some((k, a, b)))) => {
            let s = samples[k].clone();
            let (i, j) = a.difference(&b).union(&b.difference(&a)).pairs().next().unwrap();
            let pair = (s.name(i).to_string(), s.name(j).to_string());
            Ok(report((s, pair, a.contains(i, j), b.contains(i, j)), k as u64 + 1))
        }
        _ => Ok(ValidationReport {
            passed: true,
            counterexample: None,
            exhaustive_checked: exhaustive,
            random_checked: bounds.samples as u64,
            bounds: bounds.clone(),
            seed,
        }),
    }
}

#[derive(Clone, Debug)]
pub struct RadiusAttempt {
    pub radius: usize,
    /// Synthesis error or validation failure; `None` when this radius succeeded.
    pub failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RadiusEstimate {
    pub radius: Option<usize>,
    pub result: Option<SynthesisResult>,
    pub attempts: Vec<RadiusAttempt>,
}

impl RadiusEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "radius": self.radius,
            "attempts": self.attempts.iter().map(|a| json!({"radius": a.radius, "failure": a.failure})).collect::<Vec<_>>(),
        })
    }
}

/// Smallest radius up to `max_m` whose synthesized term validates.
pub fn estimate_radius(
    oracle: &Oracle,
    symbols: &[String],
    mode: Mode,
    max_m: usize,
    bounds: &ValidationBounds,
    seed: u64,
) -> Result<RadiusEstimate> {
    let mut attempts = Vec::new();
    for m in 0..=max_m {
        let failure = match synthesize(oracle, symbols, m, mode) {
            Err(e @ (Error::NotBounded(_) | Error::NotFunctionPreserving(_))) => Some(e.to_string()),
            Err(e) => return Err(e),
            Ok(res) => {
                let v = validate_synthesis(oracle, &res.term, symbols, bounds, seed)?;
                if v.passed {
                    attempts.push(RadiusAttempt { radius: m, failure: None });
                    return Ok(RadiusEstimate {
                        radius: Some(m),
                        result: Some(res),
                        attempts,
                    });
                }
                let (s, (a, b), o, t) = v.counterexample.unwrap();
                Some(format!(
                    "validation counterexample on {} at ({a},{b}): oracle {o}, term {t}",
                    s.to_json()
                ))
            }
        };
        attempts.push(RadiusAttempt { radius: m, failure });
    }
    Ok(RadiusEstimate {
        radius: None,
        result: None,
        attempts,
    })
}
