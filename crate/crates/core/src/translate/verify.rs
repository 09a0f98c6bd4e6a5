use crate::error::Result;
use crate::logic::Formula;
use crate::oracle::Oracle;
use crate::sliced::compare_over;
use crate::structures::{random_structure_with, StructureClass, StructureFile};
use crate::terms::Term;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Every structure up to this size is checked.
    pub max_size: usize,
    pub samples: usize,
    pub sample_max_size: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_size: 3,
            samples: 500,
            sample_max_size: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CompilationVerdict {
    Pass,
    Counterexample {
        structure: StructureFile,
        pair: [String; 2],
        formula_holds: bool,
        term_holds: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub verdict: CompilationVerdict,
    pub exhaustive_structures: u128,
    pub random_samples: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, CompilationVerdict::Pass)
    }
}

/// Checks that `t` defines the same relation as `f` (free in `x`, `y`): first on every structure
/// up to `max_size` over the joint signature, then on seeded random larger ones.
pub fn verify_compilation(f: &Formula, t: &Term, opts: &VerifyOptions) -> Result<VerifyReport> {
    let left = Oracle::formula(f.clone());
    let right = Oracle::Term(t.clone());
    let signature: Vec<String> = left.symbols().union(&right.symbols()).cloned().collect();
    let cmp = compare_over(&left, &right, &signature, 1, opts.max_size)?;
    if let Some(d) = cmp.disagreement {
        let s = &d.structure;
        return Ok(VerifyReport {
            verdict: CompilationVerdict::Counterexample {
                pair: [s.name(d.pair.0).to_string(), s.name(d.pair.1).to_string()],
                structure: s.to_json_value(),
                formula_holds: d.left,
                term_holds: d.right,
            },
            exhaustive_structures: cmp.structures,
            random_samples: 0,
        });
    }
    let (lc, rc) = (left.compile()?, right.compile()?);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for k in 0..opts.samples {
        let size = rng.gen_range(1..=opts.sample_max_size.max(1));
        let s = random_structure_with(&mut rng, size, &signature, StructureClass::All);
        let (a, b) = (lc.eval(&s)?, rc.eval(&s)?);
        if a != b {
            let (i, j) = a.difference(&b).union(&b.difference(&a)).pairs().next().unwrap();
            return Ok(VerifyReport {
                verdict: CompilationVerdict::Counterexample {
                    pair: [s.name(i).to_string(), s.name(j).to_string()],
                    structure: s.to_json_value(),
                    formula_holds: a.contains(i, j),
                    term_holds: b.contains(i, j),
                },
                exhaustive_structures: cmp.structures,
                random_samples: k + 1,
            });
        }
    }
    Ok(VerifyReport {
        verdict: CompilationVerdict::Pass,
        exhaustive_structures: cmp.structures,
        random_samples: opts.samples,
    })
}

/// A random positive-existential formula over `x, y, z` with free variables among `x, y`
/// and connective/quantifier nesting at most `depth`.
pub fn random_posex<R: Rng>(rng: &mut R, symbols: &[String], depth: usize) -> Formula {
    gen(rng, symbols, depth, &["x", "y"])
}

fn gen<R: Rng>(rng: &mut R, symbols: &[String], depth: usize, scope: &[&str]) -> Formula {
    let var = |rng: &mut R| *scope.choose(rng).unwrap();
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..20) {
            0 => Formula::True,
            1 => Formula::False,
            2..=4 => Formula::eq(var(rng), var(rng)),
            _ => Formula::atom(symbols.choose(rng).unwrap(), var(rng), var(rng)),
        };
    }
    match rng.gen_range(0..5) {
        0 | 1 => gen(rng, symbols, depth - 1, scope).and(gen(rng, symbols, depth - 1, scope)),
        2 => gen(rng, symbols, depth - 1, scope).or(gen(rng, symbols, depth - 1, scope)),
        _ => {
            let v = *["x", "y", "z"].choose(rng).unwrap();
            let mut inner: Vec<&str> = scope.to_vec();
            if !inner.contains(&v) {
                inner.push(v);
            }
            Formula::exists(v, gen(rng, symbols, depth - 1, &inner))
        }
    }
}
