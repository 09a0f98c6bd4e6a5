//! Bounded-exhaustive and seeded-random structure generation.

use super::{Domain, Relation, Structure, StructureClass};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub max_size: usize,
    pub class: StructureClass,
    /// Smallest domain size produced; the empty structure is skipped by default.
    pub min_size: usize,
    /// Refuse `max_size` beyond this.
    pub size_bound: usize,
}

impl EnumerateOptions {
    pub fn new(max_size: usize, class: StructureClass) -> Self {
        EnumerateOptions {
            max_size,
            class,
            min_size: 1,
            size_bound: 12,
        }
    }

    pub fn with_empty(mut self) -> Self {
        self.min_size = 0;
        self
    }

    pub fn exactly(mut self, size: usize) -> Self {
        self.min_size = size;
        self.max_size = size;
        self
    }
}

/// Candidate relations of one class over a domain of size `k`, addressable by index.
#[derive(Clone)]
enum Candidates {
    Bits { k: usize },
    Functions { k: usize, total: bool },
    Listed(Vec<Relation>),
}

impl Candidates {
    fn new(k: usize, class: StructureClass) -> Self {
        match class {
            StructureClass::All => Candidates::Bits { k },
            StructureClass::PartialFunctions => Candidates::Functions { k, total: false },
            StructureClass::TotalFunctions => Candidates::Functions { k, total: true },
            StructureClass::InjectivePartialFunctions => {
                let all = Candidates::Functions { k, total: false };
                Candidates::Listed(
                    (0..all.count())
                        .map(|i| all.get(i))
                        .filter(Relation::is_injective_partial_function)
                        .collect(),
                )
            }
        }
    }

    fn count(&self) -> u128 {
        match *self {
            Candidates::Bits { k } => 1u128 << (k * k),
            Candidates::Functions { k, total } => {
                let radix = if total { k } else { k + 1 } as u128;
                radix.pow(k as u32)
            }
            Candidates::Listed(ref v) => v.len() as u128,
        }
    }

    fn get(&self, idx: u128) -> Relation {
        match *self {
            Candidates::Bits { k } => {
                let mut r = Relation::empty(k);
                for bit in 0..k * k {
                    if idx >> bit & 1 == 1 {
                        r.insert(bit / k, bit % k);
                    }
                }
                r
            }
            Candidates::Functions { k, total } => {
                let radix = if total { k } else { k + 1 } as u128;
                let mut r = Relation::empty(k);
                let mut rest = idx;
                for a in 0..k {
                    let digit = (rest % radix) as usize;
                    rest /= radix;
                    if total {
                        r.insert(a, digit);
                    } else if digit > 0 {
                        r.insert(a, digit - 1);
                    }
                }
                r
            }
            Candidates::Listed(ref v) => v[idx as usize].clone(),
        }
    }
}

/// Number of structures of exactly `k` elements in `class` over `symbols` relation symbols.
pub fn count_structures(k: usize, symbols: usize, class: StructureClass) -> u128 {
    Candidates::new(k, class).count().pow(symbols as u32)
}

/// Deterministic stream of every structure with domain `{1..k}`, `min_size ≤ k ≤ max_size`.
///
/// Within one size the last symbol varies fastest. Isomorphic duplicates are not removed.
#[derive(Clone)]
pub struct StructureStream {
    signature: Vec<String>,
    opts: EnumerateOptions,
    size: usize,
    domain: Domain,
    candidates: Candidates,
    counters: Vec<u128>,
    done: bool,
}

pub fn enumerate_structures(signature: &[String], opts: EnumerateOptions) -> Result<StructureStream> {
    if opts.max_size > opts.size_bound {
        return Err(Error::BoundExceeded {
            what: "enumeration size",
            value: opts.max_size,
            bound: opts.size_bound,
        });
    }
    let mut signature = signature.to_vec();
    signature.sort();
    signature.dedup();
    let size = opts.min_size;
    Ok(StructureStream {
        counters: vec![0; signature.len()],
        domain: Domain::numbered(size),
        candidates: Candidates::new(size, opts.class),
        signature,
        done: opts.min_size > opts.max_size,
        size,
        opts,
    })
}

impl StructureStream {
    fn advance_size(&mut self) {
        self.size += 1;
        if self.size > self.opts.max_size {
            self.done = true;
            return;
        }
        self.domain = Domain::numbered(self.size);
        self.candidates = Candidates::new(self.size, self.opts.class);
        self.counters.iter_mut().for_each(|c| *c = 0);
    }

    /// Total number of structures this stream yields from its start.
    pub fn total(&self) -> u128 {
        (self.opts.min_size..=self.opts.max_size)
            .map(|k| count_structures(k, self.signature.len(), self.opts.class))
            .sum()
    }
}

impl Iterator for StructureStream {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        loop {
            if self.done {
                return None;
            }
            let count = self.candidates.count();
            if count == 0 && !self.signature.is_empty() {
                self.advance_size();
                continue;
            }
            let relations: BTreeMap<String, Relation> = self
                .signature
                .iter()
                .zip(&self.counters)
                .map(|(name, &i)| (name.clone(), self.candidates.get(i)))
                .collect();
            let out = Structure::from_parts(self.domain.clone(), relations);
            // odometer, last symbol fastest
            let mut pos = self.counters.len();
            loop {
                if pos == 0 {
                    self.advance_size();
                    break;
                }
                pos -= 1;
                self.counters[pos] += 1;
                if self.counters[pos] < count {
                    break;
                }
                self.counters[pos] = 0;
            }
            return Some(out);
        }
    }
}

/// A random relation of the given class over `k` elements.
pub(crate) fn random_relation<R: Rng>(rng: &mut R, k: usize, class: StructureClass) -> Relation {
    let mut r = Relation::empty(k);
    match class {
        StructureClass::All => {
            let density = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
            for a in 0..k {
                for b in 0..k {
                    if rng.gen_bool(density) {
                        r.insert(a, b);
                    }
                }
            }
        }
        StructureClass::PartialFunctions => {
            for a in 0..k {
                if rng.gen_range(0..3) > 0 {
                    r.insert(a, rng.gen_range(0..k));
                }
            }
        }
        StructureClass::TotalFunctions => {
            for a in 0..k {
                r.insert(a, rng.gen_range(0..k));
            }
        }
        StructureClass::InjectivePartialFunctions => {
            let mut targets: Vec<usize> = (0..k).collect();
            targets.shuffle(rng);
            for (a, &b) in targets.iter().enumerate() {
                if rng.gen_range(0..4) > 0 {
                    r.insert(a, b);
                }
            }
        }
    }
    r
}

/// Random member of `class` drawn from an existing generator.
pub fn random_structure_with<R: Rng>(rng: &mut R, size: usize, signature: &[String], class: StructureClass) -> Structure {
    let domain = Domain::numbered(size);
    let mut sig = signature.to_vec();
    sig.sort();
    sig.dedup();
    let relations = sig
        .into_iter()
        .map(|name| (name, random_relation(rng, size, class)))
        .collect();
    Structure::from_parts(domain, relations)
}

/// Reproducible random member of `class` with domain `{1..size}`.
pub fn random_structure(seed: u64, size: usize, signature: &[String], class: StructureClass) -> Structure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_structure_with(&mut rng, size, signature, class)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn counts_for_one_symbol() {
        let all = enumerate_structures(&sig(&["R"]), EnumerateOptions::new(2, StructureClass::All)).unwrap();
        // one relation on the singleton (empty or loop) plus 16 on two elements
        assert_eq!(all.count(), 2 + 16);
        let pf = enumerate_structures(
            &sig(&["f"]),
            EnumerateOptions::new(2, StructureClass::PartialFunctions).exactly(2),
        )
        .unwrap();
        assert_eq!(pf.count(), 9);
        let tf = enumerate_structures(
            &sig(&["f"]),
            EnumerateOptions::new(2, StructureClass::TotalFunctions).exactly(2),
        )
        .unwrap();
        assert_eq!(tf.count(), 4);
    }

    #[test]
    fn class_filter_is_exact() {
        let sig = sig(&["f", "g"]);
        for class in [
            StructureClass::PartialFunctions,
            StructureClass::TotalFunctions,
            StructureClass::InjectivePartialFunctions,
        ] {
            let filtered = enumerate_structures(&sig, EnumerateOptions::new(2, StructureClass::All))
                .unwrap()
                .filter(|s| s.in_class(class))
                .count();
            let direct = enumerate_structures(&sig, EnumerateOptions::new(2, class)).unwrap();
            assert_eq!(direct.total(), filtered as u128);
            assert!(direct.clone().all(|s| s.in_class(class)));
            assert_eq!(direct.count(), filtered);
        }
    }

    #[test]
    fn empty_structure_on_request() {
        let s = enumerate_structures(&sig(&["f"]), EnumerateOptions::new(1, StructureClass::All).with_empty()).unwrap();
        let v: Vec<_> = s.collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].size(), 0);
    }

    #[test]
    fn bound_enforced() {
        let mut o = EnumerateOptions::new(9, StructureClass::All);
        o.size_bound = 8;
        assert!(enumerate_structures(&sig(&["f"]), o).is_err());
    }

    #[test]
    fn random_is_reproducible_and_in_class() {
        let s = sig(&["f", "g"]);
        assert_eq!(
            random_structure(7, 9, &s, StructureClass::All),
            random_structure(7, 9, &s, StructureClass::All)
        );
        for seed in 0..50 {
            assert!(random_structure(seed, 8, &s, StructureClass::PartialFunctions).in_class(StructureClass::PartialFunctions));
            assert!(random_structure(seed, 8, &s, StructureClass::TotalFunctions).in_class(StructureClass::TotalFunctions));
            let inj = random_structure(seed, 8, &s, StructureClass::InjectivePartialFunctions);
            assert!(inj.relations().all(|(_, r)| r.converse().is_partial_function()));
        }
    }
}
