//! Ehrenfeucht–Fraïssé games of bounded quantifier rank between two finite structures.
//!
//! Only first-order moves are played: Spoiler pebbles one element on either side, Duplicator
//! answers on the other. Set moves of the guarded second-order game are not modelled.

use crate::error::{Error, Result};
use crate::structures::{disjoint_union, random_structure_with, Domain, Relation, Structure, StructureClass};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};

/// Caveat carried by every game report.
pub const FO_ONLY: &str = "first-order moves only; guarded second-order moves are not played";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameBounds {
    pub max_domain: usize,
    pub max_rank: usize,
}

impl Default for GameBounds {
    fn default() -> Self {
        GameBounds { max_domain: 64, max_rank: 4 }
    }
}

/// A position: pebbled pairs and the number of rounds left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GamePosition {
    pub pebbles_a: Vec<usize>,
    pub pebbles_b: Vec<usize>,
    pub rank: usize,
}

/// Solver for games between one fixed pair of structures, memoized on positions.
///
/// The value of a position only depends on the set of pebbled pairs, so positions are keyed by
/// their sorted, deduplicated pair list.
pub struct Game<'s> {
    a: &'s Structure,
    b: &'s Structure,
    rels: Vec<(&'s Relation, &'s Relation)>,
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
}

impl<'s> Game<'s> {
    pub fn new(a: &'s Structure, b: &'s Structure, bounds: &GameBounds) -> Result<Self> {
        let (sa, sb) = (a.signature(), b.signature());
        if sa != sb {
            return Err(Error::SignatureMismatch { left: sa, right: sb });
        }
        let largest = a.size().max(b.size());
        if largest > bounds.max_domain {
            return Err(Error::BoundExceeded {
                what: "game domain size",
                value: largest,
                bound: bounds.max_domain,
            });
        }
        let rels = sa
            .iter()
            .map(|s| (a.relation(s).unwrap(), b.relation(s).unwrap()))
            .collect();
        Ok(Game {
            a,
            b,
            rels,
            memo: HashMap::new(),
        })
    }

    /// Whether the pebbled pairs form a partial isomorphism.
    fn partial_iso(&self, pairs: &[(usize, usize)]) -> bool {
        pairs.iter().all(|&(x, y)| {
            pairs.iter().all(|&(x2, y2)| {
                (x == x2) == (y == y2) && self.rels.iter().all(|(ra, rb)| ra.contains(x, x2) == rb.contains(y, y2))
            })
        })
    }

    fn wins(&mut self, pairs: Vec<(usize, usize)>, r: usize) -> bool {
        if !self.partial_iso(&pairs) {
            return false;
        }
        if r == 0 {
            return true;
        }
        if let Some(&v) = self.memo.get(&(pairs.clone(), r)) {
            return v;
        }
        let extend = |pairs: &[(usize, usize)], p: (usize, usize)| {
            let mut next = pairs.to_vec();
            if let Err(i) = next.binary_search(&p) {
                next.insert(i, p);
            }
            next
        };
        let (na, nb) = (self.a.size(), self.b.size());
        let mut value = true;
        'spoiler: for x in 0..na {
            if !(0..nb).any(|y| self.wins(extend(&pairs, (x, y)), r - 1)) {
                value = false;
                break 'spoiler;
            }
        }
        if value {
            for y in 0..nb {
                if !(0..na).any(|x| self.wins(extend(&pairs, (x, y)), r - 1)) {
                    value = false;
                    break;
                }
            }
        }
        self.memo.insert((pairs, r), value);
        value
    }

    /// Whether Duplicator survives `position.rank` more rounds.
    pub fn duplicator_wins(&mut self, position: &GamePosition) -> bool {
        let mut pairs: Vec<(usize, usize)> = position
            .pebbles_a
            .iter()
            .copied()
            .zip(position.pebbles_b.iter().copied())
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        self.wins(pairs, position.rank)
    }
}

fn resolve(s: &Structure, names: &[&str]) -> Result<Vec<usize>> {
    names.iter().map(|n| s.index_of(n)).collect()
}

/// `A, ā ≡_r B, b̄` under the default bounds.
pub fn ef_equiv(a: &Structure, abar: &[&str], b: &Structure, bbar: &[&str], r: usize) -> Result<bool> {
    ef_equiv_with(a, abar, b, bbar, r, &GameBounds::default())
}

pub fn ef_equiv_with(a: &Structure, abar: &[&str], b: &Structure, bbar: &[&str], r: usize, bounds: &GameBounds) -> Result<bool> {
    if abar.len() != bbar.len() {
        return Err(Error::InvalidParameter(format!(
            "pebble tuples differ in length ({} vs {})",
            abar.len(),
            bbar.len()
        )));
    }
    check_rank(r, bounds)?;
    let position = GamePosition {
        pebbles_a: resolve(a, abar)?,
        pebbles_b: resolve(b, bbar)?,
        rank: r,
    };
    Ok(Game::new(a, b, bounds)?.duplicator_wins(&position))
}

fn check_rank(r: usize, bounds: &GameBounds) -> Result<()> {
    if r > bounds.max_rank {
        return Err(Error::BoundExceeded {
            what: "game rank",
            value: r,
            bound: bounds.max_rank,
        });
    }
    Ok(())
}

/// Least rank at which Spoiler wins from the empty position, if it is at most `max_r`.
pub fn min_distinguishing_rank(a: &Structure, b: &Structure, max_r: usize) -> Result<Option<usize>> {
    min_distinguishing_rank_with(a, b, max_r, &GameBounds::default())
}

pub fn min_distinguishing_rank_with(a: &Structure, b: &Structure, max_r: usize, bounds: &GameBounds) -> Result<Option<usize>> {
    check_rank(max_r, bounds)?;
    let mut game = Game::new(a, b, bounds)?;
    Ok((0..=max_r).find(|&r| {
        !game.duplicator_wins(&GamePosition {
            pebbles_a: Vec::new(),
            pebbles_b: Vec::new(),
            rank: r,
        })
    }))
}

#[derive(Clone, Debug)]
pub struct FvViolation {
    pub a: Structure,
    pub a_prime: Structure,
    pub b: Structure,
    pub b_prime: Structure,
}

#[derive(Clone, Debug)]
pub struct FvReport {
    pub rank: usize,
    pub samples: usize,
    pub max_size: usize,
    pub seed: u64,
    /// Quadruples where both premises held and the conclusion was checked.
    pub checked: usize,
    /// Checked quadruples in which a primed structure was not an isomorphic copy.
    pub nontrivial: usize,
    /// Quadruples skipped because a premise failed.
    pub skipped: usize,
    pub violations: Vec<FvViolation>,
}

impl FvReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "note": FO_ONLY,
            "rank": self.rank,
            "samples": self.samples,
            "max_size": self.max_size,
            "seed": self.seed,
            "checked": self.checked,
            "nontrivial": self.nontrivial,
            "skipped": self.skipped,
            "violations": self.violations.iter().map(|v| json!({
                "a": v.a.to_json_value(),
                "a_prime": v.a_prime.to_json_value(),
                "b": v.b.to_json_value(),
                "b_prime": v.b_prime.to_json_value(),
            })).collect::<Vec<_>>(),
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }
}

/// `s` with its elements shuffled and renamed `"1".."k"`.
fn shuffled<R: Rng>(rng: &mut R, s: &Structure) -> Structure {
    let k = s.size();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let map: Vec<Option<usize>> = perm.iter().map(|&p| Some(p)).collect();
    let rels: BTreeMap<String, Relation> = s.relations().map(|(n, r)| (n.to_string(), r.remap(&map, k))).collect();
    Structure::from_parts(Domain::numbered(k), rels)
}

/// A partner for `s`: an isomorphic copy half the time, otherwise an unrelated structure.
fn partner<R: Rng>(rng: &mut R, s: &Structure, max_size: usize, signature: &[String]) -> (Structure, bool) {
    if rng.gen_bool(0.5) {
        (shuffled(rng, s), false)
    } else {
        let k = rng.gen_range(1..=max_size);
        (random_structure_with(rng, k, signature, StructureClass::All), true)
    }
}

/// Samples quadruples `A, A', B, B'` over one binary symbol and checks that `A ≡_r A'` and
/// `B ≡_r B'` imply `A ⊎ B ≡_r A' ⊎ B'`.
pub fn check_fv_disjoint_union(r: usize, samples: usize, max_size: usize, seed: u64) -> Result<FvReport> {
    let bounds = GameBounds::default();
    check_rank(r, &bounds)?;
    if max_size == 0 || 2 * max_size > bounds.max_domain {
        return Err(Error::InvalidParameter(format!("structure size bound {max_size} out of range")));
    }
    let signature = vec!["E".to_string()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FvReport {
        rank: r,
        samples,
        max_size,
        seed,
        checked: 0,
        nontrivial: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    for _ in 0..samples {
        let k = rng.gen_range(1..=max_size);
        let a = random_structure_with(&mut rng, k, &signature, StructureClass::All);
        let k = rng.gen_range(1..=max_size);
        let b = random_structure_with(&mut rng, k, &signature, StructureClass::All);
        let (a2, fresh_a) = partner(&mut rng, &a, max_size, &signature);
        let (b2, fresh_b) = partner(&mut rng, &b, max_size, &signature);
        if !ef_equiv(&a, &[], &a2, &[], r)? || !ef_equiv(&b, &[], &b2, &[], r)? {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        if fresh_a || fresh_b {
            report.nontrivial += 1;
        }
        if !ef_equiv(&disjoint_union(&a, &b)?, &[], &disjoint_union(&a2, &b2)?, &[], r)? {
            report.violations.push(FvViolation {
                a,
                a_prime: a2,
                b,
                b_prime: b2,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(lp: bool) -> Structure {
        let pairs: &[(&str, &str)] = if lp { &[("1", "1")] } else { &[] };
        Structure::from_lists(&["1"], &[("E", pairs)]).unwrap()
    }

    fn path(k: usize) -> Structure {
        let names: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        let r = Relation::from_pairs(k, (1..k).map(|i| (i - 1, i)));
        Structure::from_parts(Domain::new(names).unwrap(), BTreeMap::from([("E".to_string(), r)]))
    }

    #[test]
    fn loop_against_no_loop() {
        assert!(ef_equiv(&single(true), &[], &single(false), &[], 0).unwrap());
        assert!(!ef_equiv(&single(true), &[], &single(false), &[], 1).unwrap());
        assert!(!ef_equiv(&single(true), &["1"], &single(false), &["1"], 0).unwrap());
        assert_eq!(min_distinguishing_rank(&single(true), &single(false), 3).unwrap(), Some(1));
        assert_eq!(min_distinguishing_rank(&single(true), &single(true), 3).unwrap(), None);
    }

    #[test]
    fn paths_need_more_rounds() {
        // rank 2 sees an element with both a predecessor and a successor
        assert_eq!(min_distinguishing_rank(&path(2), &path(3), 4).unwrap(), Some(2));
        assert!(ef_equiv(&path(5), &[], &path(6), &[], 2).unwrap());
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(
            ef_equiv(&single(true), &[], &single(true), &[], 5),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(ef_equiv(&single(true), &["1"], &single(true), &[], 1).is_err());
        let g = Structure::from_lists(&["1"], &[("F", &[])]).unwrap();
        assert!(matches!(ef_equiv(&single(true), &[], &g, &[], 1), Err(Error::SignatureMismatch { .. })));
    }

    #[test]
    fn fv_small_run() {
        let rep = check_fv_disjoint_union(2, 30, 3, 5).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checked + rep.skipped, 30);
        assert!(rep.checked > 0);
    }
}
