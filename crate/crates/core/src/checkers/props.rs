use super::{Bounds, Counterexample, Property, Status, Verdict};
use crate::error::Result;
use crate::logic::CompiledFormula;
use crate::oracle::{CompiledOracle, Oracle};
use crate::structures::distances;
use crate::structures::{
    enumerate_structures, homomorphisms, is_homomorphism, random_structure_with, EnumerateOptions, Mode, Relation,
    Structure, StructureClass,
};
use crate::terms::eval;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Work items handed to the thread pool at once; the first failure within the earliest failing
/// chunk wins, so results do not depend on the number of workers.
const CHUNK: usize = 2048;
/// Induced substructures tried per random structure in the ⊆-safety check.
const RANDOM_SUBSETS: usize = 6;

type Probe = Result<Option<Counterexample>>;

/// Runs `probe` over `items` chunk by chunk and returns the first failure in item order,
/// with the number of items examined up to and including it.
fn first_failure<T, I, F>(items: I, probe: F) -> Result<(Option<Counterexample>, u64)>
where
    T: Send + Sync,
    I: Iterator<Item = T>,
    F: Fn(&T) -> Probe + Sync,
{
    let mut seen = 0u64;
    let mut items = items.peekable();
    while items.peek().is_some() {
        let chunk: Vec<T> = items.by_ref().take(CHUNK).collect();
        let hit = chunk
            .par_iter()
            .enumerate()
            .map(|(k, item)| probe(item).map(|r| r.map(|cx| (k, cx))))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        match hit {
            Some(Ok(Some((k, cx)))) => return Ok((Some(cx), seen + k as u64 + 1)),
            Some(Err(e)) => return Err(e),
            _ => seen += chunk.len() as u64,
        }
    }
    Ok((None, seen))
}

/// Bounded check of `property` for `op`: exhaustive over the class up to `bounds.max_size`, then
/// `bounds.samples` seeded random structures up to `bounds.sample_max_size`.
pub fn check(op: &Oracle, property: Property, bounds: &Bounds, seed: u64) -> Result<Verdict> {
    let signature: Vec<String> = op.symbols().into_iter().collect();
    let class = bounds.class.unwrap_or_else(|| property.default_class());
    let ctx = Ctx {
        op: op.compile()?,
        property,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (found, exhaustive, random) = if property == Property::Homsafe {
        let opts = EnumerateOptions::new(bounds.pair_max_size, class);
        let pool: Vec<(Structure, Relation)> = enumerate_structures(&signature, opts)?
            .map(|s| {
                let out = ctx.op.eval(&s)?;
                Ok((s, out))
            })
            .collect::<Result<_>>()?;
        let n = pool.len();
        let (cx, exh) = first_failure(0..n * n, |&k| hom_probe(&pool[k / n], &pool[k % n]))?;
        if cx.is_some() {
            (cx, exh, 0)
        } else {
            let samples: Vec<(Structure, Structure, Vec<usize>)> = (0..bounds.samples)
                .map(|_| random_hom(&mut rng, &signature, class, bounds.sample_max_size))
                .collect();
            let (cx, rnd) = first_failure(samples.into_iter(), |(a, b, h)| {
                let (oa, ob) = (ctx.op.eval(a)?, ctx.op.eval(b)?);
                Ok(hom_violation(a, &oa, b, &ob, h))
            })?;
            (cx, exh, rnd)
        }
    } else {
        let stream = enumerate_structures(&signature, EnumerateOptions::new(bounds.max_size, class))?;
        let (cx, exh) = first_failure(stream, |s| ctx.probe_all(s))?;
        if cx.is_some() {
            (cx, exh, 0)
        } else {
            let samples: Vec<(Structure, u64)> = (0..bounds.samples)
                .map(|_| {
                    let size = rng.gen_range(1..=bounds.sample_max_size.max(1));
                    (random_structure_with(&mut rng, size, &signature, class), rng.gen())
                })
                .collect();
            let (cx, rnd) = first_failure(samples.into_iter(), |(s, sub_seed)| ctx.probe_sampled(s, *sub_seed))?;
            (cx, exh, rnd)
        }
    };

    let reverified = match &found {
        Some(cx) => reverify(op, property, cx)?,
        None => false,
    };
    Ok(Verdict {
        property,
        operation: op.to_string(),
        status: if found.is_some() { Status::Fail } else { Status::PassBounded },
        counterexample: found,
        bounds: bounds.clone(),
        class,
        seed,
        exhaustive_checked: exhaustive,
        random_checked: random,
        reverified,
    })
}

struct Ctx {
    op: CompiledOracle,
    property: Property,
}

impl Ctx {
    fn probe_all(&self, s: &Structure) -> Probe {
        match self.property {
            Property::Subsafe => {
                let out = self.op.eval(s)?;
                let n = s.size();
                for mask in 1..(1u64 << n) - 1 {
                    let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    if let Some(cx) = self.sub_probe(s, &out, &keep)? {
                        return Ok(Some(cx));
                    }
                }
                Ok(None)
            }
            _ => self.probe_sampled(s, 0),
        }
    }

    /// Same as [`Ctx::probe_all`] except that ⊆-safety only tries a few random subsets.
    fn probe_sampled(&self, s: &Structure, seed: u64) -> Probe {
        let out = self.op.eval(s)?;
        match self.property {
            Property::Fp | Property::Tfp | Property::Ifp => Ok(class_violation(self.property, s, &out)),
            Property::Subsafe => {
                let n = s.size();
                if n < 2 {
                    return Ok(None);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..RANDOM_SUBSETS {
                    let k = rng.gen_range(1..n);
                    let mut keep = sample(&mut rng, n, k).into_vec();
                    keep.sort_unstable();
                    if let Some(cx) = self.sub_probe(s, &out, &keep)? {
                        return Ok(Some(cx));
                    }
                }
                Ok(None)
            }
            Property::Forward | Property::Local => {
                let mode = if self.property == Property::Forward { Mode::Forward } else { Mode::Undirected };
                for a in 0..s.size() {
                    if let Some(cx) = self.reach_probe(s, &out, a, mode)? {
                        return Ok(Some(cx));
                    }
                }
                Ok(None)
            }
            Property::Homsafe => unreachable!("pairs are probed separately"),
        }
    }

    fn sub_probe(&self, b: &Structure, out_b: &Relation, keep: &[usize]) -> Probe {
        let a = b.induced(keep);
        let out_a = self.op.eval(&a)?;
        let lost = out_a.pairs().find(|&(i, j)| !out_b.contains(keep[i], keep[j]));
        Ok(lost
            .map(|(i, j)| Counterexample {
                map: Some(keep.iter().map(|&k| (b.name(k).to_string(), b.name(k).to_string())).collect()),
                pair: Some((a.name(i).to_string(), a.name(j).to_string())),
                explanation: format!(
                    "({},{}) is in O(A) for the induced substructure A but not in O(B)",
                    a.name(i),
                    a.name(j)
                ),
                structures: vec![a, b.clone()],
            }))
    }

    fn reach_probe(&self, s: &Structure, out: &Relation, a: usize, mode: Mode) -> Probe {
        let keep: Vec<usize> = distances(s, a, s.size(), mode)
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|_| i))
            .collect();
        let g = s.induced(&keep);
        let out_g = self.op.eval(&g)?;
        let ga = keep.iter().position(|&k| k == a).unwrap();
        for b in 0..s.size() {
            let in_g = keep.iter().position(|&k| k == b).is_some_and(|gb| out_g.contains(ga, gb));
            if in_g != out.contains(a, b) {
                let (an, bn) = (s.name(a), s.name(b));
                let explanation = if in_g {
                    format!("({an},{bn}) is in O(A_{an}) but not in O(A)")
                } else {
                    format!("({an},{bn}) is in O(A) but not in O(A_{an})")
                };
                return Ok(Some(Counterexample {
                    map: Some(keep.iter().map(|&k| (s.name(k).to_string(), s.name(k).to_string())).collect()),
                    pair: Some((an.to_string(), bn.to_string())),
                    explanation,
                    structures: vec![s.clone(), g],
                }));
            }
        }
        Ok(None)
    }
}

fn target_class(p: Property) -> StructureClass {
    match p {
        Property::Fp => StructureClass::PartialFunctions,
        Property::Tfp => StructureClass::TotalFunctions,
        _ => StructureClass::InjectivePartialFunctions,
    }
}

fn class_violation(p: Property, s: &Structure, out: &Relation) -> Option<Counterexample> {
    let class = target_class(p);
    if class.contains(out) {
        return None;
    }
    let n = s.size();
    let named = |i: usize, j: usize| Some((s.name(i).to_string(), s.name(j).to_string()));
    let (pair, explanation) = if let Some(i) = (0..n).find(|&i| out.out_degree(i) > 1) {
        let j = out.successors(i).nth(1).unwrap();
        (named(i, j), format!("{} has several images in O(A)", s.name(i)))
    } else if let Some(j) = (0..n).find(|&j| class == StructureClass::InjectivePartialFunctions && out.in_degree(j) > 1) {
        let i = out.predecessors(j).nth(1).unwrap();
        (named(i, j), format!("{} has several preimages in O(A)", s.name(j)))
    } else {
        let i = (0..n).find(|&i| !out.has_successor(i)).unwrap();
        (None, format!("{} has no image in O(A)", s.name(i)))
    };
    Some(Counterexample {
        structures: vec![s.clone()],
        map: None,
        pair,
        explanation: format!("O(A) is not in {class}: {explanation}"),
    })
}

fn hom_violation(a: &Structure, oa: &Relation, b: &Structure, ob: &Relation, h: &[usize]) -> Option<Counterexample> {
    let (i, j) = oa.pairs().find(|&(i, j)| !ob.contains(h[i], h[j]))?;
    Some(Counterexample {
        map: Some((0..a.size()).map(|k| (a.name(k).to_string(), b.name(h[k]).to_string())).collect()),
        pair: Some((a.name(i).to_string(), a.name(j).to_string())),
        explanation: format!(
            "({},{}) is in O(A) but its image ({},{}) is not in O(B)",
            a.name(i),
            a.name(j),
            b.name(h[i]),
            b.name(h[j])
        ),
        structures: vec![a.clone(), b.clone()],
    })
}

fn hom_probe((a, oa): &(Structure, Relation), (b, ob): &(Structure, Relation)) -> Probe {
    if oa.is_empty() {
        return Ok(None);
    }
    for h in homomorphisms(a, b, usize::MAX)? {
        if let Some(cx) = hom_violation(a, oa, b, ob, &h) {
            return Ok(Some(cx));
        }
    }
    Ok(None)
}

/// A random `A`, a random map into a domain no larger, and `B` containing the image of `A`;
/// half of the time `B` also gets random extra pairs.
fn random_hom<R: Rng>(rng: &mut R, sig: &[String], class: StructureClass, max: usize) -> (Structure, Structure, Vec<usize>) {
    let n = rng.gen_range(1..=max.max(1));
    let a = random_structure_with(rng, n, sig, class);
    let m = rng.gen_range(1..=n);
    let h: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let map: Vec<Option<usize>> = h.iter().map(|&x| Some(x)).collect();
    let extra = rng.gen_bool(0.5).then(|| random_structure_with(rng, m, sig, StructureClass::All));
    let mut b = Structure::from_parts(crate::structures::Domain::numbered(m), Default::default());
    for (name, r) in a.relations() {
        let mut img = r.remap(&map, m);
        if let Some(e) = &extra {
            let noise = e.relation(name).unwrap();
            // keep the extra pairs sparse so that negative features survive
            img = img.union(&noise.intersection(&noise.converse().complement()));
        }
        b = b.with_relation(name, img);
    }
    (a, b, h)
}

/// Evaluation without the compiled or sliced fast paths.
fn direct(op: &Oracle, s: &Structure) -> Result<Relation> {
    match op {
        Oracle::Term(t) => eval(t, s),
        Oracle::Formula { formula, x, y } => {
            let c = CompiledFormula::new(formula);
            let (sx, sy) = (c.slot(x), c.slot(y));
            let mut env = vec![0; c.slot_count().max(1)];
            let n = s.size();
            let mut out = Relation::empty(n);
            for i in 0..n {
                for j in 0..n {
                    if sx.is_some() && sx == sy && i != j {
                        continue;
                    }
                    if let Some(k) = sx {
                        env[k] = i;
                    }
                    if let Some(k) = sy {
                        env[k] = j;
                    }
                    if c.holds(s, &mut env)? {
                        out.insert(i, j);
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Confirms a failure witness from scratch.
pub(crate) fn reverify(op: &Oracle, property: Property, cx: &Counterexample) -> Result<bool> {
    let first = &cx.structures[0];
    let out = direct(op, first)?;
    let idx = |s: &Structure, name: &str| s.index_of(name);
    Ok(match property {
        Property::Fp | Property::Tfp | Property::Ifp => !target_class(property).contains(&out),
        Property::Homsafe => {
            let b = &cx.structures[1];
            let map = cx.map.as_ref().expect("homomorphism witness");
            let h: Vec<usize> = map.iter().map(|(_, y)| idx(b, y)).collect::<Result<_>>()?;
            let (p, q) = cx.pair.as_ref().expect("pair");
            let (i, j) = (idx(first, p)?, idx(first, q)?);
            is_homomorphism(first, b, &h) && out.contains(i, j) && !direct(op, b)?.contains(h[i], h[j])
        }
        Property::Subsafe => {
            let b = &cx.structures[1];
            let keep: Vec<usize> = (0..first.size()).map(|k| idx(b, first.name(k))).collect::<Result<_>>()?;
            let (p, q) = cx.pair.as_ref().expect("pair");
            let (i, j) = (idx(first, p)?, idx(first, q)?);
            b.induced(&keep) == *first && out.contains(i, j) && !direct(op, b)?.contains(keep[i], keep[j])
        }
        Property::Forward | Property::Local => {
            let mode = if property == Property::Forward { Mode::Forward } else { Mode::Undirected };
            let (p, q) = cx.pair.as_ref().expect("pair");
            let (a, b) = (idx(first, p)?, idx(first, q)?);
            let g = crate::structures::generated_substructure(first, p, mode)?;
            if g != cx.structures[1] {
                return Ok(false);
            }
            let in_g = match g.index_of(q) {
                Ok(gb) => direct(op, &g)?.contains(g.index_of(p)?, gb),
                Err(_) => false,
            };
            in_g != out.contains(a, b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::Bounds;

    fn run(op: &str, p: Property) -> Verdict {
        let op = Oracle::parse(op).unwrap();
        check(&op, p, &Bounds::for_oracle(&op), 7).unwrap()
    }

    fn failing(op: &str, p: Property) -> Counterexample {
        let v = run(op, p);
        assert_eq!(v.status, Status::Fail, "{op} should fail {p}");
        assert!(v.reverified, "{op}: witness did not re-verify");
        v.counterexample.unwrap()
    }

    #[test]
    fn function_preservation() {
        assert!(run("f & g", Property::Fp).passed());
        let cx = failing("f | g", Property::Fp);
        assert!(cx.max_domain() <= 3);
        failing("f^", Property::Tfp);
        assert!(run("f ; g", Property::Tfp).passed());
        assert!(run("f^ ; g", Property::Ifp).passed());
    }

    #[test]
    fn homomorphism_safety() {
        let cx = failing("-f", Property::Homsafe);
        // a loopless point mapped onto a loop
        assert_eq!(cx.max_domain(), 1);
        assert!(run("f ; g", Property::Homsafe).passed());
        assert!(failing("~f", Property::Homsafe).max_domain() <= 2);
    }

    #[test]
    fn substructure_safety() {
        assert!(run("f \\ g", Property::Subsafe).passed());
        // quantifier-free, so induced substructures cannot lose pairs
        assert!(run("-f", Property::Subsafe).passed());
        failing("~f", Property::Subsafe);
        failing("f <+ g", Property::Subsafe);
    }

    #[test]
    fn forwardness() {
        let cx = failing("ran(f)", Property::Forward);
        assert_eq!(cx.pair, Some(("2".into(), "2".into())));
        assert!(run("dom(f)", Property::Forward).passed());
        failing("T", Property::Forward);
        assert!(run("ran(f)", Property::Local).passed());
    }

    #[test]
    fn formulas_are_checked_too() {
        let v = run("fo: exists z. (f(x,z) & g(z,y))", Property::Fp);
        assert!(v.passed());
        failing("fo: !f(x,y)", Property::Homsafe);
    }
}
