use super::eval::{apply_binary, apply_unary, constant};
use super::{Basis, Term};
use crate::error::{Error, Result};
use crate::structures::{Relation, Structure};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    pub max_relations: usize,
    /// Stop as soon as this denotation is reached.
    pub target: Option<Relation>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            max_relations: 10_000,
            target: None,
        }
    }
}

/// Distinct denotations reachable from the generators, each with a smallest witness.
#[derive(Clone, Debug)]
pub struct Closure {
    pub members: Vec<(Relation, Term)>,
    /// False when the budget ran out or the search stopped at the target.
    pub complete: bool,
    pub target: Option<usize>,
}

impl Closure {
    pub fn witness(&self, r: &Relation) -> Option<&Term> {
        self.members.iter().find(|(x, _)| x == r).map(|(_, t)| t)
    }
}

struct State {
    members: Vec<(Relation, Term)>,
    index: HashMap<Relation, usize>,
    layers: Vec<Vec<usize>>,
}

enum Stop {
    Budget,
    Target(usize),
}

impl State {
    fn add(&mut self, r: Relation, t: Term, opts: &ClosureOptions) -> Result<(), Stop> {
        if self.index.contains_key(&r) {
            return Ok(());
        }
        let size = t.size();
        let hit = opts.target.as_ref() == Some(&r);
        if self.members.len() == opts.max_relations {
            return Err(Stop::Budget);
        }
        let i = self.members.len();
        self.index.insert(r.clone(), i);
        self.members.push((r, t));
        if self.layers.len() <= size {
            self.layers.resize(size + 1, Vec::new());
        }
        self.layers[size].push(i);
        if hit {
            return Err(Stop::Target(i));
        }
        Ok(())
    }

    fn max_witness(&self) -> usize {
        self.layers.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }
}

/// Least set of denotations over `a` containing the generators and the basis constants and
/// closed under the basis operations.
///
/// Works in layers of witness size, so every denotation keeps a minimal-size witness. A fixpoint
/// is certain once every size up to `2M + 1` has been swept without growth, `M` being the
/// largest witness size: no operation applied to members can produce anything larger.
pub fn semantic_closure(a: &Structure, generators: &[String], basis: Basis, opts: &ClosureOptions) -> Result<Closure> {
    let mut gens = generators.to_vec();
    gens.sort();
    gens.dedup();
    let mut st = State {
        members: Vec::new(),
        index: HashMap::new(),
        layers: vec![Vec::new(); 2],
    };
    let outcome = run(a, &gens, basis, opts, &mut st);
    let (complete, target) = match outcome {
        Ok(()) => (true, None),
        Err(Stop::Budget) => (false, None),
        Err(Stop::Target(i)) => (false, Some(i)),
    };
    if let Some(missing) = gens.iter().find(|g| a.relation(g).is_none()) {
        return Err(Error::UnknownSymbol(missing.clone()));
    }
    Ok(Closure {
        members: st.members,
        complete,
        target,
    })
}

fn run(a: &Structure, gens: &[String], basis: Basis, opts: &ClosureOptions, st: &mut State) -> Result<(), Stop> {
    for g in gens {
        let Some(r) = a.relation(g) else { return Ok(()) };
        st.add(r.clone(), Term::sym(g), opts)?;
    }
    for op in basis.constants() {
        st.add(constant(op, a.size()), Term::Const(op), opts)?;
    }
    let mut size = 2;
    while size <= 2 * st.max_witness() + 1 {
        for op in basis.unary() {
            let prev = st.layers.get(size - 1).cloned().unwrap_or_default();
            for i in prev {
                let (r, t) = &st.members[i];
                let (r, t) = (apply_unary(op, r), Term::unary(op, t.clone()));
                st.add(r, t, opts)?;
            }
        }
        for op in basis.binary() {
            for left in 1..size.saturating_sub(1) {
                let right = size - 1 - left;
                let ls = st.layers.get(left).cloned().unwrap_or_default();
                let rs = st.layers.get(right).cloned().unwrap_or_default();
                for &i in &ls {
                    for &j in &rs {
                        let r = apply_binary(op, &st.members[i].0, &st.members[j].0);
                        if st.index.contains_key(&r) {
                            continue;
                        }
                        let t = Term::binary(op, st.members[i].1.clone(), st.members[j].1.clone());
                        st.add(r, t, opts)?;
                    }
                }
            }
        }
        size += 1;
    }
    Ok(())
}

/// One extra sweep: does applying any basis operation to members stay inside the set?
pub fn closure_is_closed(a: &Structure, closure: &Closure, basis: Basis) -> bool {
    let set: std::collections::HashSet<&Relation> = closure.members.iter().map(|(r, _)| r).collect();
    let rels: Vec<&Relation> = closure.members.iter().map(|(r, _)| r).collect();
    basis.constants().all(|op| set.contains(&constant(op, a.size())))
        && basis
            .unary()
            .all(|op| rels.iter().all(|r| set.contains(&apply_unary(op, r))))
        && basis.binary().all(|op| {
            rels.iter()
                .all(|l| rels.iter().all(|r| set.contains(&apply_binary(op, l, r))))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{eval, Op};

    fn cycle3() -> Structure {
        Structure::from_lists(&["1", "2", "3"], &[("f", &[("1", "2"), ("2", "3"), ("3", "1")])]).unwrap()
    }

    #[test]
    fn composition_on_a_cycle() {
        let a = cycle3();
        let c = semantic_closure(&a, &["f".into()], Basis::of(&[Op::Composition]), &ClosureOptions::default()).unwrap();
        assert!(c.complete);
        assert_eq!(c.members.len(), 3);
        assert!(c.members.iter().any(|(r, _)| *r == Relation::identity(3)));
        for (r, t) in &c.members {
            assert_eq!(eval(t, &a).unwrap(), *r);
        }
        assert!(closure_is_closed(&a, &c, Basis::of(&[Op::Composition])));
    }

    #[test]
    fn empty_generators() {
        let a = Structure::from_lists(&["1", "2"], &[("f", &[])]).unwrap();
        let b = Basis::of(&[Op::Composition, Op::Intersection]);
        let c = semantic_closure(&a, &["f".into()], b, &ClosureOptions::default()).unwrap();
        assert_eq!(c.members.len(), 1);
        assert!(c.members[0].0.is_empty());
    }

    #[test]
    fn budget_and_target() {
        let a = cycle3();
        let opts = ClosureOptions {
            max_relations: 2,
            target: None,
        };
        let c = semantic_closure(&a, &["f".into()], Basis::tra(), &opts).unwrap();
        assert!(!c.complete);
        assert_eq!(c.members.len(), 2);
        let f2 = a.relation("f").unwrap().compose(a.relation("f").unwrap());
        let opts = ClosureOptions {
            max_relations: 100,
            target: Some(f2.clone()),
        };
        let c = semantic_closure(&a, &["f".into()], Basis::tra(), &opts).unwrap();
        let i = c.target.unwrap();
        assert_eq!(c.members[i].0, f2);
        // on a 3-cycle the converse already reaches f;f with a smaller witness
        assert_eq!(c.members[i].1.to_string(), "f^");
    }

    #[test]
    fn tra_closure_is_closed() {
        let a = cycle3();
        let c = semantic_closure(&a, &["f".into()], Basis::tra(), &ClosureOptions::default()).unwrap();
        assert!(c.complete);
        assert!(closure_is_closed(&a, &c, Basis::tra()));
    }
}
