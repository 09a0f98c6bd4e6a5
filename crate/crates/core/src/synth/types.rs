use crate::error::{Error, Result};
use crate::structures::{Domain, Relation, Structure, StructureClass};
use crate::terms::Term;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

/// The radius-`m` view from an element of a partial-function structure: which words of length
/// at most `m` have a path, and which of those paths end in the same element.
///
/// Letters `0..n` follow `f_1..f_n`; in oriented mode letters `n..2n` follow them backwards.
/// Nodes are numbered in breadth-first discovery order (letters in increasing order), so equal
/// views have equal encodings. Node 0 is the anchor. Only nodes below level `m` have their
/// successors listed; a level-`m` node in oriented mode additionally carries the reverse of
/// every edge pointing at it from below level `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborhoodType {
    pub symbols: usize,
    pub oriented: bool,
    pub radius: usize,
    pub level: Vec<usize>,
    pub succ: Vec<Vec<Option<usize>>>,
}

impl NeighborhoodType {
    pub fn letters(&self) -> usize {
        letter_count(self.symbols, self.oriented)
    }

    pub fn nodes(&self) -> usize {
        self.level.len()
    }

    /// Shortest, then lexicographically least, word reaching each node.
    pub fn representatives(&self) -> Vec<Vec<usize>> {
        let mut rep: Vec<Option<Vec<usize>>> = vec![None; self.nodes()];
        rep[0] = Some(Vec::new());
        for u in 0..self.nodes() {
            if self.level[u] == self.radius {
                continue;
            }
            let base = rep[u].clone().expect("nodes are discovered in order");
            for (l, s) in self.succ[u].iter().enumerate() {
                if let Some(v) = *s {
                    if rep[v].is_none() {
                        let mut w = base.clone();
                        w.push(l);
                        rep[v] = Some(w);
                    }
                }
            }
        }
        rep.into_iter().map(|w| w.expect("every node is reachable")).collect()
    }

    /// The type drawn as a structure over `symbols`; the anchor is element `n0`.
    pub fn realization(&self, symbols: &[String]) -> Result<Structure> {
        if symbols.len() != self.symbols {
            return Err(Error::InvalidParameter(format!(
                "type over {} symbols realized with {} names",
                self.symbols,
                symbols.len()
            )));
        }
        let k = self.nodes();
        let mut rels: Vec<Relation> = (0..self.symbols).map(|_| Relation::empty(k)).collect();
        for u in 0..k {
            for (l, s) in self.succ[u].iter().enumerate() {
                if let Some(v) = *s {
                    if l < self.symbols {
                        rels[l].insert(u, v);
                    } else {
                        rels[l - self.symbols].insert(v, u);
                    }
                }
            }
        }
        let names = (0..k).map(|i| format!("n{i}")).collect();
        let s = Structure::from_parts(
            Domain::new(names)?,
            symbols.iter().cloned().zip(rels).collect::<BTreeMap<_, _>>(),
        );
        let class = if self.oriented {
            StructureClass::InjectivePartialFunctions
        } else {
            StructureClass::PartialFunctions
        };
        if let Some(e) = s.class_violation(class) {
            return Err(e);
        }
        Ok(s)
    }

    pub fn word_name(&self, w: &[usize], symbols: &[String]) -> String {
        if w.is_empty() {
            return "ε".into();
        }
        w.iter()
            .map(|&l| {
                if l < self.symbols {
                    symbols[l].clone()
                } else {
                    format!("{}^", symbols[l - self.symbols])
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for NeighborhoodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for u in 0..self.nodes() {
            if u > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{u}:")?;
            for s in &self.succ[u] {
                match s {
                    Some(v) => write!(f, " {v}")?,
                    None => write!(f, " -")?,
                }
            }
        }
        write!(f, "]")
    }
}

pub(crate) fn letter_count(n: usize, oriented: bool) -> usize {
    if oriented {
        2 * n
    } else {
        n
    }
}

pub(crate) fn inverse(l: usize, n: usize) -> usize {
    if l < n {
        l + n
    } else {
        l - n
    }
}

/// Type of element `a` in `s`, reading the symbols in the given order.
pub fn neighborhood_type(s: &Structure, a: &str, m: usize, oriented: bool, symbols: &[String]) -> Result<NeighborhoodType> {
    let class = if oriented {
        StructureClass::InjectivePartialFunctions
    } else {
        StructureClass::PartialFunctions
    };
    if let Some(e) = s.class_violation(class) {
        return Err(e);
    }
    let rels: Vec<&Relation> = symbols
        .iter()
        .map(|x| s.relation(x).ok_or_else(|| Error::UnknownSymbol(x.clone())))
        .collect::<Result<_>>()?;
    let n = symbols.len();
    let letters = letter_count(n, oriented);
    let step = |e: usize, l: usize| -> Option<usize> {
        if l < n {
            rels[l].image(e)
        } else {
            rels[l - n].predecessors(e).next()
        }
    };
    let root = s.index_of(a)?;
    let mut node_of: BTreeMap<usize, usize> = BTreeMap::from([(root, 0)]);
    let mut elems = vec![root];
    let mut level = vec![0];
    let mut succ: Vec<Vec<Option<usize>>> = vec![vec![None; letters]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if level[u] == m {
            continue;
        }
        for l in 0..letters {
            let Some(e) = step(elems[u], l) else { continue };
            let v = *node_of.entry(e).or_insert_with(|| {
                elems.push(e);
                level.push(level[u] + 1);
                succ.push(vec![None; letters]);
                queue.push_back(elems.len() - 1);
                elems.len() - 1
            });
            succ[u][l] = Some(v);
            if oriented {
                succ[v][inverse(l, n)] = Some(u);
            }
        }
    }
    Ok(NeighborhoodType {
        symbols: n,
        oriented,
        radius: m,
        level,
        succ,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Open,
    Empty,
    To(usize),
}

/// Every type over `n` symbols at radius `m`, each once, in canonical order (the order of the
/// choice sequence: no successor, then existing nodes by number, then a fresh node).
///
/// Fails once more than `budget` types have been produced.
pub fn enumerate_types(n: usize, m: usize, oriented: bool, budget: usize) -> Result<Vec<NeighborhoodType>> {
    if n == 0 {
        return Err(Error::InvalidParameter("at least one symbol is required".into()));
    }
    let letters = letter_count(n, oriented);
    let mut st = EnumState {
        n,
        m,
        oriented,
        letters,
        level: vec![0],
        slots: vec![vec![Slot::Open; letters]],
        out: Vec::new(),
        budget,
    };
    st.rec(0, 0)?;
    Ok(st.out)
}

struct EnumState {
    n: usize,
    m: usize,
    oriented: bool,
    letters: usize,
    level: Vec<usize>,
    slots: Vec<Vec<Slot>>,
    out: Vec<NeighborhoodType>,
    budget: usize,
}

impl EnumState {
    fn emit(&mut self) -> Result<()> {
        if self.out.len() == self.budget {
            return Err(Error::BoundExceeded {
                what: "neighborhood type count",
                value: self.budget + 1,
                bound: self.budget,
            });
        }
        let succ = self
            .slots
            .iter()
            .map(|row| row.iter().map(|s| if let Slot::To(v) = s { Some(*v) } else { None }).collect())
            .collect();
        self.out.push(NeighborhoodType {
            symbols: self.n,
            oriented: self.oriented,
            radius: self.m,
            level: self.level.clone(),
            succ,
        });
        Ok(())
    }

    fn set(&mut self, u: usize, l: usize, v: usize) {
        self.slots[u][l] = Slot::To(v);
        if self.oriented {
            self.slots[v][inverse(l, self.n)] = Slot::To(u);
        }
    }

    fn clear(&mut self, u: usize, l: usize, v: usize) {
        self.slots[u][l] = Slot::Open;
        if self.oriented {
            self.slots[v][inverse(l, self.n)] = Slot::Open;
        }
    }

    fn rec(&mut self, u: usize, l: usize) -> Result<()> {
        if u == self.level.len() || self.level[u] == self.m {
            // nodes are created level by level, so everything from here on sits at level m
            return self.emit();
        }
        if l == self.letters {
            return self.rec(u + 1, 0);
        }
        if self.slots[u][l] != Slot::Open {
            return self.rec(u, l + 1);
        }
        self.slots[u][l] = Slot::Empty;
        self.rec(u, l + 1)?;
        self.slots[u][l] = Slot::Open;
        let inv = inverse(l, self.n);
        for v in 0..self.level.len() {
            if self.oriented && self.slots[v][inv] != Slot::Open {
                continue;
            }
            self.set(u, l, v);
            self.rec(u, l + 1)?;
            self.clear(u, l, v);
        }
        let fresh = self.level.len();
        self.level.push(self.level[u] + 1);
        self.slots.push(vec![Slot::Open; self.letters]);
        self.set(u, l, fresh);
        self.rec(u, l + 1)?;
        self.clear(u, l, fresh);
        self.level.pop();
        self.slots.pop();
        Ok(())
    }
}

/// `~(~f₁ ∘ f₁)`: the identity, which the target bases lack as a constant.
pub fn identity_term(first_symbol: &str) -> Term {
    Term::sym(first_symbol).anti().then(Term::sym(first_symbol)).anti()
}

/// Composition of the letters of `w`, or the identity encoding for the empty word.
pub fn path_term(w: &[usize], symbols: &[String]) -> Term {
    let n = symbols.len();
    let letter = |l: usize| {
        if l < n {
            Term::sym(&symbols[l])
        } else {
            Term::sym(&symbols[l - n]).converse()
        }
    };
    match w.split_first() {
        None => identity_term(&symbols[0]),
        Some((&first, rest)) => rest.iter().fold(letter(first), |acc, &l| acc.then(letter(l))),
    }
}

/// Intersection of `terms` as a balanced tree.
pub(crate) fn balanced(mut terms: Vec<Term>, join: fn(Term, Term) -> Term) -> Option<Term> {
    if terms.is_empty() {
        return None;
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => join(a, b),
                None => a,
            });
        }
        terms = next;
    }
    terms.pop()
}

/// A term that denotes `{(a,a) | the type of a is T}` on structures of the matching class.
///
/// Atoms: every node's representative word has a path; every slot below level `m` either has no
/// path (`~w`) or ends where the representative of its target ends (`~~(w ∩ w')`); the
/// representatives of distinct nodes end apart (`~(w ∩ w')`).
pub fn chi_term(t: &NeighborhoodType, symbols: &[String]) -> Term {
    let rep = t.representatives();
    let path = |w: &[usize]| path_term(w, symbols);
    let mut atoms = Vec::new();
    for w in rep.iter().skip(1) {
        atoms.push(path(w).anti().anti());
    }
    for u in 0..t.nodes() {
        if t.level[u] == t.radius {
            continue;
        }
        for (l, s) in t.succ[u].iter().enumerate() {
            let mut w = rep[u].clone();
            w.push(l);
            match *s {
                None => atoms.push(path(&w).anti()),
                Some(v) if rep[v] != w => atoms.push(path(&w).meet(path(&rep[v])).anti().anti()),
                Some(_) => {}
            }
        }
    }
    for u in 0..t.nodes() {
        for v in u + 1..t.nodes() {
            atoms.push(path(&rep[u]).meet(path(&rep[v])).anti());
        }
    }
    balanced(atoms, Term::meet).unwrap_or_else(|| identity_term(&symbols[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{enumerate_structures, EnumerateOptions};
    use crate::terms::eval;
    use std::collections::BTreeSet;

    fn syms(k: usize) -> Vec<String> {
        ["f", "g", "h"][..k].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn spec_examples() {
        let a = Structure::from_lists(&["1", "2"], &[("f", &[("1", "2")]), ("g", &[])]).unwrap();
        let t = neighborhood_type(&a, "1", 1, false, &syms(2)).unwrap();
        assert_eq!(t.nodes(), 2);
        assert_eq!(t.succ[0], vec![Some(1), None]);
        let t = neighborhood_type(&a, "2", 1, false, &syms(2)).unwrap();
        assert_eq!(t.nodes(), 1);
        let t = neighborhood_type(&a, "2", 1, true, &syms(2)).unwrap();
        assert_eq!(t.nodes(), 2);
        assert_eq!(t.succ[0], vec![None, None, Some(1), None]);
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_types(1, 0, false, 100).unwrap().len(), 1);
        assert_eq!(enumerate_types(1, 1, false, 100).unwrap().len(), 3);
        assert!(enumerate_types(2, 2, false, 10).is_err());
    }

    #[test]
    fn chi_shapes() {
        let s = syms(1);
        let types = enumerate_types(1, 1, false, 100).unwrap();
        assert_eq!(chi_term(&types[0], &s).to_string(), "~f");
        assert_eq!(chi_term(&types[1], &s).to_string(), "~~(f & ~(~f ; f))");
    }

    /// Types of all pointed structures up to `size` are exactly the enumerated ones, and each
    /// enumerated type round-trips through its realization.
    fn cross_check(n: usize, m: usize, oriented: bool, size: usize) {
        let s = syms(n);
        let types = enumerate_types(n, m, oriented, 1_000_000).unwrap();
        let set: BTreeSet<&NeighborhoodType> = types.iter().collect();
        assert_eq!(set.len(), types.len(), "duplicates");
        for t in &types {
            let r = t.realization(&s).unwrap();
            assert_eq!(&neighborhood_type(&r, "n0", m, oriented, &s).unwrap(), t);
        }
        let class = if oriented {
            StructureClass::InjectivePartialFunctions
        } else {
            StructureClass::PartialFunctions
        };
        let mut seen = BTreeSet::new();
        for a in enumerate_structures(&s, EnumerateOptions::new(size, class)).unwrap() {
            for e in 0..a.size() {
                let t = neighborhood_type(&a, a.name(e), m, oriented, &s).unwrap();
                assert!(set.contains(&t), "missing {t}");
                seen.insert(t);
            }
        }
        // every type with few enough nodes occurs in some small structure
        let small = types.iter().filter(|t| t.nodes() <= size).count();
        assert!(seen.len() >= small);
    }

    #[test]
    fn completeness_and_round_trip() {
        cross_check(1, 2, false, 5);
        cross_check(2, 1, false, 3);
        cross_check(1, 2, true, 4);
        cross_check(2, 1, true, 3);
    }

    #[test]
    fn chi_characterizes_small() {
        let s = syms(1);
        for m in 0..=2 {
            let types = enumerate_types(1, m, false, 1000).unwrap();
            let chis: Vec<Term> = types.iter().map(|t| chi_term(t, &s)).collect();
            let opts = EnumerateOptions::new(4, StructureClass::PartialFunctions);
            for a in enumerate_structures(&s, opts).unwrap() {
                let vals: Vec<Relation> = chis.iter().map(|c| eval(c, &a).unwrap()).collect();
                for e in 0..a.size() {
                    let t = neighborhood_type(&a, a.name(e), m, false, &s).unwrap();
                    for (k, ty) in types.iter().enumerate() {
                        assert!(vals[k].is_subset(&Relation::identity(a.size())));
                        assert_eq!(vals[k].contains(e, e), *ty == t);
                    }
                }
            }
        }
    }
}
