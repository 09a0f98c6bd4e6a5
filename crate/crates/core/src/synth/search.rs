use super::types::{inverse, letter_count, path_term, NeighborhoodType};
use crate::error::{Error, Result};
use crate::oracle::CompiledOracle;
use crate::structures::{Domain, Relation, Structure};
use crate::terms::Term;
use std::collections::{BTreeMap, HashMap};

/// One χ atom, over words given as letter sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// `~~w`: the path exists.
    Present(Vec<usize>),
    /// `~w`: the path does not exist.
    Absent(Vec<usize>),
    /// `~~(w ∩ w')`: both paths end in the same element.
    Meets(Vec<usize>, Vec<usize>),
    /// `~(w ∩ w')`: the paths do not end in the same element.
    Apart(Vec<usize>, Vec<usize>),
}

impl Atom {
    pub fn term(&self, symbols: &[String]) -> Term {
        let p = |w: &[usize]| path_term(w, symbols);
        match self {
            Atom::Present(w) => p(w).anti().anti(),
            Atom::Absent(w) => p(w).anti(),
            Atom::Meets(w, v) => p(w).meet(p(v)).anti().anti(),
            Atom::Apart(w, v) => p(w).meet(p(v)).anti(),
        }
    }

    pub fn render(&self, symbols: &[String]) -> String {
        let name = |w: &[usize]| word_name(w, symbols);
        match self {
            Atom::Present(w) => format!("{}↓", name(w)),
            Atom::Absent(w) => format!("¬{}↓", name(w)),
            Atom::Meets(w, v) => format!("{}={}", name(w), name(v)),
            Atom::Apart(w, v) => format!("{}≠{}", name(w), name(v)),
        }
    }
}

pub(crate) fn word_name(w: &[usize], symbols: &[String]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    let n = symbols.len();
    w.iter()
        .map(|&l| if l < n { symbols[l].clone() } else { format!("{}^", symbols[l - n]) })
        .collect::<Vec<_>>()
        .join(".")
}

/// A set of types sharing a prefix of slot decisions, all sent by the oracle along `word`.
#[derive(Clone, Debug)]
pub struct Emission {
    pub atoms: Vec<Atom>,
    pub word: Vec<usize>,
    /// Number of complete types the emission covers.
    pub types: usize,
}

enum Outcome {
    /// Every type below answers the same: `None` for no image, else the word reaching it.
    Uniform(Option<Vec<usize>>, usize),
    Mixed(Vec<Emission>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Open,
    Empty,
    To(usize),
}

pub(crate) struct Search<'a> {
    op: &'a CompiledOracle,
    symbols: &'a [String],
    n: usize,
    m: usize,
    oriented: bool,
    letters: usize,
    level: Vec<usize>,
    rep: Vec<Vec<usize>>,
    slots: Vec<Vec<Slot>>,
    pub leaves: usize,
    pub positive: usize,
    budget: usize,
    domains: Domains,
}

impl<'a> Search<'a> {
    pub fn new(op: &'a CompiledOracle, symbols: &'a [String], m: usize, oriented: bool, budget: usize) -> Self {
        let letters = letter_count(symbols.len(), oriented);
        Search {
            op,
            symbols,
            n: symbols.len(),
            m,
            oriented,
            letters,
            level: vec![0],
            rep: vec![Vec::new()],
            slots: vec![vec![Slot::Open; letters]],
            leaves: 0,
            positive: 0,
            budget,
            domains: Domains::default(),
        }
    }

    /// Walks every type and returns the emissions, in canonical type order.
    pub fn run(&mut self) -> Result<Vec<Emission>> {
        Ok(match self.rec(0, 0)? {
            Outcome::Uniform(None, _) => Vec::new(),
            Outcome::Uniform(Some(word), types) => vec![Emission {
                atoms: Vec::new(),
                word,
                types,
            }],
            Outcome::Mixed(v) => v,
        })
    }

    fn current(&self) -> NeighborhoodType {
        let succ = self
            .slots
            .iter()
            .map(|row| row.iter().map(|s| if let Slot::To(v) = s { Some(*v) } else { None }).collect())
            .collect();
        NeighborhoodType {
            symbols: self.n,
            oriented: self.oriented,
            radius: self.m,
            level: self.level.clone(),
            succ,
        }
    }

    fn leaf(&mut self) -> Result<Outcome> {
        self.leaves += 1;
        if self.leaves > self.budget {
            return Err(Error::BoundExceeded {
                what: "neighborhood type count",
                value: self.leaves,
                bound: self.budget,
            });
        }
        let k = self.level.len();
        let mut rels: Vec<Relation> = (0..self.n).map(|_| Relation::empty(k)).collect();
        for (u, row) in self.slots.iter().enumerate() {
            for (l, s) in row.iter().enumerate().take(self.n) {
                if let Slot::To(v) = *s {
                    rels[l].insert(u, v);
                }
            }
            if self.oriented {
                for (l, s) in row.iter().enumerate().skip(self.n) {
                    if let Slot::To(v) = *s {
                        rels[l - self.n].insert(v, u);
                    }
                }
            }
        }
        let mut domains = std::mem::take(&mut self.domains);
        let b = probe_parts(self.op, &self.level, self.m, self.oriented, rels, &mut domains, self.symbols, || self.current());
        self.domains = domains;
        let b = b?;
        if b.is_some() {
            self.positive += 1;
        }
        Ok(Outcome::Uniform(b.map(|b| self.rep[b].clone()), 1))
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

    fn rec(&mut self, u: usize, l: usize) -> Result<Outcome> {
        if u == self.level.len() || self.level[u] == self.m {
            return self.leaf();
        }
        if l == self.letters {
            return self.rec(u + 1, 0);
        }
        if self.slots[u][l] != Slot::Open {
            return self.rec(u, l + 1);
        }
        let mut w = self.rep[u].clone();
        w.push(l);
        let mut children: Vec<(Vec<Atom>, Outcome)> = Vec::new();

        self.slots[u][l] = Slot::Empty;
        children.push((vec![Atom::Absent(w.clone())], self.rec(u, l + 1)?));
        self.slots[u][l] = Slot::Open;

        let inv = inverse(l, self.n);
        for v in 0..self.level.len() {
            if self.oriented && self.slots[v][inv] != Slot::Open {
                continue;
            }
            self.set(u, l, v);
            let out = self.rec(u, l + 1)?;
            self.clear(u, l, v);
            children.push((vec![Atom::Meets(w.clone(), self.rep[v].clone())], out));
        }

        let fresh = self.level.len();
        let mut atoms = vec![Atom::Present(w.clone())];
        atoms.extend(self.rep.iter().map(|r| Atom::Apart(w.clone(), r.clone())));
        self.level.push(self.level[u] + 1);
        self.rep.push(w);
        self.slots.push(vec![Slot::Open; self.letters]);
        self.set(u, l, fresh);
        let out = self.rec(u, l + 1)?;
        self.clear(u, l, fresh);
        self.level.pop();
        self.rep.pop();
        self.slots.pop();
        children.push((atoms, out));

        Ok(merge(children))
    }
}

fn merge(children: Vec<(Vec<Atom>, Outcome)>) -> Outcome {
    let mut label: Option<&Option<Vec<usize>>> = None;
    let mut uniform = true;
    for (_, out) in &children {
        match out {
            Outcome::Uniform(w, _) if label.is_none_or(|x| x == w) => label = Some(w),
            _ => {
                uniform = false;
                break;
            }
        }
    }
    if uniform {
        let total = children.iter().map(|(_, o)| if let Outcome::Uniform(_, k) = o { *k } else { 0 }).sum();
        let w = label.cloned().flatten();
        return Outcome::Uniform(w, total);
    }
    let mut emissions = Vec::new();
    for (atoms, out) in children {
        match out {
            Outcome::Uniform(None, _) => {}
            Outcome::Uniform(Some(word), types) => emissions.push(Emission { atoms, word, types }),
            Outcome::Mixed(v) => emissions.extend(v.into_iter().map(|mut e| {
                let mut a = atoms.clone();
                a.append(&mut e.atoms);
                e.atoms = a;
                e
            })),
        }
    }
    Outcome::Mixed(emissions)
}

/// Domains for realizations (`n0..`) and their extensions (`n0.., x_k..`), built once per size.
#[derive(Default)]
struct Domains(HashMap<(usize, usize), Domain>);

impl Domains {
    fn get(&mut self, k: usize, total: usize) -> Domain {
        self.0
            .entry((k, total))
            .or_insert_with(|| {
                let names = (0..k).map(|i| format!("n{i}")).chain((k..total).map(|i| format!("x{i}"))).collect();
                Domain::new(names).expect("names are distinct")
            })
            .clone()
    }
}

fn assemble(domain: Domain, symbols: &[String], rels: Vec<Relation>) -> Structure {
    Structure::from_parts(domain, symbols.iter().cloned().zip(rels).collect::<BTreeMap<_, _>>())
}

/// The realization with every attachment that leaves the anchor's type intact added at once,
/// each through its own fresh element.
fn extension(level: &[usize], radius: usize, oriented: bool, rels: &[Relation], domains: &mut Domains, symbols: &[String]) -> Option<Structure> {
    let k = level.len();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut fresh = k;
    for (u, &lv) in level.iter().enumerate() {
        let boundary = lv == radius;
        for (si, rel) in rels.iter().enumerate() {
            // forward views never see predecessors; oriented views see them below the boundary
            if !oriented || (boundary && rel.in_degree(u) == 0) {
                edges.push((si, fresh, u));
                fresh += 1;
            }
            if boundary && !rel.has_successor(u) {
                edges.push((si, u, fresh));
                fresh += 1;
            }
        }
    }
    if edges.is_empty() {
        return None;
    }
    let embed: Vec<Option<usize>> = (0..k).map(Some).collect();
    let mut grown: Vec<Relation> = rels.iter().map(|r| r.remap(&embed, fresh)).collect();
    for (si, a, b) in edges {
        grown[si].insert(a, b);
    }
    Some(assemble(domains.get(k, fresh), symbols, grown))
}

fn root_row(op: &CompiledOracle, s: &Structure) -> Result<Vec<usize>> {
    Ok(op.eval(s)?.successors(0).collect())
}

/// Where the oracle sends the anchor, as a node of the view. The answer must be single-valued
/// and must not move when the realization is extended outside the view.
#[allow(clippy::too_many_arguments)]
fn probe_parts(
    op: &CompiledOracle,
    level: &[usize],
    radius: usize,
    oriented: bool,
    rels: Vec<Relation>,
    domains: &mut Domains,
    symbols: &[String],
    describe: impl Fn() -> NeighborhoodType,
) -> Result<Option<usize>> {
    let k = level.len();
    let ext = extension(level, radius, oriented, &rels, domains, symbols);
    let real = assemble(domains.get(k, k), symbols, rels);
    let row = root_row(op, &real)?;
    if row.len() > 1 {
        return Err(Error::NotFunctionPreserving(format!("{}; realization {}", describe(), real.to_json())));
    }
    if let Some(ext) = ext {
        if root_row(op, &ext)? != row {
            return Err(Error::NotBounded(format!(
                "{} (radius {radius}): answer changes on extension {}",
                describe(),
                ext.to_json()
            )));
        }
    }
    Ok(row.first().copied())
}
