//! Bit-sliced exhaustive comparison of two oracles.
//!
//! Every structure over a signature `S` and domain size `n` is a bit string of `|S|·n²` atoms.
//! Structures are processed 64 at a time: each atom becomes a `u64` whose lane `ℓ` says whether
//! the atom holds in structure `64·batch + ℓ`. Terms are evaluated as `n²` words per subterm and
//! formulas as one word per assignment of their variables, so one pass of word operations
//! decides 64 structures at once.

use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::oracle::Oracle;
use crate::structures::{Domain, Relation, Structure};
use crate::terms::{CompiledTerm, Op};
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::terms::Node;

const LANES: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Largest atom count accepted (2^34 structures).
pub(crate) const MAX_ATOMS: usize = 34;

const CHUNK: u64 = 512;

#[derive(Clone, Debug)]
pub(crate) struct Disagreement {
    pub structure: Structure,
    pub pair: (usize, usize),
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Comparison {
    pub disagreement: Option<Disagreement>,
    pub structures: u128,
}

struct TermProg {
    nodes: Vec<Node>,
    sym: Vec<usize>,
}

enum FOp {
    Const(bool),
    Atom(Vec<u32>),
    Eq(Vec<bool>),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Quant { exists: bool, child: usize, base: Vec<u32>, stride: usize },
}

struct FormProg {
    ops: Vec<FOp>,
    table: usize,
    x: usize,
    y: usize,
    stride: Vec<usize>,
}

enum Prog {
    Term(TermProg),
    Formula(FormProg),
}

fn term_prog(c: &CompiledTerm, signature: &[String]) -> TermProg {
    TermProg {
        nodes: c.nodes().to_vec(),
        sym: c
            .symbols()
            .iter()
            .map(|s| signature.iter().position(|t| t == s).expect("symbol in signature"))
            .collect(),
    }
}

fn formula_prog(f: &Formula, x: &str, y: &str, signature: &[String], n: usize) -> FormProg {
    let mut slots = vec![x.to_string(), y.to_string()];
    for v in f.variables() {
        if !slots.contains(&v) {
            slots.push(v);
        }
    }
    let k = slots.len();
    let stride: Vec<usize> = (0..k).map(|s| n.pow(s as u32)).collect();
    let table = n.pow(k as u32);
    let digit = |a: usize, s: usize| (a / stride[s]) % n;
    let slot = |v: &str| slots.iter().position(|s| s == v).unwrap();
    let mut ops = Vec::new();
    fn lower(
        f: &Formula,
        ops: &mut Vec<FOp>,
        ctx: &dyn Fn(&Formula) -> FOp,
        quant: &dyn Fn(&str, bool, usize) -> FOp,
    ) -> usize {
        let op = match f {
            Formula::Not(g) => FOp::Not(lower(g, ops, ctx, quant)),
            Formula::And(l, r) => {
                let l = lower(l, ops, ctx, quant);
                FOp::And(l, lower(r, ops, ctx, quant))
            }
            Formula::Or(l, r) => {
                let l = lower(l, ops, ctx, quant);
                FOp::Or(l, lower(r, ops, ctx, quant))
            }
            Formula::Implies(l, r) => {
                let l = lower(l, ops, ctx, quant);
                FOp::Implies(l, lower(r, ops, ctx, quant))
            }
            Formula::Exists(v, g) => {
                let c = lower(g, ops, ctx, quant);
                quant(v, true, c)
            }
            Formula::Forall(v, g) => {
                let c = lower(g, ops, ctx, quant);
                quant(v, false, c)
            }
            leaf => ctx(leaf),
        };
        ops.push(op);
        ops.len() - 1
    }
    let leaf = |f: &Formula| match f {
        Formula::True => FOp::Const(true),
        Formula::False => FOp::Const(false),
        Formula::Atom(r, u, v) => {
            let s = signature.iter().position(|t| t == r).expect("symbol in signature");
            let (su, sv) = (slot(u), slot(v));
            FOp::Atom((0..table).map(|a| ((s * n + digit(a, su)) * n + digit(a, sv)) as u32).collect())
        }
        Formula::Eq(u, v) => {
            let (su, sv) = (slot(u), slot(v));
            FOp::Eq((0..table).map(|a| digit(a, su) == digit(a, sv)).collect())
        }
        _ => unreachable!(),
    };
    let quant = |v: &str, exists: bool, child: usize| {
        let s = slot(v);
        FOp::Quant {
            exists,
            child,
            base: (0..table).map(|a| (a - digit(a, s) * stride[s]) as u32).collect(),
            stride: stride[s],
        }
    };
    lower(f, &mut ops, &leaf, &quant);
    FormProg {
        ops,
        table,
        x: 0,
        y: 1,
        stride,
    }
}

struct Scratch {
    atoms: Vec<u64>,
    buf: Vec<u64>,
}

impl Prog {
    fn scratch_len(&self, n: usize) -> usize {
        match self {
            Prog::Term(p) => p.nodes.len() * n * n,
            Prog::Formula(p) => p.ops.len() * p.table,
        }
    }

    /// Evaluates on the current batch; returns the words for every pair `(i, j)`, row-major.
    fn run(&self, n: usize, atoms: &[u64], buf: &mut [u64], out: &mut [u64]) {
        match self {
            Prog::Term(p) => run_term(p, n, atoms, buf, out),
            Prog::Formula(p) => run_formula(p, n, atoms, buf, out),
        }
    }
}

fn run_term(p: &TermProg, n: usize, atoms: &[u64], buf: &mut [u64], out: &mut [u64]) {
    let nn = n * n;
    for (k, node) in p.nodes.iter().enumerate() {
        let (prev, rest) = buf.split_at_mut(k * nn);
        let o = &mut rest[..nn];
        let at = |i: usize| &prev[i * nn..(i + 1) * nn];
        match *node {
            Node::Sym(s) => o.copy_from_slice(&atoms[p.sym[s] * nn..(p.sym[s] + 1) * nn]),
            Node::Const(op) => {
                for i in 0..n {
                    for j in 0..n {
                        o[i * n + j] = match op {
                            Op::Id => if i == j { !0 } else { 0 },
                            Op::Empty => 0,
                            _ => !0,
                        };
                    }
                }
            }
            Node::Unary(op, c) => {
                let x = at(c);
                match op {
                    Op::Complement => o.iter_mut().zip(x).for_each(|(o, x)| *o = !x),
                    Op::Converse => {
                        for i in 0..n {
                            for j in 0..n {
                                o[i * n + j] = x[j * n + i];
                            }
                        }
                    }
                    Op::Domain | Op::Range | Op::Antidomain => {
                        o.fill(0);
                        for i in 0..n {
                            let mut any = 0;
                            for k in 0..n {
                                any |= if op == Op::Range { x[k * n + i] } else { x[i * n + k] };
                            }
                            o[i * n + i] = if op == Op::Antidomain { !any } else { any };
                        }
                    }
                    _ => unreachable!(),
                }
            }
            Node::Binary(op, l, r) => {
                let (l, r) = (at(l), at(r));
                match op {
                    Op::Union => (0..nn).for_each(|i| o[i] = l[i] | r[i]),
                    Op::Intersection => (0..nn).for_each(|i| o[i] = l[i] & r[i]),
                    Op::Difference => (0..nn).for_each(|i| o[i] = l[i] & !r[i]),
                    Op::Composition => {
                        for i in 0..n {
                            for j in 0..n {
                                let mut w = 0;
                                for k in 0..n {
                                    w |= l[i * n + k] & r[k * n + j];
                                }
                                o[i * n + j] = w;
                            }
                        }
                    }
                    Op::Semijoin => {
                        for j in 0..n {
                            let mut any = 0;
                            for k in 0..n {
                                any |= r[j * n + k];
                            }
                            for i in 0..n {
                                o[i * n + j] = l[i * n + j] & any;
                            }
                        }
                    }
                    Op::PrefUnion => {
                        for i in 0..n {
                            let mut any = 0;
                            for k in 0..n {
                                any |= l[i * n + k];
                            }
                            for j in 0..n {
                                o[i * n + j] = l[i * n + j] | (r[i * n + j] & !any);
                            }
                        }
                    }
                    _ => unreachable!("injective union is expanded before slicing"),
                }
            }
        }
    }
    let last = p.nodes.len() - 1;
    out.copy_from_slice(&buf[last * nn..(last + 1) * nn]);
}

fn run_formula(p: &FormProg, n: usize, atoms: &[u64], buf: &mut [u64], out: &mut [u64]) {
    let t = p.table;
    for (k, op) in p.ops.iter().enumerate() {
        let (prev, rest) = buf.split_at_mut(k * t);
        let o = &mut rest[..t];
        let at = |i: usize| &prev[i * t..(i + 1) * t];
        match op {
            FOp::Const(b) => o.fill(if *b { !0 } else { 0 }),
            FOp::Atom(idx) => (0..t).for_each(|a| o[a] = atoms[idx[a] as usize]),
            FOp::Eq(mask) => (0..t).for_each(|a| o[a] = if mask[a] { !0 } else { 0 }),
            FOp::Not(c) => {
                let c = at(*c);
                (0..t).for_each(|a| o[a] = !c[a]);
            }
            FOp::And(l, r) => {
                let (l, r) = (at(*l), at(*r));
                (0..t).for_each(|a| o[a] = l[a] & r[a]);
            }
            FOp::Or(l, r) => {
                let (l, r) = (at(*l), at(*r));
                (0..t).for_each(|a| o[a] = l[a] | r[a]);
            }
            FOp::Implies(l, r) => {
                let (l, r) = (at(*l), at(*r));
                (0..t).for_each(|a| o[a] = !l[a] | r[a]);
            }
            FOp::Quant {
                exists,
                child,
                base,
                stride,
            } => {
                let c = at(*child);
                for a in 0..t {
                    let b = base[a] as usize;
                    let mut w = if *exists { 0 } else { !0 };
                    for e in 0..n {
                        w = if *exists { w | c[b + e * stride] } else { w & c[b + e * stride] };
                    }
                    o[a] = w;
                }
            }
        }
    }
    let root = &buf[(p.ops.len() - 1) * t..p.ops.len() * t];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = root[i * p.stride[p.x] + j * p.stride[p.y]];
        }
    }
}

fn prepare(o: &Oracle, signature: &[String], n: usize) -> Result<Prog> {
    Ok(match o {
        Oracle::Term(t) => {
            let t = t.expand_injective_union();
            Prog::Term(term_prog(&CompiledTerm::new(&t), signature))
        }
        Oracle::Formula { formula, x, y } => {
            o.compile()?;
            Prog::Formula(formula_prog(formula, x, y, signature, n))
        }
    })
}

/// Decodes structure number `index` of size `n` over `signature`.
pub(crate) fn decode(signature: &[String], n: usize, index: u64) -> Structure {
    let nn = n * n;
    let rels: BTreeMap<String, Relation> = signature
        .iter()
        .enumerate()
        .map(|(s, name)| {
            let pairs = (0..nn)
                .filter(|&c| index >> (s * nn + c) & 1 == 1)
                .map(|c| (c / n, c % n));
            (name.clone(), Relation::from_pairs(n, pairs))
        })
        .collect();
    Structure::from_parts(Domain::numbered(n), rels)
}

/// Compares two oracles on every structure over the joint signature with `min..=max` elements.
#[cfg(test)]
pub(crate) fn compare_exhaustive(left: &Oracle, right: &Oracle, min_size: usize, max_size: usize) -> Result<Comparison> {
    let signature: Vec<String> = left.symbols().union(&right.symbols()).cloned().collect();
    compare_over(left, right, &signature, min_size, max_size)
}

pub(crate) fn compare_over(
    left: &Oracle,
    right: &Oracle,
    signature: &[String],
    min_size: usize,
    max_size: usize,
) -> Result<Comparison> {
    let mut checked: u128 = 0;
    for n in min_size.max(1)..=max_size {
        let atoms = signature.len() * n * n;
        if atoms > MAX_ATOMS {
            return Err(Error::BoundExceeded {
                what: "exhaustive atom count",
                value: atoms,
                bound: MAX_ATOMS,
            });
        }
        let (lp, rp) = (prepare(left, signature, n)?, prepare(right, signature, n)?);
        let total: u64 = 1 << atoms;
        let batches = total.div_ceil(64);
        let valid = if atoms >= 6 { !0u64 } else { (1u64 << total) - 1 };
        let chunks = batches.div_ceil(CHUNK);
        let found = (0..chunks).into_par_iter().find_map_first(|chunk| {
            let mut s = Scratch {
                atoms: vec![0; atoms.max(1)],
                buf: vec![0; lp.scratch_len(n).max(rp.scratch_len(n))],
            };
            let (mut lo, mut ro) = (vec![0u64; n * n], vec![0u64; n * n]);
            let end = ((chunk + 1) * CHUNK).min(batches);
            for batch in chunk * CHUNK..end {
                for (v, w) in s.atoms.iter_mut().enumerate().take(atoms) {
                    *w = if v < 6 {
                        LANES[v]
                    } else if batch >> (v - 6) & 1 == 1 {
                        !0
                    } else {
                        0
                    };
                }
                lp.run(n, &s.atoms, &mut s.buf, &mut lo);
                rp.run(n, &s.atoms, &mut s.buf, &mut ro);
                let mut best: Option<(u32, usize)> = None;
                for c in 0..n * n {
                    let diff = (lo[c] ^ ro[c]) & valid;
                    if diff != 0 {
                        let lane = diff.trailing_zeros();
                        if best.is_none_or(|(l, _)| lane < l) {
                            best = Some((lane, c));
                        }
                    }
                }
                if let Some((lane, c)) = best {
                    let index = batch * 64 + lane as u64;
                    return Some((index, c, lo[c] >> lane & 1 == 1, ro[c] >> lane & 1 == 1));
                }
            }
            None
        });
        if let Some((index, c, l, r)) = found {
            checked += index as u128 + 1;
            return Ok(Comparison {
                disagreement: Some(Disagreement {
                    structure: decode(signature, n, index),
                    pair: (c / n, c % n),
                    left: l,
                    right: r,
                }),
                structures: checked,
            });
        }
        checked += total as u128;
    }
    Ok(Comparison {
        disagreement: None,
        structures: checked,
    })
}

/// Compares two oracles on a stream of structures over `signature`, packing consecutive
/// structures of equal size into the 64 lanes. Returns the first disagreement in stream order
/// and the number of structures consumed.
pub(crate) fn compare_on<I>(left: &Oracle, right: &Oracle, signature: &[String], structures: I) -> Result<(Option<Disagreement>, u64)>
where
    I: Iterator<Item = Structure>,
{
    let mut progs: BTreeMap<usize, (Prog, Prog)> = BTreeMap::new();
    let mut seen = 0u64;
    let mut stream = structures.peekable();
    while stream.peek().is_some() {
        // one chunk of batches, each batch holding up to 64 structures of a single size
        let mut batches: Vec<Vec<Structure>> = Vec::new();
        while batches.len() < CHUNK as usize {
            let Some(first) = stream.next() else { break };
            let n = first.size();
            let mut batch = vec![first];
            while batch.len() < 64 {
                match stream.peek() {
                    Some(s) if s.size() == n => batch.push(stream.next().unwrap()),
                    _ => break,
                }
            }
            batches.push(batch);
        }
        for b in &batches {
            let n = b[0].size();
            if let std::collections::btree_map::Entry::Vacant(e) = progs.entry(n) {
                e.insert((prepare(left, signature, n)?, prepare(right, signature, n)?));
            }
        }
        let found = batches.par_iter().enumerate().find_map_first(|(k, batch)| {
            let n = batch[0].size();
            let nn = n * n;
            let (lp, rp) = &progs[&n];
            let mut atoms = vec![0u64; (signature.len() * nn).max(1)];
            for (lane, s) in batch.iter().enumerate() {
                for (si, name) in signature.iter().enumerate() {
                    let r = s.relation(name).expect("structure over the signature");
                    for (i, j) in r.pairs() {
                        atoms[si * nn + i * n + j] |= 1 << lane;
                    }
                }
            }
            let mut buf = vec![0u64; lp.scratch_len(n).max(rp.scratch_len(n))];
            let (mut lo, mut ro) = (vec![0u64; nn], vec![0u64; nn]);
            lp.run(n, &atoms, &mut buf, &mut lo);
            rp.run(n, &atoms, &mut buf, &mut ro);
            let valid = if batch.len() == 64 { !0u64 } else { (1u64 << batch.len()) - 1 };
            let mut best: Option<(u32, usize)> = None;
            for c in 0..nn {
                let diff = (lo[c] ^ ro[c]) & valid;
                if diff != 0 {
                    let lane = diff.trailing_zeros();
                    if best.is_none_or(|(l, _)| lane < l) {
                        best = Some((lane, c));
                    }
                }
            }
            best.map(|(lane, c)| (k, lane as usize, c, lo[c] >> lane & 1 == 1, ro[c] >> lane & 1 == 1))
        });
        if let Some((k, lane, c, l, r)) = found {
            let before: usize = batches[..k].iter().map(Vec::len).sum();
            seen += (before + lane + 1) as u64;
            let structure = batches[k][lane].clone();
            let n = structure.size();
            return Ok((
                Some(Disagreement {
                    structure,
                    pair: (c / n, c % n),
                    left: l,
                    right: r,
                }),
                seen,
            ));
        }
        seen += batches.iter().map(|b| b.len() as u64).sum::<u64>();
    }
    Ok((None, seen))
}

/// Evaluates a formula on one structure with assignment tables (lane 0 only).
///
/// Cost is linear in `n^k` for `k` variables instead of exponential in quantifier depth.
/// Returns `None` when the table would be too large.
pub(crate) fn formula_relation_by_tables(f: &Formula, x: &str, y: &str, a: &Structure) -> Option<Relation> {
    let n = a.size();
    let signature: Vec<String> = f.symbols().into_iter().collect();
    let k = f.variables().into_iter().chain([x.to_string(), y.to_string()]).collect::<std::collections::BTreeSet<_>>().len();
    if n == 0 || (n as f64).powi(k as i32) > (1 << 20) as f64 {
        return None;
    }
    let nn = n * n;
    let mut atoms = vec![0u64; signature.len() * nn];
    for (s, name) in signature.iter().enumerate() {
        let r = a.relation(name)?;
        for (i, j) in r.pairs() {
            atoms[s * nn + i * n + j] = 1;
        }
    }
    let prog = formula_prog(f, x, y, &signature, n);
    let mut buf = vec![0u64; prog.ops.len() * prog.table];
    let mut out = vec![0u64; nn];
    if x == y {
        return None;
    }
    run_formula(&prog, n, &atoms, &mut buf, &mut out);
    Some(Relation::from_pairs(n, (0..nn).filter(|&c| out[c] & 1 == 1).map(|c| (c / n, c % n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::structures::{enumerate_structures, EnumerateOptions, StructureClass};

    fn term(s: &str) -> Oracle {
        Oracle::parse(s).unwrap()
    }

    #[test]
    fn every_operation_matches_the_plain_evaluator() {
        let sig = vec!["f".to_string(), "g".to_string()];
        let probes = [
            "f ; g", "f^", "-f", "dom(f)", "ran(g)", "~f", "f | g", "f & g", "f \\ g", "f |> g", "f <+ g",
            "f <# g", "id", "0", "T",
        ];
        for p in probes {
            let o = term(p);
            // compare against a deliberately wrong oracle and check the reported witness
            let shifted = Oracle::Term(crate::terms::parse_term(p).unwrap().union(Term::id()));
            let cmp = compare_over(&o, &shifted, &sig, 1, 2).unwrap();
            if let Some(d) = cmp.disagreement {
                let a = o.eval(&d.structure).unwrap();
                let b = shifted.eval(&d.structure).unwrap();
                assert_eq!(a.contains(d.pair.0, d.pair.1), d.left, "{p}");
                assert_eq!(b.contains(d.pair.0, d.pair.1), d.right, "{p}");
                assert_ne!(d.left, d.right);
            }
            assert!(compare_over(&o, &o, &sig, 1, 2).unwrap().disagreement.is_none());
        }
    }

    use crate::terms::Term;

    #[test]
    fn first_counterexample_is_the_first_in_enumeration_order() {
        let sig = vec!["f".to_string()];
        let (l, r) = (term("f ; f"), term("f"));
        let cmp = compare_over(&l, &r, &sig, 1, 3).unwrap();
        let d = cmp.disagreement.unwrap();
        let first = enumerate_structures(&sig, EnumerateOptions::new(3, StructureClass::All))
            .unwrap()
            .find(|s| l.eval(s).unwrap() != r.eval(s).unwrap())
            .unwrap();
        assert_eq!(d.structure, first);
    }

    #[test]
    fn formulas_and_terms() {
        let f = Oracle::formula(parse_formula("exists z. (f(x,z) & g(z,y))").unwrap());
        let cmp = compare_exhaustive(&f, &term("f ; g"), 1, 3).unwrap();
        assert!(cmp.disagreement.is_none());
        assert_eq!(cmp.structures, 4 + 256 + (1 << 18));
        let pad = Oracle::formula(parse_formula("exists z. f(x,z)").unwrap());
        assert!(compare_exhaustive(&pad, &term("f ; T"), 1, 3).unwrap().disagreement.is_none());
        let neg = Oracle::formula(parse_formula("forall z. (f(x,z) -> z=y) & !(x=y)").unwrap());
        let other = term("-(f ; -id) & -id");
        assert!(compare_exhaustive(&neg, &other, 1, 3).unwrap().disagreement.is_none());
    }

    #[test]
    fn shadowed_variables() {
        let f = Oracle::formula(parse_formula("exists z. (f(x,z) & exists x. (f(z,x) & f(x,y)))").unwrap());
        assert!(compare_exhaustive(&f, &term("f ; f ; f"), 1, 3).unwrap().disagreement.is_none());
    }

    #[test]
    fn packed_streams_match_plain_evaluation() {
        use crate::structures::{enumerate_structures, EnumerateOptions, StructureClass};
        let sig = vec!["f".to_string(), "g".to_string()];
        let stream = || enumerate_structures(&sig, EnumerateOptions::new(3, StructureClass::PartialFunctions)).unwrap();
        let (l, r) = (term("f ; g | g"), term("g | f ; g"));
        let (d, seen) = compare_on(&l, &r, &sig, stream()).unwrap();
        assert!(d.is_none());
        assert_eq!(seen as u128, stream().total());
        let (d, seen) = compare_on(&term("f <+ g"), &term("g <+ f"), &sig, stream()).unwrap();
        let d = d.unwrap();
        let first = stream()
            .position(|s| term("f <+ g").eval(&s).unwrap() != term("g <+ f").eval(&s).unwrap())
            .unwrap();
        assert_eq!(seen, first as u64 + 1);
        assert_ne!(d.left, d.right);
    }
}
