use super::eval::{apply_binary, apply_unary, constant};
use super::{Op, Term};
use crate::error::{Error, Result};
use crate::structures::{Relation, Structure};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Sym(usize),
    Const(Op),
    Unary(Op, usize),
    Binary(Op, usize, usize),
}

/// A term flattened into a hash-consed DAG in evaluation order.
///
/// Repeated subterms are evaluated once, which matters for the large folded terms produced
/// by synthesis.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    symbols: Vec<String>,
    nodes: Vec<Node>,
}

impl CompiledTerm {
    pub fn new(t: &Term) -> Self {
        let mut b = Builder::default();
        b.add(t);
        CompiledTerm {
            symbols: b.symbols,
            nodes: b.nodes,
        }
    }

    /// Number of distinct subterms.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn eval(&self, a: &Structure) -> Result<Relation> {
        let inputs = self
            .symbols
            .iter()
            .map(|s| a.relation(s).ok_or_else(|| Error::UnknownSymbol(s.clone())))
            .collect::<Result<Vec<_>>>()?;
        let n = a.size();
        let mut vals: Vec<Relation> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Sym(i) => inputs[i].clone(),
                Node::Const(op) => constant(op, n),
                Node::Unary(op, x) => apply_unary(op, &vals[x]),
                Node::Binary(op, l, r) => apply_binary(op, &vals[l], &vals[r]),
            };
            vals.push(v);
        }
        Ok(vals.pop().unwrap_or_else(|| Relation::empty(n)))
    }
}

#[derive(Default)]
struct Builder {
    symbols: Vec<String>,
    nodes: Vec<Node>,
    interned: HashMap<Node, usize>,
    seen: HashMap<*const Term, usize>,
}

impl Builder {
    fn intern(&mut self, node: Node) -> usize {
        if let Some(&i) = self.interned.get(&node) {
            return i;
        }
        self.nodes.push(node);
        self.interned.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn add(&mut self, t: &Term) -> usize {
        let key = t as *const Term;
        if let Some(&i) = self.seen.get(&key) {
            return i;
        }
        let node = match t {
            Term::Sym(s) => {
                let i = match self.symbols.iter().position(|x| **x == **s) {
                    Some(i) => i,
                    None => {
                        self.symbols.push(s.to_string());
                        self.symbols.len() - 1
                    }
                };
                Node::Sym(i)
            }
            Term::Const(op) => Node::Const(*op),
            Term::Unary(op, x) => Node::Unary(*op, self.add(x)),
            Term::Binary(op, l, r) => {
                let l = self.add(l);
                Node::Binary(*op, l, self.add(r))
            }
        };
        let i = self.intern(node);
        // only shared children have stable addresses worth remembering
        if !matches!(t, Term::Sym(_) | Term::Const(_)) {
            self.seen.insert(key, i);
        }
        i
    }
}
