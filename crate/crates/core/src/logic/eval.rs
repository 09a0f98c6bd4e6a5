use super::Formula;
use crate::error::{Error, Result};
use crate::structures::{Relation, Structure};
use std::collections::HashMap;

#[derive(Clone, Debug)]
enum Ir {
    True,
    False,
    Atom(usize, usize, usize),
    Eq(usize, usize),
    Not(Box<Ir>),
    And(Box<Ir>, Box<Ir>),
    Or(Box<Ir>, Box<Ir>),
    Implies(Box<Ir>, Box<Ir>),
    Exists(usize, Box<Ir>),
    Forall(usize, Box<Ir>),
}

/// A formula with variables resolved to environment slots and symbols to indices.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    source: Formula,
    ir: Ir,
    slots: Vec<String>,
    symbols: Vec<String>,
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> Self {
        let mut slots: Vec<String> = f.free_vars().into_iter().collect();
        for v in f.variables() {
            if !slots.contains(&v) {
                slots.push(v);
            }
        }
        let symbols: Vec<String> = f.symbols().into_iter().collect();
        let ir = lower(f, &slots, &symbols);
        CompiledFormula {
            source: f.clone(),
            ir,
            slots,
            symbols,
        }
    }

    pub fn slot(&self, v: &str) -> Option<usize> {
        self.slots.iter().position(|s| s == v)
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    fn inputs<'a>(&self, a: &'a Structure) -> Result<Vec<&'a Relation>> {
        self.symbols
            .iter()
            .map(|s| a.relation(s).ok_or_else(|| Error::UnknownSymbol(s.clone())))
            .collect()
    }

    /// Truth under `env`, which is indexed by slot.
    pub fn holds(&self, a: &Structure, env: &mut [usize]) -> Result<bool> {
        let rels = self.inputs(a)?;
        Ok(run(&self.ir, &rels, a.size(), env))
    }

    /// `{(i,j) | a ⊨ φ[x↦i, y↦j]}`; other free slots must be absent.
    pub fn relation(&self, a: &Structure, x: &str, y: &str) -> Result<Relation> {
        let rels = self.inputs(a)?;
        if let Some(r) = crate::sliced::formula_relation_by_tables(&self.source, x, y, a) {
            return Ok(r);
        }
        let n = a.size();
        let mut env = vec![0; self.slots.len().max(1)];
        let (sx, sy) = (self.slot(x), self.slot(y));
        let mut out = Relation::empty(n);
        for i in 0..n {
            for j in 0..n {
                if let Some(s) = sx {
                    env[s] = i;
                }
                if let Some(s) = sy {
                    env[s] = j;
                }
                if sx.is_some() && sx == sy && i != j {
                    continue;
                }
                if run(&self.ir, &rels, n, &mut env) {
                    out.insert(i, j);
                }
            }
        }
        Ok(out)
    }
}

fn lower(f: &Formula, slots: &[String], symbols: &[String]) -> Ir {
    let s = |v: &String| slots.iter().position(|x| x == v).expect("slot allocated");
    let b = |g: &Formula| Box::new(lower(g, slots, symbols));
    match f {
        Formula::True => Ir::True,
        Formula::False => Ir::False,
        Formula::Atom(r, x, y) => Ir::Atom(symbols.iter().position(|t| t == r).unwrap(), s(x), s(y)),
        Formula::Eq(x, y) => Ir::Eq(s(x), s(y)),
        Formula::Not(g) => Ir::Not(b(g)),
        Formula::And(l, r) => Ir::And(b(l), b(r)),
        Formula::Or(l, r) => Ir::Or(b(l), b(r)),
        Formula::Implies(l, r) => Ir::Implies(b(l), b(r)),
        Formula::Exists(v, g) => Ir::Exists(s(v), b(g)),
        Formula::Forall(v, g) => Ir::Forall(s(v), b(g)),
    }
}

fn run(ir: &Ir, rels: &[&Relation], n: usize, env: &mut [usize]) -> bool {
    match ir {
        Ir::True => true,
        Ir::False => false,
        Ir::Atom(r, x, y) => rels[*r].contains(env[*x], env[*y]),
        Ir::Eq(x, y) => env[*x] == env[*y],
        Ir::Not(g) => !run(g, rels, n, env),
        Ir::And(l, r) => run(l, rels, n, env) && run(r, rels, n, env),
        Ir::Or(l, r) => run(l, rels, n, env) || run(r, rels, n, env),
        Ir::Implies(l, r) => !run(l, rels, n, env) || run(r, rels, n, env),
        Ir::Exists(v, g) | Ir::Forall(v, g) => {
            let saved = env[*v];
            let want = matches!(ir, Ir::Exists(..));
            let mut result = !want;
            for e in 0..n {
                env[*v] = e;
                if run(g, rels, n, env) == want {
                    result = want;
                    break;
                }
            }
            env[*v] = saved;
            result
        }
    }
}

/// Truth of `f` in `a` under an assignment of element names to the free variables.
pub fn eval_formula(f: &Formula, a: &Structure, assignment: &HashMap<String, String>) -> Result<bool> {
    let c = CompiledFormula::new(f);
    let mut env = vec![0; c.slot_count()];
    for v in f.free_vars() {
        let name = assignment.get(&v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
        env[c.slot(&v).unwrap()] = a.index_of(name)?;
    }
    c.holds(a, &mut env)
}

/// The binary relation `f` defines with `x` as source and `y` as target.
///
/// Free variables must lie within `{x, y}`. Unless `pad` is set both must actually occur;
/// with `pad` a missing one ranges over the whole domain.
pub fn define_relation(f: &Formula, x: &str, y: &str, a: &Structure, pad: bool) -> Result<Relation> {
    let free = f.free_vars();
    let extra: Vec<String> = free.iter().filter(|v| *v != x && *v != y).cloned().collect();
    if !extra.is_empty() {
        return Err(Error::ExtraFreeVariables {
            allowed: format!("{x},{y}"),
            extra,
        });
    }
    if !pad {
        if let Some(v) = [x, y].into_iter().find(|v| !free.contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "variable {v} does not occur free; enable padding to leave it unconstrained"
            )));
        }
    }
    CompiledFormula::new(f).relation(a, x, y)
}
