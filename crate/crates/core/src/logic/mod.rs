//! First-order formulas over binary-relation signatures.

mod eval;
mod fo3;
mod syntax;

pub use eval::{define_relation, eval_formula, CompiledFormula};
pub use fo3::term_to_fo3;
pub use syntax::parse_formula;

use std::collections::BTreeSet;
use std::fmt;

pub type Var = String;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String, Var, Var),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

/// Syntactic facts about a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Distinct variable names, free or bound.
    pub variable_count: usize,
    pub is_posex: bool,
    pub free_vars: BTreeSet<Var>,
}

impl Formula {
    pub fn atom(r: &str, a: &str, b: &str) -> Formula {
        Formula::Atom(r.into(), a.into(), b.into())
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, r: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(r))
    }

    pub fn or(self, r: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(r))
    }

    pub fn implies(self, r: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(r))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// Conjunction of a list; `true` when empty.
    pub fn all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Disjunction of a list; `false` when empty.
    pub fn any(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, a, b) | Formula::Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, a, b) | Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(r, _, _) = f {
                out.insert(r.clone());
            }
        });
        out
    }

    pub fn is_posex(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Not(_) | Formula::Implies(..) | Formula::Forall(..)) {
                ok = false;
            }
        });
        ok
    }

    pub fn classify(&self) -> Classification {
        Classification {
            variable_count: self.variables().len(),
            is_posex: self.is_posex(),
            free_vars: self.free_vars(),
        }
    }

    /// Quantifier nesting depth.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => l.quantifier_rank().max(r.quantifier_rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(x) | Formula::Exists(_, x) | Formula::Forall(_, x) => x.visit(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            _ => {}
        }
    }

    /// Replaces free occurrences of variables according to `map`. The caller guarantees the
    /// substituted names are not captured.
    pub fn rename_free(&self, map: &dyn Fn(&str) -> Option<Var>) -> Formula {
        self.rename_inner(map, &mut Vec::new())
    }

    fn rename_inner(&self, map: &dyn Fn(&str) -> Option<Var>, bound: &mut Vec<Var>) -> Formula {
        let sub = |v: &Var, bound: &Vec<Var>| {
            if bound.contains(v) {
                v.clone()
            } else {
                map(v).unwrap_or_else(|| v.clone())
            }
        };
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(r, a, b) => Formula::Atom(r.clone(), sub(a, bound), sub(b, bound)),
            Formula::Eq(a, b) => Formula::Eq(sub(a, bound), sub(b, bound)),
            Formula::Not(f) => f.rename_inner(map, bound).not(),
            Formula::And(l, r) => l.rename_inner(map, bound).and(r.rename_inner(map, bound)),
            Formula::Or(l, r) => l.rename_inner(map, bound).or(r.rename_inner(map, bound)),
            Formula::Implies(l, r) => l.rename_inner(map, bound).implies(r.rename_inner(map, bound)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                let body = f.rename_inner(map, bound);
                bound.pop();
                match self {
                    Formula::Exists(..) => Formula::Exists(v.clone(), Box::new(body)),
                    _ => Formula::Forall(v.clone(), Box::new(body)),
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
