//! Positive-existential three-variable formulas compiled to homomorphism-safe terms.

mod verify;

pub use verify::{random_posex, verify_compilation, CompilationVerdict, VerifyOptions, VerifyReport};

use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::terms::{simplify, Term};
use std::collections::BTreeSet;

/// One disjunct of an existential body, split by the variables each part mentions:
/// `ψ₁` over the outer pair, `ψ₂` over source and witness, `ψ₃` over witness and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedConjunction {
    pub psi1: Formula,
    pub psi2: Formula,
    pub psi3: Formula,
}

/// Oriented roles of the three variable names while compiling one subformula.
#[derive(Clone, Copy)]
struct Roles<'a> {
    p: &'a str,
    q: &'a str,
    r: &'a str,
}

impl<'a> Roles<'a> {
    fn new(p: &'a str, q: &'a str) -> Self {
        let r = ["x", "y", "z"].into_iter().find(|v| *v != p && *v != q).unwrap();
        Roles { p, q, r }
    }
}

/// Splits a conjunction of parts with at most two free variables each.
///
/// Parts over `{p,q}` and sentences go to `ψ₁`; parts over `{p,r}`, `{p}` or `{r}` to `ψ₂`;
/// parts over `{r,q}` or `{q}` to `ψ₃`.
fn group(parts: &[Formula], roles: Roles) -> GroupedConjunction {
    let (mut g1, mut g2, mut g3) = (Vec::new(), Vec::new(), Vec::new());
    for part in parts {
        let free = part.free_vars();
        let has = |v: &str| free.contains(v);
        if has(roles.r) {
            if has(roles.q) {
                g3.push(part.clone());
            } else {
                g2.push(part.clone());
            }
        } else if has(roles.p) && has(roles.q) || free.is_empty() {
            g1.push(part.clone());
        } else if has(roles.p) {
            g2.push(part.clone());
        } else {
            g3.push(part.clone());
        }
    }
    GroupedConjunction {
        psi1: Formula::all(g1),
        psi2: Formula::all(g2),
        psi3: Formula::all(g3),
    }
}

/// Disjunctive normal form over maximal subformulas with at most two free variables.
fn dnf(f: &Formula) -> Vec<Vec<Formula>> {
    if f.free_vars().len() <= 2 {
        return vec![vec![f.clone()]];
    }
    match f {
        Formula::Or(l, r) => {
            let mut out = dnf(l);
            out.extend(dnf(r));
            out
        }
        Formula::And(l, r) => {
            let (ls, rs) = (dnf(l), dnf(r));
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(a.iter().chain(b).cloned().collect());
                }
            }
            out
        }
        // atoms and quantified subformulas never have three free variables
        _ => unreachable!("leaf with more than two free variables"),
    }
}

/// Groups the body of `∃z` for the top-level orientation `(x, y)`; used for inspection.
pub fn group_existential_body(body: &Formula) -> Vec<GroupedConjunction> {
    dnf(body).iter().map(|c| group(c, Roles::new("x", "y"))).collect()
}

fn first_offender(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(_) | Formula::Implies(..) | Formula::Forall(..) => Some(f),
        Formula::And(l, r) | Formula::Or(l, r) => first_offender(l).or_else(|| first_offender(r)),
        Formula::Exists(_, g) => first_offender(g),
        _ => None,
    }
}

/// Renames variables onto `{x, y, z}`, keeping `x` and `y` fixed.
fn onto_xyz(f: &Formula) -> Formula {
    let mut spare: Vec<&str> = ["x", "y", "z"]
        .into_iter()
        .filter(|v| !f.variables().contains(*v))
        .collect();
    let mut map: Vec<(String, String)> = Vec::new();
    for v in f.variables() {
        if !["x", "y", "z"].contains(&v.as_str()) {
            map.push((v, spare.remove(0).to_string()));
        }
    }
    rename_all(f, &map)
}

fn rename_all(f: &Formula, map: &[(String, String)]) -> Formula {
    let m = |v: &String| map.iter().find(|(a, _)| a == v).map_or_else(|| v.clone(), |(_, b)| b.clone());
    let b = |g: &Formula| Box::new(rename_all(g, map));
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(r, u, v) => Formula::Atom(r.clone(), m(u), m(v)),
        Formula::Eq(u, v) => Formula::Eq(m(u), m(v)),
        Formula::Not(g) => Formula::Not(b(g)),
        Formula::And(l, r) => Formula::And(b(l), b(r)),
        Formula::Or(l, r) => Formula::Or(b(l), b(r)),
        Formula::Implies(l, r) => Formula::Implies(b(l), b(r)),
        Formula::Exists(v, g) => Formula::Exists(m(v), b(g)),
        Formula::Forall(v, g) => Formula::Forall(m(v), b(g)),
    }
}

/// Compiles a positive-existential formula with at most three variable names and free
/// variables among `x, y` into a term over `{id, ∅, ⊤, ∘, ∪, ∩, ˘}`.
pub fn compile_posex(f: &Formula) -> Result<Term> {
    if let Some(bad) = first_offender(f) {
        return Err(Error::NotCompilable(format!("offending subformula `{bad}`")));
    }
    let vars = f.variables();
    if vars.len() > 3 {
        let names: Vec<String> = vars.into_iter().collect();
        return Err(Error::NotCompilable(format!(
            "uses {} variable names ({}), at most 3 allowed",
            names.len(),
            names.join(", ")
        )));
    }
    let extra: Vec<String> = f.free_vars().into_iter().filter(|v| v != "x" && v != "y").collect();
    if !extra.is_empty() {
        return Err(Error::ExtraFreeVariables {
            allowed: "x,y".into(),
            extra,
        });
    }
    let g = onto_xyz(f);
    Ok(simplify(&compile(&g, Roles::new("x", "y"))))
}

fn compile(f: &Formula, roles: Roles) -> Term {
    let Roles { p, q, r } = roles;
    match f {
        Formula::True => Term::top(),
        Formula::False => Term::empty(),
        Formula::Atom(rel, u, v) => {
            let base = Term::sym(rel);
            match (u == p, v == q, u == q, v == p) {
                (true, true, ..) => base,
                (_, _, true, true) => base.converse(),
                (true, _, _, true) => base.meet(Term::id()).then(Term::top()),
                (_, true, true, _) => Term::top().then(base.meet(Term::id())),
                _ => unreachable!("atom {f} outside roles ({p},{q})"),
            }
        }
        Formula::Eq(u, v) => {
            if u == v {
                Term::top()
            } else {
                Term::id()
            }
        }
        Formula::And(a, b) => compile(a, roles).meet(compile(b, roles)),
        Formula::Or(a, b) => compile(a, roles).union(compile(b, roles)),
        Formula::Exists(v, body) if v == p => Term::top().then(compile(body, roles)),
        Formula::Exists(v, body) if v == q => compile(body, roles).then(Term::top()),
        Formula::Exists(v, body) => {
            debug_assert_eq!(v, r);
            dnf(body)
                .iter()
                .map(|conj| {
                    let g = group(conj, roles);
                    let t1 = compile(&g.psi1, roles);
                    let t2 = compile(&g.psi2, Roles::new(p, r));
                    let t3 = compile(&g.psi3, Roles::new(r, q));
                    t1.meet(t2.then(t3))
                })
                .reduce(Term::union)
                .unwrap_or_else(Term::empty)
        }
        Formula::Not(_) | Formula::Implies(..) | Formula::Forall(..) => unreachable!("checked posex"),
    }
}

/// Variables of `f` as a sorted list, for error messages and reports.
pub fn variable_names(f: &Formula) -> BTreeSet<String> {
    f.variables()
}
