//! Terms over the operation catalogue on binary relations.

mod closure;
mod compiled;
mod enumerate;
mod eval;
mod laws;
mod rewrite;
mod syntax;

pub use closure::{closure_is_closed, semantic_closure, Closure, ClosureOptions};
pub use compiled::CompiledTerm;
pub(crate) use compiled::Node;
pub use enumerate::{enumerate_terms, random_term, TermLimits};
pub use eval::eval;
pub(crate) use eval::{apply_binary, apply_unary, constant};
pub use laws::{check_definitional_identities, check_law, LawCheck, DEFINITIONAL_IDENTITIES};
pub use rewrite::{normalize_fp, simplify};
pub use syntax::{parse_term, parse_term_file};

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Every operation of the catalogue, constants included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Id,
    Empty,
    Top,
    Complement,
    Converse,
    Domain,
    Range,
    Antidomain,
    Union,
    Intersection,
    Difference,
    Composition,
    Semijoin,
    PrefUnion,
    InjUnion,
}

impl Op {
    pub const ALL: [Op; 15] = [
        Op::Id,
        Op::Empty,
        Op::Top,
        Op::Complement,
        Op::Converse,
        Op::Domain,
        Op::Range,
        Op::Antidomain,
        Op::Union,
        Op::Intersection,
        Op::Difference,
        Op::Composition,
        Op::Semijoin,
        Op::PrefUnion,
        Op::InjUnion,
    ];

    pub fn arity(self) -> usize {
        use Op::*;
        match self {
            Id | Empty | Top => 0,
            Complement | Converse | Domain | Range | Antidomain => 1,
            _ => 2,
        }
    }

    /// ASCII token used in the concrete syntax and in basis lists.
    pub fn token(self) -> &'static str {
        use Op::*;
        match self {
            Id => "id",
            Empty => "0",
            Top => "T",
            Complement => "-",
            Converse => "^",
            Domain => "dom",
            Range => "ran",
            Antidomain => "~",
            Union => "|",
            Intersection => "&",
            Difference => "\\",
            Composition => ";",
            Semijoin => "|>",
            PrefUnion => "<+",
            InjUnion => "<#",
        }
    }

    /// Mathematical symbol, for reports.
    pub fn symbol(self) -> &'static str {
        use Op::*;
        match self {
            Id => "id",
            Empty => "∅",
            Top => "⊤",
            Complement => "−",
            Converse => "˘",
            Domain => "D",
            Range => "R",
            Antidomain => "~",
            Union => "∪",
            Intersection => "∩",
            Difference => "∖",
            Composition => "∘",
            Semijoin => "⋉",
            PrefUnion => "⊔",
            InjUnion => "⊔¹",
        }
    }

    pub fn from_token(s: &str) -> Option<Op> {
        let s = s.trim();
        Op::ALL
            .into_iter()
            .find(|op| op.token() == s || op.symbol() == s)
            .or(match s {
                "empty" | "∅" => Some(Op::Empty),
                "top" => Some(Op::Top),
                "D" => Some(Op::Domain),
                "R" => Some(Op::Range),
                "˘" | "converse" => Some(Op::Converse),
                _ => None,
            })
    }
}

/// A set of operations, stored as a bit mask indexed by `Op as u16`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Basis(u16);

impl Basis {
    pub const EMPTY: Basis = Basis(0);

    pub fn of(ops: &[Op]) -> Basis {
        Basis(ops.iter().fold(0, |m, &op| m | 1 << op as u16))
    }

    pub fn tra() -> Basis {
        use Op::*;
        Basis::of(&[Id, Empty, Complement, Intersection, Composition, Converse])
    }

    pub fn fa() -> Basis {
        use Op::*;
        Basis::of(&[
            Id,
            Empty,
            Domain,
            Range,
            Antidomain,
            Intersection,
            Difference,
            Composition,
            Semijoin,
            PrefUnion,
        ])
    }

    pub fn homsafe() -> Basis {
        use Op::*;
        Basis::of(&[Id, Empty, Top, Composition, Union, Intersection, Converse])
    }

    pub fn fwd() -> Basis {
        use Op::*;
        Basis::of(&[Composition, Antidomain, Intersection, PrefUnion])
    }

    pub fn inj() -> Basis {
        use Op::*;
        Basis::of(&[Composition, Antidomain, Intersection, Converse, InjUnion])
    }

    pub fn preset(name: &str) -> Option<Basis> {
        match name.to_ascii_uppercase().as_str() {
            "TRA" => Some(Basis::tra()),
            "FA" => Some(Basis::fa()),
            "HOMSAFE" => Some(Basis::homsafe()),
            "FWD" => Some(Basis::fwd()),
            "INJ" => Some(Basis::inj()),
            _ => None,
        }
    }

    /// Accepts a preset name or a comma-separated list of operation tokens.
    pub fn parse(text: &str) -> Result<Basis> {
        if let Some(b) = Basis::preset(text.trim()) {
            return Ok(b);
        }
        let mut ops = Vec::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            ops.push(Op::from_token(part).ok_or_else(|| {
                Error::InvalidParameter(format!("unknown operation {:?} in basis", part.trim()))
            })?);
        }
        Ok(Basis::of(&ops))
    }

    pub fn contains(self, op: Op) -> bool {
        self.0 >> op as u16 & 1 == 1
    }

    pub fn with(self, op: Op) -> Basis {
        Basis(self.0 | 1 << op as u16)
    }

    pub fn union(self, other: Basis) -> Basis {
        Basis(self.0 | other.0)
    }

    pub fn is_subset(self, other: Basis) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn ops(self) -> impl Iterator<Item = Op> {
        Op::ALL.into_iter().filter(move |&op| self.contains(op))
    }

    pub fn constants(self) -> impl Iterator<Item = Op> {
        self.ops().filter(|op| op.arity() == 0)
    }

    pub fn unary(self) -> impl Iterator<Item = Op> {
        self.ops().filter(|op| op.arity() == 1)
    }

    pub fn binary(self) -> impl Iterator<Item = Op> {
        self.ops().filter(|op| op.arity() == 2)
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms: Vec<_> = self.ops().map(Op::symbol).collect();
        write!(f, "{{{}}}", syms.join(", "))
    }
}

/// Abstract syntax of a term. Children are shared, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Sym(Arc<str>),
    Const(Op),
    Unary(Op, Arc<Term>),
    Binary(Op, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn sym(name: &str) -> Term {
        Term::Sym(name.into())
    }

    pub fn id() -> Term {
        Term::Const(Op::Id)
    }

    pub fn empty() -> Term {
        Term::Const(Op::Empty)
    }

    pub fn top() -> Term {
        Term::Const(Op::Top)
    }

    pub fn unary(op: Op, t: Term) -> Term {
        debug_assert_eq!(op.arity(), 1);
        Term::Unary(op, Arc::new(t))
    }

    pub fn binary(op: Op, l: Term, r: Term) -> Term {
        debug_assert_eq!(op.arity(), 2);
        Term::Binary(op, Arc::new(l), Arc::new(r))
    }

    pub fn complement(self) -> Term {
        Term::unary(Op::Complement, self)
    }
    pub fn converse(self) -> Term {
        Term::unary(Op::Converse, self)
    }
    pub fn dom(self) -> Term {
        Term::unary(Op::Domain, self)
    }
    pub fn ran(self) -> Term {
        Term::unary(Op::Range, self)
    }
    pub fn anti(self) -> Term {
        Term::unary(Op::Antidomain, self)
    }
    pub fn union(self, r: Term) -> Term {
        Term::binary(Op::Union, self, r)
    }
    pub fn meet(self, r: Term) -> Term {
        Term::binary(Op::Intersection, self, r)
    }
    pub fn minus(self, r: Term) -> Term {
        Term::binary(Op::Difference, self, r)
    }
    pub fn then(self, r: Term) -> Term {
        Term::binary(Op::Composition, self, r)
    }
    pub fn semijoin(self, r: Term) -> Term {
        Term::binary(Op::Semijoin, self, r)
    }
    pub fn pref(self, r: Term) -> Term {
        Term::binary(Op::PrefUnion, self, r)
    }
    pub fn inj_union(self, r: Term) -> Term {
        Term::binary(Op::InjUnion, self, r)
    }

    /// Node count; constants and symbols count one.
    pub fn size(&self) -> usize {
        match self {
            Term::Sym(_) | Term::Const(_) => 1,
            Term::Unary(_, t) => 1 + t.size(),
            Term::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Sym(_) | Term::Const(_) => 1,
            Term::Unary(_, t) => 1 + t.depth(),
            Term::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn signature(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Sym(s) = t {
                out.insert(s.to_string());
            }
        });
        out
    }

    /// Operations occurring in the term.
    pub fn ops(&self) -> Basis {
        let mut b = Basis::EMPTY;
        self.visit(&mut |t| match t {
            Term::Sym(_) => {}
            Term::Const(op) | Term::Unary(op, _) | Term::Binary(op, _, _) => b = b.with(*op),
        });
        b
    }

    pub fn is_over(&self, basis: Basis) -> bool {
        self.ops().is_subset(basis)
    }

    fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Sym(_) | Term::Const(_) => {}
            Term::Unary(_, t) => t.visit(f),
            Term::Binary(_, l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Rewrites every `<#` through `(l <+ r) & (l^ <+ r^)^`.
    pub fn expand_injective_union(&self) -> Term {
        match self {
            Term::Sym(_) | Term::Const(_) => self.clone(),
            Term::Unary(op, t) => Term::unary(*op, t.expand_injective_union()),
            Term::Binary(Op::InjUnion, l, r) => {
                let (l, r) = (l.expand_injective_union(), r.expand_injective_union());
                l.clone()
                    .pref(r.clone())
                    .meet(l.converse().pref(r.converse()).converse())
            }
            Term::Binary(op, l, r) => Term::binary(*op, l.expand_injective_union(), r.expand_injective_union()),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_have_expected_members() {
        assert_eq!(Basis::tra().ops().count(), 6);
        assert_eq!(Basis::fa().ops().count(), 10);
        assert!(Basis::fwd().contains(Op::PrefUnion));
        assert!(!Basis::fwd().contains(Op::Converse));
        assert!(Basis::inj().contains(Op::InjUnion));
        assert_eq!(Basis::parse("fa").unwrap(), Basis::fa());
    }

    #[test]
    fn basis_from_tokens() {
        let b = Basis::parse(";, &, ~, <+").unwrap();
        assert_eq!(b, Basis::fwd());
        assert!(Basis::parse("; , @").is_err());
        assert_eq!(Basis::fwd().to_string(), "{~, ∩, ∘, ⊔}");
    }

    #[test]
    fn size_and_signature() {
        let t = Term::sym("f").then(Term::sym("g")).meet(Term::id());
        assert_eq!(t.size(), 5);
        assert_eq!(t.signature().into_iter().collect::<Vec<_>>(), vec!["f", "g"]);
        assert!(t.is_over(Basis::of(&[Op::Composition, Op::Intersection, Op::Id])));
        assert!(!t.is_over(Basis::fwd()));
    }
}
