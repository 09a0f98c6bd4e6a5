use super::{Op, Term};
use crate::error::{Error, Result};
use crate::structures::{Relation, Structure};

/// Applies a non-constant operation to already evaluated arguments.
pub(crate) fn apply_unary(op: Op, x: &Relation) -> Relation {
    match op {
        Op::Complement => x.complement(),
        Op::Converse => x.converse(),
        Op::Domain => x.domain(),
        Op::Range => x.range(),
        Op::Antidomain => x.antidomain(),
        _ => unreachable!("{op:?} is not unary"),
    }
}

pub(crate) fn apply_binary(op: Op, l: &Relation, r: &Relation) -> Relation {
    match op {
        Op::Union => l.union(r),
        Op::Intersection => l.intersection(r),
        Op::Difference => l.difference(r),
        Op::Composition => l.compose(r),
        Op::Semijoin => l.semijoin(r),
        Op::PrefUnion => l.preferential_union(r),
        Op::InjUnion => l.injective_union(r),
        _ => unreachable!("{op:?} is not binary"),
    }
}

pub(crate) fn constant(op: Op, n: usize) -> Relation {
    match op {
        Op::Id => Relation::identity(n),
        Op::Empty => Relation::empty(n),
        Op::Top => Relation::full(n),
        _ => unreachable!("{op:?} is not a constant"),
    }
}

/// Denotation of `t` over `a`; complement and top are relative to `dom(a)²`.
pub fn eval(t: &Term, a: &Structure) -> Result<Relation> {
    if let Some(missing) = t.signature().into_iter().find(|s| a.relation(s).is_none()) {
        return Err(Error::UnknownSymbol(missing));
    }
    Ok(go(t, a))
}

fn go(t: &Term, a: &Structure) -> Relation {
    match t {
        Term::Sym(s) => a.relation(s).expect("signature checked").clone(),
        Term::Const(op) => constant(*op, a.size()),
        Term::Unary(op, x) => apply_unary(*op, &go(x, a)),
        Term::Binary(op, l, r) => apply_binary(*op, &go(l, a), &go(r, a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn ev(t: &str, a: &Structure) -> Vec<(String, String)> {
        a.pairs_named(&eval(&parse_term(t).unwrap(), a).unwrap())
    }

    fn p(x: &str, y: &str) -> (String, String) {
        (x.into(), y.into())
    }

    #[test]
    fn antidomain_example() {
        let a = Structure::from_lists(&["1", "2"], &[("R", &[("1", "2")])]).unwrap();
        assert_eq!(ev("~R", &a), vec![p("2", "2")]);
    }

    #[test]
    fn preferential_union_example() {
        let a = Structure::from_lists(
            &["1", "2", "3"],
            &[("R", &[("1", "2")]), ("S", &[("1", "3"), ("2", "3")])],
        )
        .unwrap();
        assert_eq!(ev("R <+ S", &a), vec![p("1", "2"), p("2", "3")]);
    }

    #[test]
    fn injective_union_example() {
        let a = Structure::from_lists(
            &["1", "2", "3", "4"],
            &[("f", &[("1", "1")]), ("g", &[("2", "1"), ("3", "4")])],
        )
        .unwrap();
        assert_eq!(ev("f <# g", &a), vec![p("1", "1"), p("3", "4")]);
        assert_eq!(ev("(f <+ g) & (f^ <+ g^)^", &a), ev("f <# g", &a));
    }

    #[test]
    fn constants_are_domain_relative() {
        let a = Structure::from_lists(&["1", "2"], &[("R", &[])]).unwrap();
        assert_eq!(ev("T", &a).len(), 4);
        assert_eq!(ev("-R", &a).len(), 4);
        assert_eq!(ev("0", &a).len(), 0);
        assert_eq!(ev("id", &a), vec![p("1", "1"), p("2", "2")]);
    }

    #[test]
    fn unknown_symbol_is_named() {
        let a = Structure::from_lists(&["1"], &[("R", &[])]).unwrap();
        let err = eval(&parse_term("R ; Q").unwrap(), &a).unwrap_err();
        assert_eq!(err.to_string(), "unknown relation symbol: Q");
    }
}
