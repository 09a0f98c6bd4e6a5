use super::Formula;
use crate::terms::{Op, Term};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn third(s: usize, d: usize) -> usize {
    3 - s - d
}

/// A three-variable formula defining the same relation as `t`, free in `x` (source) and `y`.
///
/// Translation keeps an oriented pair of names drawn from `{x,y,z}`; composition and the
/// domain-like operations quantify the unused third name, and converse swaps the pair.
pub fn term_to_fo3(t: &Term) -> Formula {
    tr(t, 0, 1)
}

fn tr(t: &Term, s: usize, d: usize) -> Formula {
    let w = third(s, d);
    let (vs, vd, vw) = (NAMES[s], NAMES[d], NAMES[w]);
    let diag = || Formula::eq(vs, vd);
    match t {
        Term::Sym(r) => Formula::atom(r, vs, vd),
        Term::Const(Op::Id) => diag(),
        Term::Const(Op::Empty) => diag().not().and(diag()),
        Term::Const(Op::Top) => Formula::eq(vs, vs).and(Formula::eq(vd, vd)),
        Term::Const(op) => unreachable!("{op:?} is not a constant"),
        Term::Unary(op, x) => match op {
            Op::Complement => tr(x, s, d).not(),
            Op::Converse => tr(x, d, s),
            Op::Domain => diag().and(Formula::exists(vw, tr(x, s, w))),
            Op::Range => diag().and(Formula::exists(vw, tr(x, w, s))),
            Op::Antidomain => diag().and(Formula::exists(vw, tr(x, s, w)).not()),
            _ => unreachable!("{op:?} is not unary"),
        },
        Term::Binary(op, l, r) => match op {
            Op::Union => tr(l, s, d).or(tr(r, s, d)),
            Op::Intersection => tr(l, s, d).and(tr(r, s, d)),
            Op::Difference => tr(l, s, d).and(tr(r, s, d).not()),
            Op::Composition => Formula::exists(vw, tr(l, s, w).and(tr(r, w, d))),
            Op::Semijoin => tr(l, s, d).and(Formula::exists(vw, tr(r, d, w))),
            Op::PrefUnion => tr(l, s, d).or(tr(r, s, d).and(Formula::exists(vw, tr(l, s, w)).not())),
            Op::InjUnion => tr(&t.expand_injective_union(), s, d),
            _ => unreachable!("{op:?} is not binary"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn fo(t: &str) -> String {
        term_to_fo3(&parse_term(t).unwrap()).to_string()
    }

    #[test]
    fn textbook_cases() {
        assert_eq!(fo("f"), "f(x,y)");
        assert_eq!(fo("f ; g"), "exists z. (f(x,z) & g(z,y))");
        assert_eq!(fo("~f"), "x=y & !(exists z. f(x,z))");
        assert_eq!(fo("f^"), "f(y,x)");
    }

    #[test]
    fn nested_composition_recycles_names() {
        let f = term_to_fo3(&parse_term("f ; g ; f ; g").unwrap());
        let k = f.classify();
        assert_eq!(k.variable_count, 3);
        assert_eq!(k.free_vars.into_iter().collect::<Vec<_>>(), vec!["x", "y"]);
    }
}
