use super::{Op, Term};

/// `t \ (t ; (T \ id))`: keeps only the pairs whose source has a unique image under `t`.
pub fn normalize_fp(t: &Term) -> Term {
    t.clone().minus(t.clone().then(Term::top().minus(Term::id())))
}

/// Bottom-up application of a fixed list of sound identities:
/// `x&x→x`, `x;id→x`, `id;x→x`, `x|0→x`, `0|x→x`, `0;x→0`, `x;0→0`, `T&x→x`, `x&T→x`.
pub fn simplify(t: &Term) -> Term {
    match t {
        Term::Sym(_) | Term::Const(_) => t.clone(),
        Term::Unary(op, x) => Term::unary(*op, simplify(x)),
        Term::Binary(op, l, r) => step(*op, simplify(l), simplify(r)),
    }
}

fn step(op: Op, l: Term, r: Term) -> Term {
    let is = |t: &Term, c: Op| matches!(t, Term::Const(k) if *k == c);
    match op {
        Op::Intersection if l == r => l,
        Op::Intersection if is(&l, Op::Top) => r,
        Op::Intersection if is(&r, Op::Top) => l,
        Op::Composition if is(&l, Op::Empty) || is(&r, Op::Empty) => Term::empty(),
        Op::Composition if is(&r, Op::Id) => l,
        Op::Composition if is(&l, Op::Id) => r,
        Op::Union if is(&r, Op::Empty) => l,
        Op::Union if is(&l, Op::Empty) => r,
        _ => Term::binary(op, l, r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Structure;
    use crate::terms::{eval, parse_term};

    fn s(t: &str) -> String {
        simplify(&parse_term(t).unwrap()).to_string()
    }

    #[test]
    fn safe_rules() {
        assert_eq!(s("T & (R ; S)"), "R ; S");
        assert_eq!(s("(f ; id) & (id ; f)"), "f");
        assert_eq!(s("f ; 0 | g"), "g");
        assert_eq!(s("~(f & f ; id)"), "~f");
        assert_eq!(s("f | g"), "f | g");
    }

    #[test]
    fn normalize_examples() {
        let a = Structure::from_lists(&["1", "2", "3"], &[("f", &[("1", "2")]), ("g", &[("1", "3")])]).unwrap();
        let u = normalize_fp(&parse_term("f | g").unwrap());
        assert!(eval(&u, &a).unwrap().is_empty());
        let f = normalize_fp(&parse_term("f").unwrap());
        assert_eq!(eval(&f, &a).unwrap(), a.relation("f").unwrap().clone());
        let one = Structure::from_lists(&["1"], &[("f", &[])]).unwrap();
        assert_eq!(one.pairs_named(&eval(&normalize_fp(&Term::top()), &one).unwrap()).len(), 1);
    }
}
