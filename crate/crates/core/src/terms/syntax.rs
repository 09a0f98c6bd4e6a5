//! Concrete syntax for terms.
//!
//! Precedence, loosest first: `<+ <#`, then `|`, then `\ &`, then `; |>`, then prefix `~ -`,
//! then postfix `^`. Binary operators associate to the left.

use super::{Op, Term};
use crate::error::{Error, Result};
use crate::syntax::{Cursor, Tok};
use std::fmt;

const ATOM: u8 = 6;
const POSTFIX: u8 = 5;
const PREFIX: u8 = 4;

fn binary_level(op: Op) -> u8 {
    match op {
        Op::PrefUnion | Op::InjUnion => 0,
        Op::Union => 1,
        Op::Difference | Op::Intersection => 2,
        Op::Composition | Op::Semijoin => 3,
        _ => unreachable!("not a binary operation"),
    }
}

fn level(t: &Term) -> u8 {
    match t {
        Term::Sym(_) | Term::Const(_) => ATOM,
        Term::Unary(Op::Domain | Op::Range, _) => ATOM,
        Term::Unary(Op::Converse, _) => POSTFIX,
        Term::Unary(..) => PREFIX,
        Term::Binary(op, ..) => binary_level(*op),
    }
}

fn write_term(t: &Term, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = level(t) < min;
    if paren {
        f.write_str("(")?;
    }
    match t {
        Term::Sym(s) => f.write_str(s)?,
        Term::Const(op) => f.write_str(op.token())?,
        Term::Unary(op @ (Op::Domain | Op::Range), x) => {
            write!(f, "{}(", op.token())?;
            write_term(x, 0, f)?;
            f.write_str(")")?;
        }
        Term::Unary(Op::Converse, x) => {
            write_term(x, POSTFIX, f)?;
            f.write_str("^")?;
        }
        Term::Unary(op, x) => {
            f.write_str(op.token())?;
            write_term(x, PREFIX, f)?;
        }
        Term::Binary(op, l, r) => {
            let lv = binary_level(*op);
            write_term(l, lv, f)?;
            write!(f, " {} ", op.token())?;
            write_term(r, lv + 1, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

const LEVELS: [&[(&str, Op)]; 4] = [
    &[("<+", Op::PrefUnion), ("<#", Op::InjUnion)],
    &[("|", Op::Union)],
    &[("\\", Op::Difference), ("&", Op::Intersection)],
    &[(";", Op::Composition), ("|>", Op::Semijoin)],
];

fn parse_level(c: &mut Cursor, lv: usize) -> Result<Term> {
    if lv == LEVELS.len() {
        return parse_prefix(c);
    }
    let mut lhs = parse_level(c, lv + 1)?;
    'outer: loop {
        for &(tok, op) in LEVELS[lv] {
            if c.eat(tok) {
                let rhs = parse_level(c, lv + 1)?;
                lhs = Term::binary(op, lhs, rhs);
                continue 'outer;
            }
        }
        return Ok(lhs);
    }
}

fn parse_prefix(c: &mut Cursor) -> Result<Term> {
    if c.eat("~") {
        return Ok(parse_prefix(c)?.anti());
    }
    if c.eat("-") {
        return Ok(parse_prefix(c)?.complement());
    }
    let mut t = parse_atom(c)?;
    while c.eat("^") {
        t = t.converse();
    }
    Ok(t)
}

fn parse_atom(c: &mut Cursor) -> Result<Term> {
    if c.eat("(") {
        let t = parse_level(c, 0)?;
        c.expect(")")?;
        return Ok(t);
    }
    let name = match c.peek() {
        Tok::Ident(s) => s.clone(),
        _ => {
            c.note("identifier");
            c.note("`id`");
            c.note("`0`");
            c.note("`T`");
            c.note("`dom(`");
            c.note("`ran(`");
            return Err(c.error("expected a term, found"));
        }
    };
    let is_call = *c.peek_at(1) == Tok::Punct("(");
    match name.as_str() {
        "id" => {
            c.bump();
            Ok(Term::id())
        }
        "0" => {
            c.bump();
            Ok(Term::empty())
        }
        "T" => {
            c.bump();
            Ok(Term::top())
        }
        "dom" | "ran" if is_call => {
            c.bump();
            c.expect("(")?;
            let t = parse_level(c, 0)?;
            c.expect(")")?;
            Ok(if name == "dom" { t.dom() } else { t.ran() })
        }
        s if s.starts_with(|ch: char| ch.is_ascii_digit()) => {
            c.note("identifier");
            Err(c.error("numeric literal other than 0:"))
        }
        _ => {
            c.bump();
            Ok(Term::sym(&name))
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut c = Cursor::new(text)?;
    let t = parse_level(&mut c, 0)?;
    c.finish()?;
    Ok(t)
}

/// One term per line; blank lines and `#` comments are skipped. Errors carry file line numbers.
pub fn parse_term_file(text: &str) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        match parse_term(line) {
            Ok(t) => out.push(t),
            Err(Error::Syntax {
                column,
                message,
                expected,
                ..
            }) => {
                return Err(Error::Syntax {
                    line: i + 1,
                    column,
                    message,
                    expected,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Term {
        Term::sym("f")
    }
    fn g() -> Term {
        Term::sym("g")
    }

    #[test]
    fn composition_binds_tighter_than_meet() {
        assert_eq!(parse_term("f ; g & id").unwrap(), f().then(g()).meet(Term::id()));
    }

    #[test]
    fn converse_inside_parens() {
        assert_eq!(parse_term("(f^ ; g)").unwrap(), f().converse().then(g()));
    }

    #[test]
    fn left_associative() {
        assert_eq!(parse_term("f ; g ; f").unwrap(), f().then(g()).then(f()));
        assert_eq!(f().then(g().then(f())).to_string(), "f ; (g ; f)");
        assert_eq!(parse_term("f \\ g & f").unwrap(), f().minus(g()).meet(f()));
    }

    #[test]
    fn minimal_parentheses() {
        let cases = [
            "~~f & ~~(f & ~(~f ; f))",
            "f <+ (g <+ f ; g)",
            "f <+ g <+ f ; g",
            "dom(f) ; g^",
            "(-f)^",
            "-f^",
            "(f | g) & T",
            "f <# g",
            "~(f ; g)",
        ];
        for s in cases {
            let t = parse_term(s).unwrap();
            assert_eq!(t.to_string(), s);
        }
    }

    #[test]
    fn postfix_binds_tightest() {
        assert_eq!(parse_term("~f^").unwrap(), f().converse().anti());
        assert_eq!(parse_term("f^^").unwrap(), f().converse().converse());
    }

    #[test]
    fn dom_without_call_is_a_symbol() {
        assert_eq!(parse_term("dom ; f").unwrap(), Term::sym("dom").then(f()));
    }

    #[test]
    fn errors_report_position_and_expectations() {
        let err = parse_term("f ; (g &").unwrap_err();
        match err {
            Error::Syntax {
                line,
                column,
                expected,
                ..
            } => {
                assert_eq!((line, column), (1, 9));
                assert!(expected.contains(&"identifier".to_string()));
            }
            other => panic!("unexpected {other}"),
        }
        assert!(parse_term("f g").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term("12").is_err());
    }

    #[test]
    fn term_files() {
        let ts = parse_term_file("# catalog\nf ; g\n\ndom(f)  # trailing\n").unwrap();
        assert_eq!(ts, vec![f().then(g()), f().dom()]);
        let err = parse_term_file("f\nf ;\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }
}
