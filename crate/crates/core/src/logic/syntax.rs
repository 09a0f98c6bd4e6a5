//! Concrete syntax for formulas.
//!
//! `->` is loosest and right-associative, then `|`, then `&`, then `!`. A quantifier
//! `exists v. body` extends as far to the right as possible; `exists u v. body` abbreviates
//! nested quantifiers. `x!=y` abbreviates `!(x=y)`.

use super::Formula;
use crate::error::Result;
use crate::syntax::{Cursor, Tok};
use std::fmt;

const KEYWORDS: [&str; 4] = ["true", "false", "exists", "forall"];

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut c = Cursor::new(text)?;
    let f = implication(&mut c)?;
    c.finish()?;
    Ok(f)
}

fn implication(c: &mut Cursor) -> Result<Formula> {
    let lhs = disjunction(c)?;
    if c.eat("->") {
        return Ok(lhs.implies(implication(c)?));
    }
    Ok(lhs)
}

fn disjunction(c: &mut Cursor) -> Result<Formula> {
    let mut lhs = conjunction(c)?;
    while c.eat("|") {
        lhs = lhs.or(conjunction(c)?);
    }
    Ok(lhs)
}

fn conjunction(c: &mut Cursor) -> Result<Formula> {
    let mut lhs = unary(c)?;
    while c.eat("&") {
        lhs = lhs.and(unary(c)?);
    }
    Ok(lhs)
}

fn variable(c: &mut Cursor) -> Result<String> {
    match c.peek().clone() {
        Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
            c.bump();
            Ok(s)
        }
        _ => {
            c.note("variable");
            Err(c.error("expected a variable, found"))
        }
    }
}

fn unary(c: &mut Cursor) -> Result<Formula> {
    if c.eat("!") {
        return Ok(unary(c)?.not());
    }
    if c.eat("(") {
        let f = implication(c)?;
        c.expect(")")?;
        return Ok(f);
    }
    let word = match c.peek() {
        Tok::Ident(s) => s.clone(),
        _ => {
            for w in ["`!`", "`(`", "atom", "`exists`", "`forall`", "`true`", "`false`"] {
                c.note(w);
            }
            return Err(c.error("expected a formula, found"));
        }
    };
    match word.as_str() {
        "true" => {
            c.bump();
            Ok(Formula::True)
        }
        "false" => {
            c.bump();
            Ok(Formula::False)
        }
        "exists" | "forall" => {
            c.bump();
            let mut vars = vec![variable(c)?];
            loop {
                c.eat(",");
                if c.eat(".") {
                    break;
                }
                vars.push(variable(c)?);
            }
            let mut body = implication(c)?;
            for v in vars.iter().rev() {
                body = if word == "exists" {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                };
            }
            Ok(body)
        }
        _ => {
            c.bump();
            if c.eat("(") {
                let a = variable(c)?;
                c.expect(",")?;
                let b = variable(c)?;
                c.expect(")")?;
                return Ok(Formula::Atom(word, a, b));
            }
            if c.eat("=") {
                return Ok(Formula::Eq(word, variable(c)?));
            }
            if c.eat("!=") {
                return Ok(Formula::Eq(word, variable(c)?).not());
            }
            Err(c.error("expected `(`, `=` or `!=` before"))
        }
    }
}

#[derive(Clone, Copy)]
enum Ctx {
    Top,
    Operand(u8),
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn write_formula(phi: &Formula, ctx: Ctx, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let quant = matches!(phi, Formula::Exists(..) | Formula::Forall(..));
    let paren = match ctx {
        Ctx::Top => false,
        Ctx::Operand(min) => quant || level(phi) < min,
    };
    if paren {
        f.write_str("(")?;
    }
    match phi {
        Formula::True => f.write_str("true")?,
        Formula::False => f.write_str("false")?,
        Formula::Atom(r, a, b) => write!(f, "{r}({a},{b})")?,
        Formula::Eq(a, b) => write!(f, "{a}={b}")?,
        Formula::Not(x) => match &**x {
            Formula::Eq(a, b) => write!(f, "{a}!={b}")?,
            _ => {
                f.write_str("!")?;
                write_formula(x, Ctx::Operand(3), f)?;
            }
        },
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            let (op, lmin, rmin) = match phi {
                Formula::And(..) => ("&", 2, 3),
                Formula::Or(..) => ("|", 1, 2),
                _ => ("->", 1, 0),
            };
            write_formula(l, Ctx::Operand(lmin), f)?;
            write!(f, " {op} ")?;
            write_formula(r, Ctx::Operand(rmin), f)?;
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let kw = if matches!(phi, Formula::Exists(..)) { "exists" } else { "forall" };
            write!(f, "{kw} {v}. ")?;
            if level(body) < 3 {
                f.write_str("(")?;
                write_formula(body, Ctx::Top, f)?;
                f.write_str(")")?;
            } else {
                write_formula(body, Ctx::Top, f)?;
            }
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, Ctx::Top, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) {
        let f = parse_formula(s).unwrap();
        assert_eq!(f.to_string(), s);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn canonical_printing() {
        rt("exists z. (f(x,z) & g(z,y))");
        rt("x=y & !(exists z. f(x,z))");
        rt("R(x,y) -> R(y,x) -> false");
        rt("(R(x,y) -> R(y,x)) -> true");
        rt("x!=y | R(x,y) & R(y,x)");
        rt("(x!=y | R(x,y)) & R(y,x)");
        rt("forall x. exists y. R(x,y)");
        rt("!!R(x,x)");
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        let f = parse_formula("exists z. R(x,z) & R(z,y)").unwrap();
        assert_eq!(
            f,
            Formula::exists("z", Formula::atom("R", "x", "z").and(Formula::atom("R", "z", "y")))
        );
        let g = parse_formula("(exists z. R(x,z)) & R(z,y)").unwrap();
        assert!(matches!(g, Formula::And(..)));
    }

    #[test]
    fn sugar() {
        assert_eq!(
            parse_formula("exists u, v. R(u,v)").unwrap(),
            parse_formula("exists u. exists v. R(u,v)").unwrap()
        );
        assert_eq!(parse_formula("exists u v. R(u,v)").unwrap(), parse_formula("exists u, v. R(u,v)").unwrap());
        assert_eq!(parse_formula("x != y").unwrap(), Formula::eq("x", "y").not());
    }

    #[test]
    fn errors() {
        assert!(parse_formula("R(x)").is_err());
        assert!(parse_formula("exists . R(x,y)").is_err());
        assert!(parse_formula("R(x,y) &").is_err());
        assert!(parse_formula("x").is_err());
        let e = parse_formula("R(x,y) R(y,x)").unwrap_err().to_string();
        assert!(e.contains("column 8"), "{e}");
    }
}
