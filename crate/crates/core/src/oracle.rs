//! Operations given either as a term or as a defining formula.

use crate::error::{Error, Result};
use crate::logic::{parse_formula, CompiledFormula, Formula};
use crate::structures::{Relation, Structure};
use crate::terms::{parse_term, CompiledTerm, Term};
use std::collections::BTreeSet;
use std::fmt;

/// A binary operation on the relations of a structure, used as a semantic oracle.
#[derive(Clone)]
pub enum Oracle {
    Term(Term),
    /// `{(a,b) | A ⊨ formula[x↦a, y↦b]}`; a missing variable is unconstrained.
    Formula { formula: Formula, x: String, y: String },
}

impl Oracle {
    pub fn formula(f: Formula) -> Oracle {
        Oracle::Formula {
            formula: f,
            x: "x".into(),
            y: "y".into(),
        }
    }

    /// Parses `text` as a term, or as a formula in `x,y` when prefixed with `fo:`.
    pub fn parse(text: &str) -> Result<Oracle> {
        match text.trim().strip_prefix("fo:") {
            Some(f) => Ok(Oracle::formula(parse_formula(f)?)),
            None => Ok(Oracle::Term(parse_term(text)?)),
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        match self {
            Oracle::Term(t) => t.signature(),
            Oracle::Formula { formula, .. } => formula.symbols(),
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Oracle::Term(t) => Some(t),
            Oracle::Formula { .. } => None,
        }
    }

    pub fn compile(&self) -> Result<CompiledOracle> {
        Ok(match self {
            Oracle::Term(t) => CompiledOracle::Term(CompiledTerm::new(t)),
            Oracle::Formula { formula, x, y } => {
                let free = formula.free_vars();
                let extra: Vec<String> = free.iter().filter(|v| *v != x && *v != y).cloned().collect();
                if !extra.is_empty() {
                    return Err(Error::ExtraFreeVariables {
                        allowed: format!("{x},{y}"),
                        extra,
                    });
                }
                CompiledOracle::Formula(CompiledFormula::new(formula), x.clone(), y.clone())
            }
        })
    }

    pub fn eval(&self, a: &Structure) -> Result<Relation> {
        self.compile()?.eval(a)
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Oracle::Term(t) => write!(f, "{t}"),
            Oracle::Formula { formula, .. } => write!(f, "fo:{formula}"),
        }
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Term> for Oracle {
    fn from(t: Term) -> Self {
        Oracle::Term(t)
    }
}

/// An oracle prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub enum CompiledOracle {
    Term(CompiledTerm),
    Formula(CompiledFormula, String, String),
}

impl CompiledOracle {
    pub fn eval(&self, a: &Structure) -> Result<Relation> {
        match self {
            CompiledOracle::Term(t) => t.eval(a),
            CompiledOracle::Formula(f, x, y) => f.relation(a, x, y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_and_formula_agree() {
        let a = Structure::from_lists(&["1", "2", "3"], &[("f", &[("1", "2"), ("2", "3")])]).unwrap();
        let t = Oracle::parse("f ; f").unwrap();
        let p = Oracle::parse("fo: exists z. (f(x,z) & f(z,y))").unwrap();
        assert_eq!(t.eval(&a).unwrap(), p.eval(&a).unwrap());
        assert_eq!(p.to_string(), "fo:exists z. (f(x,z) & f(z,y))");
        assert!(Oracle::parse("fo: f(x,w)").unwrap().eval(&a).is_err());
    }
}
