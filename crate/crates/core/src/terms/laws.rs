use super::{parse_term, Term};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::sliced::compare_over;
use crate::structures::Structure;
use serde_json::{json, Value};

/// Definitions of the derived operations in terms of the others, over symbols `R` and `S`.
pub const DEFINITIONAL_IDENTITIES: [(&str, &str, &str); 7] = [
    ("domain", "dom(R)", "(R ; R^) & id"),
    ("antidomain", "~R", "id \\ dom(R)"),
    ("range", "ran(R)", "dom(R^)"),
    ("semijoin", "R |> S", "R ; dom(S)"),
    ("preferential union", "R <+ S", "R | (S \\ (dom(R) ; T))"),
    ("injective union", "R <# S", "(R <+ S) & (R^ <+ S^)^"),
    ("complement", "-R", "T \\ R"),
];

#[derive(Clone, Debug)]
pub struct LawCheck {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub max_size: usize,
    /// Structures compared, over the joint signature of both sides.
    pub structures: u128,
    /// First structure and pair on which the sides differ.
    pub counterexample: Option<(Structure, (String, String))>,
}

impl LawCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "max_size": self.max_size,
            "structures": self.structures.to_string(),
            "holds": self.holds(),
            "counterexample": self.counterexample.as_ref().map(|(s, (a, b))| json!({
                "structure": s.to_json_value(),
                "pair": [a, b],
            })),
        })
    }
}

/// Compares `lhs` and `rhs` on every structure with at most `max_size` elements over the
/// symbols the two sides mention.
pub fn check_law(name: &str, lhs: &Term, rhs: &Term, max_size: usize) -> Result<LawCheck> {
    let signature: Vec<String> = lhs.signature().union(&rhs.signature()).cloned().collect();
    let cmp = compare_over(&Oracle::Term(lhs.clone()), &Oracle::Term(rhs.clone()), &signature, 1, max_size)?;
    Ok(LawCheck {
        name: name.to_string(),
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        max_size,
        structures: cmp.structures,
        counterexample: cmp.disagreement.map(|d| {
            let pair = (d.structure.name(d.pair.0).to_string(), d.structure.name(d.pair.1).to_string());
            (d.structure, pair)
        }),
    })
}

/// Every identity of [`DEFINITIONAL_IDENTITIES`] at the given size bound.
pub fn check_definitional_identities(max_size: usize) -> Result<Vec<LawCheck>> {
    DEFINITIONAL_IDENTITIES
        .iter()
        .map(|(name, l, r)| check_law(name, &parse_term(l)?, &parse_term(r)?, max_size))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_at_size_two() {
        for c in check_definitional_identities(2).unwrap() {
            assert!(c.holds(), "{}", c.to_json());
        }
    }

    #[test]
    fn a_false_law_is_caught() {
        let c = check_law("bogus", &parse_term("R ; S").unwrap(), &parse_term("S ; R").unwrap(), 2).unwrap();
        assert!(!c.holds());
        assert!(c.counterexample.unwrap().0.size() <= 2);
    }
}
