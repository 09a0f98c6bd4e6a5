use super::{check, Bounds, Property, Verdict};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::terms::parse_term;
use serde_json::{json, Value};

/// Catalogue rows: name, term over fresh symbols, and the expected
/// `(homsafe, ⊆-safe, fp, forward)` pattern.
pub const TABLE1_EXPECTED: [(&str, &str, [bool; 4]); 14] = [
    ("identity", "id", [true, true, true, true]),
    ("empty", "0", [true, true, true, true]),
    ("top", "T", [true, true, false, false]),
    ("complement", "-f", [false, false, false, false]),
    ("converse", "f^", [true, true, false, false]),
    ("domain", "dom(f)", [true, true, true, true]),
    ("range", "ran(f)", [true, true, true, false]),
    ("antidomain", "~f", [false, false, true, true]),
    ("union", "f | g", [true, true, false, true]),
    ("intersection", "f & g", [true, true, true, true]),
    ("difference", "f \\ g", [false, true, true, true]),
    ("composition", "f ; g", [true, true, true, true]),
    ("semijoin", "f |> g", [true, true, true, true]),
    ("preferential union", "f <+ g", [false, false, true, true]),
];

pub const TABLE1_COLUMNS: [Property; 4] = [Property::Homsafe, Property::Subsafe, Property::Fp, Property::Forward];

pub struct Table1Row {
    pub name: &'static str,
    pub term: &'static str,
    pub expected: [bool; 4],
    pub verdicts: Vec<Verdict>,
}

impl Table1Row {
    pub fn observed(&self) -> [bool; 4] {
        std::array::from_fn(|k| self.verdicts[k].passed())
    }

    pub fn matches(&self) -> bool {
        self.observed() == self.expected
    }
}

pub struct Table1Report {
    pub rows: Vec<Table1Row>,
    pub max_size: Option<usize>,
    pub seed: u64,
}

impl Table1Report {
    pub fn matches(&self) -> bool {
        self.rows.iter().all(Table1Row::matches)
    }

    /// Every failing cell has a witness that re-verified and fits within `domain` elements.
    pub fn witnesses_within(&self, domain: usize) -> bool {
        self.rows.iter().flat_map(|r| &r.verdicts).all(|v| {
            v.passed() || (v.reverified && v.counterexample.as_ref().is_some_and(|c| c.max_domain() <= domain))
        })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<Value> = r.verdicts.iter().map(Verdict::to_json).collect();
                json!({
                    "operation": r.name,
                    "term": r.term,
                    "expected": r.expected,
                    "observed": r.observed(),
                    "matches": r.matches(),
                    "verdicts": cells,
                })
            })
            .collect();
        json!({
            "schema": 1,
            "columns": TABLE1_COLUMNS.map(Property::name),
            "max_size": self.max_size,
            "seed": self.seed,
            "matches": self.matches(),
            "rows": rows,
        })
    }

    /// Plain-text matrix with one row per operation.
    pub fn render(&self) -> String {
        let mut out = format!("{:<20} {:>8} {:>8} {:>8} {:>8}\n", "operation", "homsafe", "subsafe", "fp", "forward");
        for r in &self.rows {
            let cell = |b: bool| if b { "yes" } else { "no" };
            let o = r.observed();
            out.push_str(&format!(
                "{:<20} {:>8} {:>8} {:>8} {:>8}{}\n",
                r.name,
                cell(o[0]),
                cell(o[1]),
                cell(o[2]),
                cell(o[3]),
                if r.matches() { "" } else { "  MISMATCH" }
            ));
        }
        out
    }
}

/// Runs the four column checks on each catalogue operation. `max_size` caps the exhaustive size,
/// which otherwise follows [`Bounds::for_symbols`].
pub fn table1_matrix(max_size: Option<usize>, seed: u64) -> Result<Table1Report> {
    let mut rows = Vec::with_capacity(TABLE1_EXPECTED.len());
    for (name, term, expected) in TABLE1_EXPECTED {
        let op = Oracle::Term(parse_term(term)?);
        let mut bounds = Bounds::for_oracle(&op);
        if let Some(n) = max_size {
            bounds = bounds.with_max_size(n);
        }
        let verdicts = TABLE1_COLUMNS
            .iter()
            .map(|&p| check(&op, p, &bounds, seed))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Table1Row {
            name,
            term,
            expected,
            verdicts,
        });
    }
    Ok(Table1Report { rows, max_size, seed })
}
