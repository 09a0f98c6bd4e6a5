use crate::error::{Error, Result};
use crate::structures::{automorphism_orbits, disjoint_union, Domain, OrbitOptions, Relation, Structure};
use crate::terms::{apply_binary, apply_unary, constant, eval, parse_term, semantic_closure, Basis, ClosureOptions, Op, Term};
use serde_json::{json, Value};
use std::collections::BTreeMap;

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 2, got {m}")));
    }
    Ok(())
}

fn normal(i: usize, j: usize) -> String {
    format!("a{i}_{j}")
}

/// The directed `m`-cycle with every vertex tripled: `a{i}_{j}` for `i ∈ 1..=m`, `j ∈ 1..=3`,
/// and an `E`-edge from every `a{i}_{j}` to every `a{i'}_{j'}` with `i' = (i mod m) + 1`.
pub fn build_cm(m: usize) -> Result<Structure> {
    check_m(m)?;
    let mut names = Vec::with_capacity(3 * m);
    let mut edges = Vec::with_capacity(9 * m);
    for i in 1..=m {
        let next = i % m + 1;
        for j in 1..=3 {
            names.push(normal(i, j));
            for j2 in 1..=3 {
                edges.push((normal(i, j), normal(next, j2)));
            }
        }
    }
    Structure::new(names, [("E", edges)])
}

/// `C_m` with every edge `u → u'` replaced by a fresh auxiliary node `w` with `f(w) = u` and
/// `g(w) = u'`. Auxiliary nodes are named `w{i}_{j}_{j'}` after the edge they replace.
pub fn build_cm_vee(m: usize) -> Result<Structure> {
    check_m(m)?;
    let mut names: Vec<String> = (1..=m).flat_map(|i| (1..=3).map(move |j| normal(i, j))).collect();
    let (mut f, mut g) = (Vec::new(), Vec::new());
    for i in 1..=m {
        let next = i % m + 1;
        for j in 1..=3 {
            for j2 in 1..=3 {
                let w = format!("w{i}_{j}_{j2}");
                f.push((w.clone(), normal(i, j)));
                g.push((w.clone(), normal(next, j2)));
                names.push(w);
            }
        }
    }
    Structure::new(names, [("f", f), ("g", g)])
}

/// Member names of `X`, in the order they are listed.
pub const X_NAMES: [&str; 8] = ["f", "g", "id", "id1", "id2", "f|id2", "g|id2", "0"];

/// `C = C_m^∨ ⊎ C_{m'}^∨` together with the eight partial functions of `X` and the separating term.
#[derive(Clone, Debug)]
pub struct CounterexampleBundle {
    pub c: Structure,
    pub m: usize,
    pub m_prime: usize,
    /// Named members of `X`, each with the term that defines it on `c`.
    pub x: Vec<(&'static str, Term, Relation)>,
    /// `(f˘ ∘ g)^m ∩ id`.
    pub separating: Term,
}

impl CounterexampleBundle {
    /// Name of the `X` member equal to `r`, if any.
    pub fn x_member(&self, r: &Relation) -> Option<&'static str> {
        self.x.iter().find(|(_, _, x)| x == r).map(|(n, _, _)| *n)
    }

    pub fn x_relation(&self, name: &str) -> Option<&Relation> {
        self.x.iter().find(|(n, _, _)| *n == name).map(|(_, _, r)| r)
    }

    pub fn separating_value(&self) -> Result<Relation> {
        eval(&self.separating, &self.c)
    }

    pub fn to_json(&self) -> Value {
        let x: Vec<Value> = self
            .x
            .iter()
            .map(|(n, t, r)| json!({"name": n, "term": t.to_string(), "pairs": r.len()}))
            .collect();
        json!({
            "schema": 1,
            "m": self.m,
            "m_prime": self.m_prime,
            "structure": self.c.to_json_value(),
            "x": x,
            "separating": self.separating.to_string(),
        })
    }
}

/// `(f˘ ∘ g)` composed `m` times, intersected with `id`.
fn separating_term(m: usize, f: &Term, g: &Term) -> Term {
    let step = f.clone().converse().then(g.clone());
    let mut acc = step.clone();
    for _ in 1..m {
        acc = acc.then(step.clone());
    }
    acc.meet(Term::id())
}

pub fn build_counterexample(m: usize, m_prime: usize) -> Result<CounterexampleBundle> {
    check_m(m)?;
    check_m(m_prime)?;
    if m == m_prime {
        return Err(Error::InvalidParameter(format!(
            "the two cycle lengths must differ, got {m} twice"
        )));
    }
    let c = disjoint_union(&build_cm_vee(m)?, &build_cm_vee(m_prime)?)?;
    let defs = ["f", "g", "id", "dom(f)", "ran(f) | ran(g)", "f | ran(f) | ran(g)", "g | ran(f) | ran(g)", "0"];
    let x = X_NAMES
        .iter()
        .zip(defs)
        .map(|(name, text)| {
            let t = parse_term(text)?;
            let r = eval(&t, &c)?;
            Ok((*name, t, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let separating = separating_term(m, &Term::sym("f"), &Term::sym("g"));
    Ok(CounterexampleBundle {
        c,
        m,
        m_prime,
        x,
        separating,
    })
}

/// Budget and optional target of the closure run behind [`verify_claim2`].
#[derive(Clone, Debug)]
pub struct Claim2Options {
    pub budget: usize,
}

impl Default for Claim2Options {
    fn default() -> Self {
        Claim2Options { budget: 100_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Claim2Report {
    pub basis: Basis,
    /// Basis operations outside the function-preserving column of the operation table.
    pub non_function_preserving: Vec<Op>,
    /// Closure members with their minimal witness and the `X` member they equal.
    pub members: Vec<(Term, Option<&'static str>)>,
    pub complete: bool,
    /// Smallest closure member outside `X`.
    pub escapee: Option<Term>,
    /// Witness for the separating relation, when the closure reaches it.
    pub separating_witness: Option<Term>,
    /// Every closure member is contained in `f ∪ g ∪ id`.
    pub subclaim1: bool,
}

impl Claim2Report {
    /// Closure stays inside `X` and was computed to a fixpoint.
    pub fn passed(&self) -> bool {
        self.complete && self.escapee.is_none()
    }

    pub fn to_json(&self) -> Value {
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|(t, x)| json!({"witness": t.to_string(), "x_member": x}))
            .collect();
        json!({
            "schema": 1,
            "basis": self.basis.to_string(),
            "non_function_preserving": self.non_function_preserving.iter().map(|o| o.token()).collect::<Vec<_>>(),
            "status": if self.passed() { "pass" } else { "fail" },
            "complete": self.complete,
            "closure_size": self.members.len(),
            "members": members,
            "escapee": self.escapee.as_ref().map(Term::to_string),
            "separating_witness": self.separating_witness.as_ref().map(Term::to_string),
            "subclaim1": self.subclaim1,
        })
    }
}

fn function_preserving(op: Op) -> bool {
    !matches!(op, Op::Top | Op::Complement | Op::Converse | Op::Union)
}

/// Closure of `{f, g}` on `C` under `basis`, compared against `X`.
///
/// The run continues past the first escapee, so a basis that can express the separating
/// relation gets a witness for it (up to the budget).
pub fn verify_claim2(bundle: &CounterexampleBundle, basis: Basis, opts: &Claim2Options) -> Result<Claim2Report> {
    let sep = bundle.separating_value()?;
    let closure = semantic_closure(
        &bundle.c,
        &["f".to_string(), "g".to_string()],
        basis,
        &ClosureOptions {
            max_relations: opts.budget,
            target: Some(sep.clone()),
        },
    )?;
    let fgid = bundle.x_relation("f").unwrap().union(bundle.x_relation("g").unwrap()).union(bundle.x_relation("id").unwrap());
    let members: Vec<(Term, Option<&'static str>)> = closure
        .members
        .iter()
        .map(|(r, t)| (t.clone(), bundle.x_member(r)))
        .collect();
    let escapee = members.iter().find(|(_, x)| x.is_none()).map(|(t, _)| t.clone());
    Ok(Claim2Report {
        basis,
        non_function_preserving: basis.ops().filter(|&o| !function_preserving(o)).collect(),
        subclaim1: closure.members.iter().all(|(r, _)| r.is_subset(&fgid)),
        separating_witness: closure.target.map(|i| closure.members[i].1.clone()),
        complete: closure.complete,
        escapee,
        members,
    })
}

/// Applies every basis operation once to members of `X` and returns the first result outside
/// `X`, described as `op(args)`. Independent of term enumeration.
pub fn closure_escape_direct(bundle: &CounterexampleBundle, basis: Basis) -> Option<String> {
    let n = bundle.c.size();
    for op in basis.constants() {
        if bundle.x_member(&constant(op, n)).is_none() {
            return Some(op.token().to_string());
        }
    }
    for op in basis.unary() {
        for (name, _, r) in &bundle.x {
            if bundle.x_member(&apply_unary(op, r)).is_none() {
                return Some(format!("{}({name})", op.token()));
            }
        }
    }
    for op in basis.binary() {
        for (ln, _, l) in &bundle.x {
            for (rn, _, r) in &bundle.x {
                if bundle.x_member(&apply_binary(op, l, r)).is_none() {
                    return Some(format!("({ln}) {} ({rn})", op.token()));
                }
            }
        }
    }
    None
}

/// For every pair `(a,b)` with `b ∉ {f(a), g(a), a}`, some `(a,b')` with `b' ≠ b` lies in the
/// same automorphism orbit. Returns the first pair for which this fails.
pub fn subclaim1_orbits(bundle: &CounterexampleBundle) -> Result<Option<(String, String)>> {
    let c = &bundle.c;
    let n = c.size();
    let orbits = automorphism_orbits(c, OrbitOptions { max_size: n.max(64) })?;
    let mut orbit_of = vec![0usize; n * n];
    for (k, orbit) in orbits.iter().enumerate() {
        for &(a, b) in orbit {
            orbit_of[a * n + b] = k;
        }
    }
    let (f, g) = (c.relation("f").unwrap(), c.relation("g").unwrap());
    for a in 0..n {
        for b in 0..n {
            if b == a || f.contains(a, b) || g.contains(a, b) {
                continue;
            }
            let k = orbit_of[a * n + b];
            if !(0..n).any(|b2| b2 != b && orbit_of[a * n + b2] == k) {
                return Ok(Some((c.name(a).to_string(), c.name(b).to_string())));
            }
        }
    }
    Ok(None)
}

/// `C` extended with a sink `s` so that all relations are total functions.
#[derive(Clone, Debug)]
pub struct SinkExtension {
    /// Signature `{fhat, ghat, ehat}`.
    pub structure: Structure,
    pub sink: String,
    /// Terms over the new signature recovering the old `f` and `g`.
    pub recovery: BTreeMap<String, Term>,
    /// `((f˘∘g)^m ∩ id) ⊔ ehat` with `f`, `g` replaced by their recovery terms.
    pub total_separating: Term,
}

impl SinkExtension {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "structure": self.structure.to_json_value(),
            "sink": self.sink,
            "recovery": self.recovery.iter().map(|(k, t)| (k.clone(), t.to_string())).collect::<BTreeMap<_, _>>(),
            "total_separating": self.total_separating.to_string(),
        })
    }
}

pub fn sink_extension(bundle: &CounterexampleBundle) -> Result<SinkExtension> {
    let c = &bundle.c;
    let n = c.size();
    let mut sink = "s".to_string();
    while c.index_of(&sink).is_ok() {
        sink.push('\'');
    }
    let mut names = c.domain().names().to_vec();
    names.push(sink.clone());
    let domain = Domain::new(names)?;
    let s = n;
    let embed: Vec<Option<usize>> = (0..n).map(Some).collect();
    let totalize = |r: &Relation| {
        let mut out = r.remap(&embed, n + 1);
        for x in 0..=n {
            if !out.has_successor(x) {
                out.insert(x, s);
            }
        }
        out
    };
    let mut rels = BTreeMap::new();
    rels.insert("fhat".to_string(), totalize(c.relation("f").unwrap()));
    rels.insert("ghat".to_string(), totalize(c.relation("g").unwrap()));
    rels.insert("ehat".to_string(), Relation::from_pairs(n + 1, (0..=n).map(|x| (x, s))));
    let structure = Structure::from_parts(domain, rels);

    let strip = |hat: &str| Term::sym(hat).minus(Term::top().then(Term::sym("ehat")));
    let recovery: BTreeMap<String, Term> = [("f", strip("fhat")), ("g", strip("ghat"))]
        .into_iter()
        .map(|(k, t)| (k.to_string(), t))
        .collect();
    let total_separating = separating_term(bundle.m, &recovery["f"], &recovery["g"]).pref(Term::sym("ehat"));
    Ok(SinkExtension {
        structure,
        sink,
        recovery,
        total_separating,
    })
}
